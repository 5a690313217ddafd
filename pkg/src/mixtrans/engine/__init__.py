from .heap import BoundedMaxHeap
from .lemmas import (PRUNE_SLACK, lemma1_admissible, lemma2_admissible,
                     lemma3_admissible, lemma4_admissible)
from .search import (ALGORITHMS, RawResult, brute_force_enumerate, materialize,
                     pruned_enumerate, search, topk_enumerate)

__all__ = [
    "ALGORITHMS", "BoundedMaxHeap", "PRUNE_SLACK", "RawResult",
    "brute_force_enumerate", "lemma1_admissible", "lemma2_admissible",
    "lemma3_admissible", "lemma4_admissible", "materialize",
    "pruned_enumerate", "search", "topk_enumerate",
]
