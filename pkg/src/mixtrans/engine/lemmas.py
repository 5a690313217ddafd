"""Necessary conditions for a mixed transport to reach rate ``r``.

Each predicate takes partial distance information about a candidate and
returns False only when no completion of it can have rate <= r, given the
triangle inequality. The symbols follow the usual layout: ``d1, d2, d3``
are lane lengths, ``x = d(t1.start, t3.start)``, ``y = d(t3.start, t1.end)``,
``z = d(t3.end, t1.end)``, ``x1 = d(t1.start, t2.start)`` and
``x2 = d(t2.start, t3.start)``.

All four are written division-free. Every inequality gets a relative
slack of ``PRUNE_SLACK`` on the magnitude of its terms so that rounding can
never prune a candidate that the exact final test would accept. The slack
only weakens the filters.
"""

from numba import njit

PRUNE_SLACK = 1e-9


@njit(cache=True, nogil=True)
def lemma1_admissible(d1, x, y, r):
    """Start base of t3: x + y <= 2r/(1-r) * d1."""
    return (1.0 - r) * (x + y) <= 2.0 * r * d1 + PRUNE_SLACK * (x + y + d1)


@njit(cache=True, nogil=True)
def lemma2_admissible(d1, x, d3, z, r):
    """Lane t3: (1-2r) d3 + (1-r) z <= (r-1) x + r d1.

    One linear form; no case split on r versus 1/2 is needed.
    """
    lhs = (1.0 - 2.0 * r) * d3 + (1.0 - r) * z
    rhs = (r - 1.0) * x + r * d1
    return lhs <= rhs + PRUNE_SLACK * (d3 + z + x + d1)


@njit(cache=True, nogil=True)
def lemma3_admissible(d1, d3, z, x1, x2, r):
    """Start base of t2: x1 + (1-r) x2 <= r d1 + (2r-1) d3 - (1-r) z."""
    lhs = x1 + (1.0 - r) * x2
    rhs = r * d1 + (2.0 * r - 1.0) * d3 - (1.0 - r) * z
    return lhs <= rhs + PRUNE_SLACK * (x1 + x2 + d1 + d3 + z)


@njit(cache=True, nogil=True)
def lemma4_admissible(d1, d3, z, x1, x2, d2, r):
    """Lane t2: d2 >= (x1 + x2 + z)/r - d1 + (1-r)/r * d3, multiplied through by r."""
    lhs = x1 + x2 + z + (1.0 - r) * d3
    rhs = r * (d1 + d2)
    return lhs <= rhs + PRUNE_SLACK * (x1 + x2 + z + d3 + d1 + d2)
