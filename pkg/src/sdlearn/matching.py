"""Exact assignment solving, the proxy graph, and MWPO.

All solving happens on Python integers: rational matrices are scaled by the
lcm of their denominators, and a base-n tie-break term is appended below the
weight so that the optimum is unique and equals the lexicographically
smallest optimal assignment ``(m(1), m(2), ...)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .instance import ActionSequence, Matching, Weight, greedy_matching, pick_by_rank


class MatchingError(ValueError):
    pass


# -- assignment ---------------------------------------------------------------

def _hungarian_max(a: list[list[int]]) -> list[int]:
    """Max-weight perfect assignment on an integer matrix (0-based rows -> cols).

    Shortest augmenting path with potentials, O(n^3).
    """
    n = len(a)
    inf = math.inf
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = a[i0 - 1]
            ui0 = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = -row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    rows_to_cols = [0] * n
    for j in range(1, n + 1):
        rows_to_cols[p[j] - 1] = j - 1
    return rows_to_cols


def _integer_scale(weights: Sequence[Sequence[Weight]]) -> tuple[list[list[int]], int]:
    denom = 1
    for row in weights:
        for x in row:
            denom = math.lcm(denom, Fraction(x).denominator)
    return [[int(Fraction(x) * denom) for x in row] for row in weights], denom


def _check_square(weights) -> int:
    n = len(weights)
    if n == 0 or any(len(row) != n for row in weights):
        raise MatchingError("weight matrix must be square and non-empty")
    return n


def _solve(weights: Sequence[Sequence[Weight]], allowed=None) -> Matching | None:
    n = _check_square(weights)
    scaled, _ = _integer_scale(weights)
    base = n ** n
    keyed = [[scaled[i][j] * base + (n - 1 - j) * n ** (n - 1 - i) for j in range(n)] for i in range(n)]
    if allowed is not None:
        allowed = set(allowed)
        big = 2 * n * max(abs(x) for row in keyed for x in row) + 1
        for i in range(n):
            for j in range(n):
                if (i + 1, j + 1) not in allowed:
                    keyed[i][j] = -big
    cols = _hungarian_max(keyed)
    if allowed is not None and any((i + 1, cols[i] + 1) not in allowed for i in range(n)):
        return None
    return Matching(tuple(c + 1 for c in cols))


def max_weight_perfect_matching(weights: Sequence[Sequence[Weight]]) -> Matching:
    """Maximum-weight perfect matching; lexicographically smallest among optima."""
    return _solve(weights)


def max_weight_matching_restricted(weights: Sequence[Sequence[Weight]],
                                   allowed: Iterable[tuple[int, int]]) -> Matching | None:
    """Best perfect matching using only ``allowed`` (agent, item) edges, or None."""
    return _solve(weights, allowed)


# -- proxy graph --------------------------------------------------------------

@dataclass
class ProxyGraph:
    """The learner's model: proxy weights, proxy ranks, and known edges.

    ``weights[i - 1][j - 1]`` is None until agent i's row is first learned.
    """

    n: int
    weights: list[list[Weight | None]] = None
    ranks: list[list[int]] = None
    known: set[tuple[int, int]] = field(default_factory=set)

    def __post_init__(self):
        if self.weights is None:
            self.weights = [[None] * self.n for _ in range(self.n)]
        if self.ranks is None:
            self.ranks = [list(range(1, self.n + 1)) for _ in range(self.n)]

    @classmethod
    def exact(cls, weights, ranks, known=None) -> ProxyGraph:
        """A fully specified proxy (no unknown entries)."""
        n = len(weights)
        return cls(n, [list(row) for row in weights], [list(row) for row in ranks],
                   set(known) if known is not None else set())

    def copy(self) -> ProxyGraph:
        return ProxyGraph(self.n, [row[:] for row in self.weights], [row[:] for row in self.ranks], set(self.known))

    def w(self, agent: int, item: int) -> Weight | None:
        return self.weights[agent - 1][item - 1]

    def r(self, agent: int, item: int) -> int:
        return self.ranks[agent - 1][item - 1]

    def item_at_rank(self, agent: int, rank: int) -> int:
        return self.ranks[agent - 1].index(rank) + 1

    def is_complete(self) -> bool:
        return all(x is not None for row in self.weights for x in row)

    def swap_ranks(self, agent: int, j1: int, j2: int) -> None:
        row = self.ranks[agent - 1]
        row[j1 - 1], row[j2 - 1] = row[j2 - 1], row[j1 - 1]

    def move_to_rank(self, agent: int, item: int, rank: int) -> None:
        """Give ``item`` the given rank position; the displaced item takes item's old rank."""
        self.swap_ranks(agent, item, self.item_at_rank(agent, rank))

    def rank_repair(self, agent: int) -> None:
        """Stable re-sort of one agent's ranking by descending proxy weight."""
        row_w = self.weights[agent - 1]
        row_r = self.ranks[agent - 1]
        order = sorted(range(self.n), key=lambda j: (-row_w[j], row_r[j]))
        for position, j in enumerate(order, start=1):
            row_r[j] = position

    def monotonicity_violations(self) -> list[tuple[int, int, int]]:
        out = []
        for i in range(1, self.n + 1):
            for j1 in range(1, self.n + 1):
                for j2 in range(1, self.n + 1):
                    if self.w(i, j1) > self.w(i, j2) and self.r(i, j1) > self.r(i, j2):
                        out.append((i, j1, j2))
        return out


# -- MWPO ---------------------------------------------------------------------

def compute_epsilon(proxy: ProxyGraph) -> Weight:
    """Smallest nonzero gap between two proxy weights of the same agent (1 if none)."""
    best = None
    for row in proxy.weights:
        for a in row:
            for b in row:
                d = abs(a - b)
                if d and (best is None or d < best):
                    best = d
    return 1 if best is None else best


def matching_epsilon(proxy: ProxyGraph) -> Weight:
    """Rational gcd of all nonzero within-row proxy weight gaps (1 if none).

    Every difference between two matchings' proxy weights is an integer
    combination of these gaps, so a total perturbation below this value can
    reorder tied matchings but never overturn a strict weight difference.
    """
    scaled, denom = _integer_scale(proxy.weights)
    g = 0
    for row in scaled:
        for x in row:
            g = math.gcd(g, x - row[0])
    if g == 0:
        return 1
    eps = Fraction(g, denom)
    return eps.numerator if eps.denominator == 1 else eps


def perturbed_weights(proxy: ProxyGraph, epsilon: Weight) -> list[list[Fraction]]:
    n = proxy.n
    return [[Fraction(proxy.w(i, j)) + Fraction(n - proxy.r(i, j), n * n) * epsilon
             for j in range(1, n + 1)] for i in range(1, n + 1)]


def extract_sequence(proxy: ProxyGraph, m: Matching) -> ActionSequence:
    """An order in which greedy picking under the proxy ranks reproduces ``m``.

    Each step lets the lowest-indexed agent whose matched item is their best
    remaining item act next.
    """
    agents = set(range(1, proxy.n + 1))
    items = set(range(1, proxy.n + 1))
    seq = []
    while agents:
        for a in sorted(agents):
            if pick_by_rank(proxy.ranks, a, items) == m[a]:
                break
        else:
            raise MatchingError(f"no agent can act next; {m.assignment} is not Pareto-optimal under the proxy ranks")
        seq.append(a)
        agents.discard(a)
        items.discard(m[a])
    return tuple(seq)


def mwpo(proxy: ProxyGraph, epsilon: Weight | None = None) -> tuple[Matching, ActionSequence]:
    """Maximum-weight Pareto-optimal matching of the proxy plus a sequence inducing it."""
    assert proxy.is_complete(), "MWPO needs every proxy weight to be known"
    assert not proxy.monotonicity_violations(), "proxy ranks disagree with proxy weights"
    if epsilon is None:
        epsilon = matching_epsilon(proxy)
    m = max_weight_perfect_matching(perturbed_weights(proxy, epsilon))
    pi = extract_sequence(proxy, m)
    assert greedy_matching(proxy.ranks, pi) == m
    return m, pi
