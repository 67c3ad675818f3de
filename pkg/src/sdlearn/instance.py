"""Ground-truth instances and pure serial-dictatorship execution.

Agents and items are 1-based everywhere in the public API.  Matrices are
stored row-major as nested tuples, so ``weights[i - 1][j - 1]`` is the value
agent ``i`` has for item ``j`` and ``ranks[i - 1][j - 1]`` is that item's
position in agent ``i``'s strict ranking (1 = best).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Mapping, Sequence

Weight = int | Fraction
ActionSequence = tuple[int, ...]


class InstanceError(ValueError):
    """Raised for malformed instances, sequences or matchings."""


def _as_weight(value) -> Weight:
    if isinstance(value, bool):
        raise InstanceError(f"weight must be rational, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Rational):
        f = Fraction(value)
        return f.numerator if f.denominator == 1 else f
    if isinstance(value, str):
        try:
            f = Fraction(value)
        except ValueError as exc:
            raise InstanceError(f"cannot parse weight {value!r}") from exc
        return f.numerator if f.denominator == 1 else f
    raise InstanceError(f"weight must be an int or rational, got {value!r}")


def ranks_from_weights(weights: Sequence[Sequence[Weight]]) -> tuple[tuple[int, ...], ...]:
    """Rank items by descending weight, lower item index first among ties."""
    out = []
    for row in weights:
        order = sorted(range(len(row)), key=lambda j: (-row[j], j))
        rank = [0] * len(row)
        for position, j in enumerate(order, start=1):
            rank[j] = position
        out.append(tuple(rank))
    return tuple(out)


@dataclass(frozen=True)
class Instance:
    """Complete bipartite instance with explicit tie-breaking ranks.

    The constructor normalises containers but does not reject inconsistent
    data; call :func:`validate` (or :meth:`checked`) for that.
    """

    n: int
    weights: tuple[tuple[Weight, ...], ...]
    ranks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(tuple(_as_weight(x) for x in row) for row in self.weights))
        object.__setattr__(self, "ranks", tuple(tuple(int(r) for r in row) for row in self.ranks))
        if self.n < 1:
            raise InstanceError("n must be positive")
        if len(self.weights) != self.n or any(len(row) != self.n for row in self.weights):
            raise InstanceError(f"weights must be {self.n}x{self.n}")
        if len(self.ranks) != self.n or any(len(row) != self.n for row in self.ranks):
            raise InstanceError(f"ranks must be {self.n}x{self.n}")

    @classmethod
    def from_weights(cls, weights, ranks=None) -> Instance:
        weights = [list(row) for row in weights]
        if ranks is None:
            ranks = ranks_from_weights([[_as_weight(x) for x in row] for row in weights])
        return cls(len(weights), weights, ranks)

    def checked(self) -> Instance:
        problems = validate(self)
        if problems:
            raise InstanceError("; ".join(problems))
        return self

    def w(self, agent: int, item: int) -> Weight:
        return self.weights[agent - 1][item - 1]

    def r(self, agent: int, item: int) -> int:
        return self.ranks[agent - 1][item - 1]

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        def enc(x):
            return x if isinstance(x, int) else str(x)

        return {
            "n": self.n,
            "weights": [[enc(x) for x in row] for row in self.weights],
            "ranks": [list(row) for row in self.ranks],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Instance:
        try:
            n = data["n"]
            weights = data["weights"]
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"instance JSON needs 'n' and 'weights': {exc}") from exc
        if not isinstance(n, int) or isinstance(n, bool):
            raise InstanceError("'n' must be an integer")
        inst = cls.from_weights(weights, data.get("ranks"))
        if inst.n != n:
            raise InstanceError(f"'n' is {n} but weights have {inst.n} rows")
        return inst

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path) -> Instance:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InstanceError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_json(data).checked()


@dataclass(frozen=True)
class Matching:
    """Agent-to-item assignment; ``assignment[i - 1]`` is agent i's item or None."""

    assignment: tuple[int | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        taken = [j for j in self.assignment if j is not None]
        if len(taken) != len(set(taken)):
            raise InstanceError(f"matching assigns an item twice: {self.assignment}")

    @classmethod
    def from_dict(cls, n: int, mapping: Mapping[int, int]) -> Matching:
        return cls(tuple(mapping.get(i) for i in range(1, n + 1)))

    def __getitem__(self, agent: int) -> int | None:
        return self.assignment[agent - 1]

    def __len__(self):
        return len(self.assignment)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def is_perfect(self) -> bool:
        return all(j is not None for j in self.assignment) and (
            sorted(self.assignment) == list(range(1, self.n + 1))
        )

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j in enumerate(self.assignment, start=1) if j is not None)

    def as_dict(self) -> dict[int, int]:
        return dict(self.edges())

    def weight(self, weights: Sequence[Sequence[Weight]]) -> Weight:
        """Total weight under an arbitrary (e.g. proxy) weight matrix."""
        if not self.is_perfect():
            raise InstanceError("weight is only defined for perfect matchings")
        return sum((weights[i - 1][j - 1] for i, j in self.edges()), 0)


def validate(instance: Instance) -> list[str]:
    """Return every violated instance invariant (empty list means ok)."""
    n = instance.n
    problems = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if instance.w(i, j) < 0:
                problems.append(f"negative weight w({i},{j}) = {instance.w(i, j)}")
    for i in range(1, n + 1):
        row = instance.ranks[i - 1]
        if sorted(row) != list(range(1, n + 1)):
            problems.append(f"rank not bijective for agent {i}: {list(row)}")
            continue
        for j1 in range(1, n + 1):
            for j2 in range(1, n + 1):
                if instance.w(i, j1) > instance.w(i, j2) and not instance.r(i, j1) < instance.r(i, j2):
                    problems.append(
                        f"rank inconsistent with weights for agent {i}: "
                        f"w({i},{j1}) > w({i},{j2}) but r({j1}) = {instance.r(i, j1)} "
                        f">= r({j2}) = {instance.r(i, j2)}"
                    )
    return problems


def check_sequence(seq: Iterable[int], n: int, full: bool = False) -> ActionSequence:
    seq = tuple(seq)
    if any(not isinstance(a, int) or isinstance(a, bool) or not 1 <= a <= n for a in seq):
        raise InstanceError(f"sequence entries must be agents in 1..{n}: {seq}")
    if len(set(seq)) != len(seq):
        raise InstanceError(f"sequence repeats an agent: {seq}")
    if full and len(seq) != n:
        raise InstanceError(f"expected a full sequence of {n} agents, got {seq}")
    return seq


def pick_by_rank(ranks: Sequence[Sequence[int]], agent: int, available: Iterable[int]) -> int:
    """Item with the best rank for ``agent`` among ``available``."""
    row = ranks[agent - 1]
    best = None
    for j in available:
        if best is None or row[j - 1] < row[best - 1]:
            best = j
    if best is None:
        raise InstanceError(f"agent {agent} has no available item to pick")
    return best


def pick(instance: Instance, agent: int, available: Iterable[int]) -> tuple[int, Weight]:
    item = pick_by_rank(instance.ranks, agent, available)
    return item, instance.w(agent, item)


def greedy_matching(ranks: Sequence[Sequence[int]], seq: Sequence[int]) -> Matching:
    """Let the agents of ``seq`` pick in turn; partial sequences give partial matchings."""
    n = len(ranks)
    seq = check_sequence(seq, n)
    remaining = set(range(1, n + 1))
    assignment: list[int | None] = [None] * n
    for agent in seq:
        item = pick_by_rank(ranks, agent, remaining)
        remaining.discard(item)
        assignment[agent - 1] = item
    return Matching(tuple(assignment))


def execute_sequence(instance: Instance, seq: Sequence[int]) -> Matching:
    check_sequence(seq, instance.n, full=True)
    return greedy_matching(instance.ranks, seq)


def social_welfare(instance: Instance, m: Matching) -> Weight:
    if m.n != instance.n or not m.is_perfect():
        raise InstanceError("social welfare needs a perfect matching of the instance")
    return m.weight(instance.weights)


def pareto_dominates(ranks: Sequence[Sequence[int]], m1: Matching, m2: Matching) -> bool:
    """True iff every agent weakly prefers m1 to m2 and some agent strictly."""
    strict = False
    for i in range(1, len(ranks) + 1):
        a, b = ranks[i - 1][m1[i] - 1], ranks[i - 1][m2[i] - 1]
        if a > b:
            return False
        strict = strict or a < b
    return strict
