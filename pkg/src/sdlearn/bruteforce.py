"""Exhaustive reference answers for small instances."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .instance import ActionSequence, Instance, Matching, Weight, execute_sequence, pareto_dominates

MAX_SEQUENCE_N = 8
MAX_FRONT_N = 7


class TooLarge(ValueError):
    pass


def _guard(n: int, limit: int) -> None:
    if n > limit:
        raise TooLarge(f"n = {n} exceeds the exhaustive limit of {limit}")


@dataclass(frozen=True)
class ExhaustiveReport:
    best_welfare: Weight
    optimal_sequences: tuple[ActionSequence, ...]
    max_matching_weight: Weight
    sequence_welfare_histogram: dict


def best_sequence_exhaustive(instance: Instance) -> ExhaustiveReport:
    n = instance.n
    _guard(n, MAX_SEQUENCE_N)
    hist: Counter = Counter()
    best, optimal = None, []
    for seq in itertools.permutations(range(1, n + 1)):
        sw = execute_sequence(instance, seq).weight(instance.weights)
        hist[sw] += 1
        if best is None or sw > best:
            best, optimal = sw, [seq]
        elif sw == best:
            optimal.append(seq)
    return ExhaustiveReport(best, tuple(optimal), max_matching_exhaustive(instance.weights),
                            dict(sorted(hist.items())))


def all_perfect_matchings(n: int):
    for perm in itertools.permutations(range(1, n + 1)):
        yield Matching(perm)


def max_matching_exhaustive(weights) -> Weight:
    n = len(weights)
    _guard(n, MAX_SEQUENCE_N)
    return max(sum(weights[i][p[i] - 1] for i in range(n))
               for p in itertools.permutations(range(1, n + 1)))


def pareto_front_exhaustive(ranks) -> set[Matching]:
    n = len(ranks)
    _guard(n, MAX_FRONT_N)
    ms = list(all_perfect_matchings(n))
    return {m for m in ms if not any(pareto_dominates(ranks, other, m) for other in ms)}


def is_pareto_optimal(ranks, m: Matching) -> bool:
    """Single-matching check; cheaper than building the whole front."""
    n = len(ranks)
    _guard(n, MAX_FRONT_N)
    return not any(pareto_dominates(ranks, other, m) for other in all_perfect_matchings(n))
