"""Seeded instance families."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .instance import Instance

FAMILIES = ("uniform", "distinct", "all-ties", "adversarial-ties")


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    family: str = "uniform"
    seed: int = 0
    weight_max: int = 10
    tie_mass: float = 0.3

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.weight_max < 1:
            raise ValueError("weight_max must be a positive integer")
        if not 0.0 <= self.tie_mass <= 1.0:
            raise ValueError("tie_mass must lie in [0, 1]")
        if not -(2 ** 63) <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        if self.family == "distinct" and self.weight_max + 1 < self.n:
            raise ValueError(f"distinct rows need weight_max >= n - 1 = {self.n - 1}")


def _ranks_with_random_ties(weights, rng: random.Random):
    ranks = []
    for row in weights:
        keys = [rng.random() for _ in row]
        order = sorted(range(len(row)), key=lambda j: (-row[j], keys[j]))
        rank = [0] * len(row)
        for pos, j in enumerate(order, start=1):
            rank[j] = pos
        ranks.append(rank)
    return ranks


def generate(config: GeneratorConfig) -> Instance:
    n, top = config.n, config.weight_max
    rng = random.Random(f"{config.family}:{config.seed}")
    ranks = None

    if config.family == "uniform":
        weights = []
        for _ in range(n):
            row: list[int] = []
            for _ in range(n):
                if row and rng.random() < config.tie_mass:
                    row.append(rng.choice(row))
                else:
                    row.append(rng.randint(0, top))
            weights.append(row)
    elif config.family == "distinct":
        weights = [rng.sample(range(top + 1), n) for _ in range(n)]
    elif config.family == "all-ties":
        c = rng.randint(0, top)
        weights = [[c] * n for _ in range(n)]
    else:
        # A few shared "hot" items carry the same high value for everyone and
        # the rest come from a tiny palette, with agent-specific tie-breaking.
        palette = sorted(rng.sample(range(top + 1), min(3, top + 1)))
        hot_value, low = palette[-1], palette[:-1] or palette
        hot = set(rng.sample(range(n), max(1, n // 2)))
        weights = [[hot_value if j in hot else rng.choice(low) for j in range(n)] for _ in range(n)]
        ranks = _ranks_with_random_ties(weights, rng)

    return Instance.from_weights(weights, ranks).checked()
