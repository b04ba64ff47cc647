"""Seeded random generation of valid programs and inputs for testing."""

from __future__ import annotations

import random
from fractions import Fraction

from .program import BPNode, BranchingProgram, Level, Mode


def random_order(n: int, rng: random.Random) -> tuple[int, ...]:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    return tuple(order)


def random_program(
    n: int,
    k: int,
    w: int,
    mode: Mode,
    rng: random.Random,
    *,
    natural_order: bool = False,
    edge_density: float = 0.6,
    tiny_prob_chance: float = 0.0,
    delta: Fraction = Fraction(1, 4),
) -> BranchingProgram:
    """A valid random program of width <= w.

    Nondeterministic nodes may have empty edge lists (dead branches).
    tiny_prob_chance mixes in very small edge probabilities so that
    weak-protocol truncation has something to truncate.
    """
    order = tuple(range(1, n + 1)) if natural_order else random_order(n, rng)
    sizes = [1] + [rng.randint(1, w) for _ in range(k * n - 1)]
    levels = []
    for j in range(k * n):
        var = order[j % n]
        next_size = sizes[j + 1] if j + 1 < k * n else 2
        nodes = []
        for _ in range(sizes[j]):
            nodes.append(
                BPNode(
                    out0=_random_edges(next_size, mode, rng, edge_density, tiny_prob_chance),
                    out1=_random_edges(next_size, mode, rng, edge_density, tiny_prob_chance),
                )
            )
        levels.append(Level(var=var, nodes=tuple(nodes)))
    return BranchingProgram(
        n=n,
        k=k,
        mode=mode,
        order=order,
        levels=tuple(levels),
        zero_sink=1,
        one_sink=2,
        delta=delta if mode is Mode.PROBABILISTIC else None,
    )


def _random_edges(
    next_size: int,
    mode: Mode,
    rng: random.Random,
    density: float,
    tiny_prob_chance: float,
):
    if mode is Mode.DETERMINISTIC:
        return ((rng.randint(1, next_size), None),)
    if mode is Mode.NONDETERMINISTIC:
        targets = [t for t in range(1, next_size + 1) if rng.random() < density]
        return tuple((t, None) for t in targets)
    count = rng.randint(1, min(3, next_size))
    targets = rng.sample(range(1, next_size + 1), count)
    weights = [rng.randint(1, 4) for _ in targets]
    if len(targets) > 1 and rng.random() < tiny_prob_chance:
        weights[0] = 1
        weights[1] = rng.randint(10**5, 10**6)
    total = sum(weights)
    return tuple(
        (t, Fraction(wt, total)) for t, wt in sorted(zip(targets, weights))
    )


def random_inputs(n: int, count: int, rng: random.Random) -> list[tuple[int, ...]]:
    return [tuple(rng.randint(0, 1) for _ in range(n)) for _ in range(count)]
