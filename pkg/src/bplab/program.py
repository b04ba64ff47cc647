"""Leveled oblivious layered branching programs and their evaluation.

A program has k layers of n levels each, every layer reading the
variables in the same order, plus a final sink level holding exactly the
0-sink and the 1-sink. Nodes are identified by (level, ordinal), both
1-based. Three modes share the data model:

* deterministic: exactly one outgoing edge per (node, bit);
* nondeterministic: any number of edges per (node, bit), zero meaning
  the branch rejects;
* probabilistic: edges carry exact rational probabilities summing to 1
  per (node, bit), with a bounded-error margin delta in (0, 1/2).

All evaluation is exact: nondeterministic runs propagate reachable sets
level by level (never path enumeration), probabilistic runs propagate
rational distributions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .bitstrings import all_inputs, parse_bits

Edge = tuple[int, Optional[Fraction]]


class Mode(str, enum.Enum):
    DETERMINISTIC = "det"
    NONDETERMINISTIC = "nd"
    PROBABILISTIC = "prob"


class Outcome(str, enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class BPNode:
    """Outgoing edges of one node, per input bit value."""

    out0: tuple[Edge, ...]
    out1: tuple[Edge, ...]

    def out(self, bit: int) -> tuple[Edge, ...]:
        return self.out1 if bit else self.out0


@dataclass(frozen=True)
class Level:
    """One reading level: the variable it tests and its nodes."""

    var: int
    nodes: tuple[BPNode, ...]


@dataclass(frozen=True)
class EvalResult:
    """Outcome of running a program (or protocol) on one input.

    bit is 0/1 for deterministic and nondeterministic runs; for
    probabilistic runs it mirrors the classified outcome (None when
    undefined) and probability holds the exact acceptance probability.
    """

    outcome: Outcome
    bit: Optional[int] = None
    probability: Optional[Fraction] = None


@dataclass(frozen=True)
class Metrics:
    width: int
    size: int
    length: int


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


@dataclass(frozen=True)
class BranchingProgram:
    """Immutable k-layer ordered branching program.

    levels holds the k*n reading levels; the sink level (index k*n+1)
    is implicit and contains exactly two nodes, with zero_sink/one_sink
    giving the ordinals of the 0-sink and 1-sink.
    """

    n: int
    k: int
    mode: Mode
    order: tuple[int, ...]
    levels: tuple[Level, ...]
    zero_sink: int
    one_sink: int
    delta: Optional[Fraction] = None
    _cache: dict = field(
        init=False, default_factory=dict, compare=False, repr=False
    )

    @property
    def sink_level(self) -> int:
        return self.k * self.n + 1

    def level_sizes(self) -> list[int]:
        sizes = [len(lv.nodes) for lv in self.levels]
        sizes.append(2)
        return sizes

    def _compiled(self) -> "_Compiled":
        c = self._cache.get("compiled")
        if c is None:
            c = _Compiled(self)
            self._cache["compiled"] = c
        return c


class _Compiled:
    """Flattened transition tables for fast repeated evaluation."""

    __slots__ = ("positions", "det", "masks", "probs", "accept_ordinal")

    def __init__(self, p: BranchingProgram):
        self.positions = [lv.var - 1 for lv in p.levels]
        self.accept_ordinal = p.one_sink - 1
        self.det: list | None = None
        self.masks: list | None = None
        self.probs: list | None = None
        if p.mode is Mode.DETERMINISTIC:
            self.det = [
                [(nd.out0[0][0] - 1, nd.out1[0][0] - 1) for nd in lv.nodes]
                for lv in p.levels
            ]
        elif p.mode is Mode.NONDETERMINISTIC:
            self.masks = [
                [
                    (
                        _mask([e[0] for e in nd.out0]),
                        _mask([e[0] for e in nd.out1]),
                    )
                    for nd in lv.nodes
                ]
                for lv in p.levels
            ]
        else:
            self.probs = [
                [
                    (
                        tuple((e[0] - 1, e[1]) for e in nd.out0),
                        tuple((e[0] - 1, e[1]) for e in nd.out1),
                    )
                    for nd in lv.nodes
                ]
                for lv in p.levels
            ]


def _mask(targets: Sequence[int]) -> int:
    m = 0
    for t in targets:
        m |= 1 << (t - 1)
    return m


def validate(p: BranchingProgram) -> ValidationReport:
    """Check every structural invariant; violations are report entries."""
    out: list[Violation] = []

    def bad(kind: str, where: str, message: str):
        out.append(Violation(kind, where, message))

    if p.n < 1:
        bad("structure", "header", f"n must be >= 1, got {p.n}")
    if p.k < 1:
        bad("structure", "header", f"k must be >= 1, got {p.k}")
    if sorted(p.order) != list(range(1, p.n + 1)):
        bad("order", "order", f"order {p.order} is not a permutation of 1..{p.n}")

    if p.mode is Mode.PROBABILISTIC:
        if p.delta is None or not (0 < p.delta < Fraction(1, 2)):
            bad("delta", "header", f"delta must be in (0, 1/2), got {p.delta}")
    elif p.delta is not None:
        bad("delta", "header", "delta is only meaningful in probabilistic mode")

    expected = p.k * p.n
    if len(p.levels) != expected:
        bad(
            "structure",
            "levels",
            f"expected {expected} reading levels, got {len(p.levels)}",
        )
        return ValidationReport(tuple(out))

    if len(p.levels[0].nodes) != 1:
        bad("structure", "level 1", "level 1 must hold exactly the source node")
    if p.zero_sink == p.one_sink or not all(
        1 <= s <= 2 for s in (p.zero_sink, p.one_sink)
    ):
        bad(
            "structure",
            "sinks",
            f"sinks must be the two distinct nodes of the final level, "
            f"got zero={p.zero_sink} one={p.one_sink}",
        )

    for j, lv in enumerate(p.levels, start=1):
        want = p.order[(j - 1) % p.n]
        if lv.var != want:
            bad(
                "ordered",
                f"level {j}",
                f"reads x{lv.var} but order requires x{want}",
            )
        if not lv.nodes:
            bad("structure", f"level {j}", "level has no nodes")
        next_size = len(p.levels[j].nodes) if j < expected else 2
        for i, node in enumerate(lv.nodes, start=1):
            for bit, edges in ((0, node.out0), (1, node.out1)):
                where = f"level {j} node {i} bit {bit}"
                targets = [e[0] for e in edges]
                if any(not 1 <= t <= next_size for t in targets):
                    bad(
                        "leveled",
                        where,
                        f"edge target out of range for level {j + 1} "
                        f"(size {next_size})",
                    )
                if len(set(targets)) != len(targets):
                    bad("edges", where, "duplicate edge targets")
                if p.mode is Mode.DETERMINISTIC:
                    if len(edges) != 1:
                        bad(
                            "edges",
                            where,
                            f"deterministic node needs exactly one edge, "
                            f"got {len(edges)}",
                        )
                    if any(e[1] is not None for e in edges):
                        bad("edges", where, "probability on deterministic edge")
                elif p.mode is Mode.NONDETERMINISTIC:
                    if any(e[1] is not None for e in edges):
                        bad("edges", where, "probability on nondeterministic edge")
                else:
                    if any(e[1] is None for e in edges):
                        bad("probability", where, "probabilistic edge without weight")
                    elif any(e[1] < 0 for e in edges):
                        bad("probability", where, "negative edge probability")
                    elif sum((e[1] for e in edges), Fraction(0)) != 1:
                        total = sum((e[1] for e in edges), Fraction(0))
                        bad(
                            "probability",
                            where,
                            f"edge probabilities sum to {total}, not 1",
                        )
    return ValidationReport(tuple(out))


def metrics(p: BranchingProgram) -> Metrics:
    """Width (max level size, sink level included), size, and length."""
    sizes = p.level_sizes()
    return Metrics(width=max(sizes), size=sum(sizes), length=p.n * p.k)


def evaluate(p: BranchingProgram, input_bits: str | Sequence[int]) -> EvalResult:
    """Run p on one input; see the module docstring for semantics."""
    bits = parse_bits(input_bits)
    if len(bits) != p.n:
        raise ValueError(f"input length {len(bits)} != n={p.n}")
    c = p._compiled()
    if c.det is not None:
        node = 0
        for pos, table in zip(c.positions, c.det):
            node = table[node][bits[pos]]
        accepted = node == c.accept_ordinal
        return EvalResult(
            outcome=Outcome.ACCEPT if accepted else Outcome.REJECT,
            bit=1 if accepted else 0,
        )
    if c.masks is not None:
        frontier = 1
        for pos, table in zip(c.positions, c.masks):
            b = bits[pos]
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= table[low.bit_length() - 1][b]
                m ^= low
            frontier = nxt
            if not frontier:
                break
        accepted = bool(frontier >> c.accept_ordinal & 1)
        return EvalResult(
            outcome=Outcome.ACCEPT if accepted else Outcome.REJECT,
            bit=1 if accepted else 0,
        )
    dist: dict[int, Fraction] = {0: Fraction(1)}
    assert c.probs is not None
    for pos, table in zip(c.positions, c.probs):
        b = bits[pos]
        nxt: dict[int, Fraction] = {}
        for node, mass in dist.items():
            for target, pr in table[node][1] if b else table[node][0]:
                if pr:
                    nxt[target] = nxt.get(target, Fraction(0)) + mass * pr
        dist = nxt
    prob = dist.get(c.accept_ordinal, Fraction(0))
    return EvalResult(
        outcome=classify_probability(prob, p.delta),
        bit=classified_bit(prob, p.delta),
        probability=prob,
    )


def classify_probability(prob: Fraction, delta: Fraction | None) -> Outcome:
    """Bounded-error classification: accept above 1/2+delta, reject below
    1/2-delta, undefined in the closed middle band."""
    if delta is None:
        raise ValueError("classification requires delta")
    half = Fraction(1, 2)
    if prob > half + delta:
        return Outcome.ACCEPT
    if prob < half - delta:
        return Outcome.REJECT
    return Outcome.UNDEFINED


def classified_bit(prob: Fraction, delta: Fraction | None) -> Optional[int]:
    outcome = classify_probability(prob, delta)
    if outcome is Outcome.ACCEPT:
        return 1
    if outcome is Outcome.REJECT:
        return 0
    return None


def acceptance_probability(
    p: BranchingProgram, input_bits: str | Sequence[int]
) -> Fraction:
    """Exact rational probability of reaching the 1-sink (prob mode)."""
    if p.mode is not Mode.PROBABILISTIC:
        raise ValueError("acceptance_probability requires probabilistic mode")
    res = evaluate(p, input_bits)
    assert res.probability is not None
    return res.probability


def program_truth_table(p: BranchingProgram) -> list[int]:
    """Truth table over all 2^n inputs in index order (det/nd modes)."""
    if p.mode is Mode.PROBABILISTIC:
        raise ValueError("probabilistic programs have no 0/1 truth table")
    return [evaluate(p, bits).bit for bits in all_inputs(p.n)]  # type: ignore[misc]


def enumerate_accepting_paths(
    p: BranchingProgram, input_bits: str | Sequence[int]
) -> int:
    """Count consistent source-to-1-sink paths by explicit DFS.

    Test oracle for the reachable-set semantics; exponential, only
    sensible on tiny programs.
    """
    if p.mode is Mode.PROBABILISTIC:
        raise ValueError("path enumeration is for det/nd modes")
    bits = parse_bits(input_bits)
    total_levels = len(p.levels)

    def walk(level_idx: int, ordinal: int) -> int:
        if level_idx == total_levels:
            return 1 if ordinal == p.one_sink else 0
        lv = p.levels[level_idx]
        b = bits[lv.var - 1]
        return sum(walk(level_idx + 1, e[0]) for e in lv.nodes[ordinal - 1].out(b))

    return walk(0, 1)
