"""BPv1: the line-oriented textual program format.

Grammar (UTF-8, one record per line):

    BPv1 mode=<det|nd|prob> n=<n> k=<k> [delta=<p>/<q>]
    order <j1> <j2> ... <jn>
    level <L> var <x> nodes <m>
    node <i> 0:(<L+1>,<i'>)[*<p>/<q>],... 1:(<L+1>,<i''>)[*<p>/<q>],...
    ...
    sinks zero=(<L>,<i>) one=(<L>,<i>)

Parsing is bit-exact: probabilities must be rationals in lowest terms,
the order line must be a permutation, and duplicate node ids are errors.
Serialization is canonical, so emitted files re-parse to equal programs
and re-serialize byte-identically.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .program import BPNode, BranchingProgram, Edge, Level, Mode


class FormatError(ValueError):
    """Raised on any malformed BPv1/CPv1 input."""


_HEADER_RE = re.compile(
    r"^BPv1 mode=(det|nd|prob) n=(\d+) k=(\d+)(?: delta=(\d+)/(\d+))?$"
)
_LEVEL_RE = re.compile(r"^level (\d+) var (\d+) nodes (\d+)$")
_NODE_RE = re.compile(r"^node (\d+) 0:(\S*) 1:(\S*)$")
_SINKS_RE = re.compile(r"^sinks zero=\((\d+),(\d+)\) one=\((\d+),(\d+)\)$")
_EDGE_RE = re.compile(r"^\((\d+),(\d+)\)(?:\*(\d+)/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse p/q, requiring lowest terms and a positive denominator."""
    m = re.fullmatch(r"(-?\d+)/(\d+)", text)
    if not m:
        raise FormatError(f"malformed rational {text!r}")
    num, den = int(m.group(1)), int(m.group(2))
    return _check_lowest(num, den, text)


def _check_lowest(num: int, den: int, text: str) -> Fraction:
    if den == 0:
        raise FormatError(f"zero denominator in {text!r}")
    f = Fraction(num, den)
    if f.numerator != num or f.denominator != den:
        raise FormatError(f"rational {text!r} is not in lowest terms")
    return f


def format_rational(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _format_edges(edges: tuple[Edge, ...], next_level: int) -> str:
    parts = []
    for target, prob in edges:
        s = f"({next_level},{target})"
        if prob is not None:
            s += f"*{format_rational(prob)}"
        parts.append(s)
    return ",".join(parts)


def program_to_text(p: BranchingProgram) -> str:
    """Serialize to canonical BPv1 text (trailing newline included)."""
    lines = []
    head = f"BPv1 mode={p.mode.value} n={p.n} k={p.k}"
    if p.delta is not None:
        head += f" delta={format_rational(p.delta)}"
    lines.append(head)
    lines.append("order " + " ".join(str(j) for j in p.order))
    for idx, lv in enumerate(p.levels, start=1):
        lines.append(f"level {idx} var {lv.var} nodes {len(lv.nodes)}")
        for i, node in enumerate(lv.nodes, start=1):
            lines.append(
                f"node {i} 0:{_format_edges(node.out0, idx + 1)}"
                f" 1:{_format_edges(node.out1, idx + 1)}"
            )
    sl = p.sink_level
    lines.append(f"sinks zero=({sl},{p.zero_sink}) one=({sl},{p.one_sink})")
    return "\n".join(lines) + "\n"


def _parse_edges(text: str, expect_level: int, mode: Mode, where: str) -> tuple[Edge, ...]:
    if text == "":
        return ()
    edges: list[Edge] = []
    for part in text.split(","):
        m = _EDGE_RE.match(part)
        if not m:
            raise FormatError(f"malformed edge {part!r} at {where}")
        lvl, target = int(m.group(1)), int(m.group(2))
        if lvl != expect_level:
            raise FormatError(
                f"edge at {where} targets level {lvl}, expected {expect_level}"
            )
        prob = None
        if m.group(3) is not None:
            if mode is not Mode.PROBABILISTIC:
                raise FormatError(f"probability on edge at {where} in {mode.value} mode")
            prob = _check_lowest(int(m.group(3)), int(m.group(4)), part)
        edges.append((target, prob))
    return tuple(edges)


def program_from_text(text: str) -> BranchingProgram:
    """Parse BPv1 text; raises FormatError on any deviation."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty input")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise FormatError(f"malformed header {lines[0]!r}")
    mode = Mode(m.group(1))
    n, k = int(m.group(2)), int(m.group(3))
    delta = None
    if m.group(4) is not None:
        if mode is not Mode.PROBABILISTIC:
            raise FormatError("delta is only valid in prob mode")
        delta = _check_lowest(int(m.group(4)), int(m.group(5)), lines[0])
    if len(lines) < 2 or not lines[1].startswith("order "):
        raise FormatError("missing order line")
    try:
        order = tuple(int(t) for t in lines[1].split()[1:])
    except ValueError as exc:
        raise FormatError(f"malformed order line {lines[1]!r}") from exc
    if sorted(order) != list(range(1, n + 1)):
        raise FormatError(f"order {order} is not a permutation of 1..{n}")

    levels: list[Level] = []
    pos = 2
    for lvl_idx in range(1, n * k + 1):
        if pos >= len(lines):
            raise FormatError(f"missing level {lvl_idx}")
        m = _LEVEL_RE.match(lines[pos])
        if not m:
            raise FormatError(f"expected level header, got {lines[pos]!r}")
        if int(m.group(1)) != lvl_idx:
            raise FormatError(
                f"level header out of sequence: got {m.group(1)}, expected {lvl_idx}"
            )
        var, count = int(m.group(2)), int(m.group(3))
        if count < 1:
            raise FormatError(f"level {lvl_idx} declares no nodes")
        pos += 1
        nodes: dict[int, BPNode] = {}
        for _ in range(count):
            if pos >= len(lines):
                raise FormatError(f"missing node line in level {lvl_idx}")
            nm = _NODE_RE.match(lines[pos])
            if not nm:
                raise FormatError(f"malformed node line {lines[pos]!r}")
            i = int(nm.group(1))
            if i in nodes:
                raise FormatError(f"duplicate node id {i} in level {lvl_idx}")
            if not 1 <= i <= count:
                raise FormatError(
                    f"node id {i} out of range 1..{count} in level {lvl_idx}"
                )
            where = f"level {lvl_idx} node {i}"
            nodes[i] = BPNode(
                out0=_parse_edges(nm.group(2), lvl_idx + 1, mode, where),
                out1=_parse_edges(nm.group(3), lvl_idx + 1, mode, where),
            )
            pos += 1
        levels.append(Level(var=var, nodes=tuple(nodes[i] for i in range(1, count + 1))))

    if pos >= len(lines):
        raise FormatError("missing sinks line")
    sm = _SINKS_RE.match(lines[pos])
    if not sm:
        raise FormatError(f"malformed sinks line {lines[pos]!r}")
    sink_level = n * k + 1
    if int(sm.group(1)) != sink_level or int(sm.group(3)) != sink_level:
        raise FormatError(f"sinks must live in level {sink_level}")
    if pos + 1 != len(lines):
        raise FormatError("trailing content after sinks line")
    return BranchingProgram(
        n=n,
        k=k,
        mode=mode,
        order=order,
        levels=tuple(levels),
        zero_sink=int(sm.group(2)),
        one_sink=int(sm.group(4)),
        delta=delta,
    )
