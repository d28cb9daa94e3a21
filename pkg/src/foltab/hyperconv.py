"""Proof transformation turning any closed clausal tableau into a regular,
leaf-closed tableau with the hyper property (negative literals only at
leaves).  Each round splices out one inner node with a negative literal and
repairs the affected branches with fresh copies of the old subtree; a
lexicographic measure over the rounds is checked to decrease strictly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .tableaux import (
    Node,
    ResourceLimitError,
    StructureError,
    Tableau,
    compute_targets,
    is_closed,
    is_hyper,
    simplify_in_place,
)

OMEGA = float("inf")

DEFAULT_NODE_LIMIT = 10_000_000


class MeasureViolation(Exception):
    """The termination measure failed to decrease; indicates a bug."""


@dataclass
class ConversionRound:
    selected_path: tuple[int, ...]
    measure: tuple
    size_after: int


@dataclass
class ConversionTrace:
    rounds: list[ConversionRound] = field(default_factory=list)
    regular_splices: int = 0
    leaf_truncations: int = 0
    input_size: int = 0
    output_size: int = 0

    @property
    def total_rounds(self) -> int:
        return len(self.rounds)


def node_path(root: Node, node: Node) -> tuple[int, ...]:
    path: list[int] = []
    n = node
    while n is not root:
        path.append(n.parent.children.index(n))
        n = n.parent
    return tuple(reversed(path))


def node_measure(root: Node, node: Node) -> tuple:
    """Right-sibling counts along the root-to-node path, then a symbol
    larger than every number, then the count of distinct negative literals
    on inner strict descendants of the node."""
    chain: list[Node] = []
    n = node
    while n is not None:
        chain.append(n)
        n = n.parent
    chain.reverse()
    code: list[float] = []
    for n in chain:
        if n.parent is None:
            code.append(0)
        else:
            sibs = n.parent.children
            code.append(len(sibs) - 1 - sibs.index(n))
    bad = badlits(node)
    return tuple(code) + (OMEGA, len(bad))


def badlits(node: Node) -> set:
    out = set()
    stack = list(node.children)
    while stack:
        n = stack.pop()
        if n.children and n.literal is not None and not n.literal.positive:
            out.add(n.literal)
        stack.extend(n.children)
    return out


def measure_string(m: tuple) -> str:
    return " ".join("w" if x == OMEGA else str(int(x)) for x in m)


def _select(root: Node) -> Optional[tuple[Node, Node]]:
    """First node in pre-order with a child that is an inner node labeled
    with a negative literal, plus the leftmost such child."""
    for n in root.pre_order():
        for c in n.children:
            if c.children and not c.literal.positive:
                return n, c
    return None


def _count_nodes(root: Node) -> int:
    return sum(1 for _ in root.pre_order())


def hyper_convert(
    tab: Tableau,
    max_nodes: int = DEFAULT_NODE_LIMIT,
    record_trace: bool = True,
) -> tuple[Tableau, ConversionTrace]:
    """Convert a closed tableau to a leaf-closed, regular, hyper tableau
    whose clauses are clauses of the input tableau."""
    if not is_closed(tab):
        raise StructureError("hyper conversion requires a closed tableau")
    trace = ConversionTrace(input_size=tab.inner_size())
    work = tab.copy()
    root = work.root
    spl, tru = simplify_in_place(root)
    trace.regular_splices += spl
    trace.leaf_truncations += tru
    prev: Optional[tuple] = None
    while True:
        sel = _select(root)
        if sel is None:
            break
        nprime, n = sel
        measure = node_measure(root, nprime)
        if prev is not None and not measure < prev:
            raise MeasureViolation(
                f"measure did not decrease: {measure_string(prev)} -> {measure_string(measure)}"
            )
        prev = measure
        path = node_path(root, nprime)

        # fresh copy of the subtree at nprime, minus the edges leaving n
        u_root, mapping = nprime.copy_subtree()
        mapping[id(n)].children = []
        # replace the edges leaving nprime with those leaving n
        nprime.set_children(n.children)
        # graft a copy of u under every leaf descendant that complements n
        comp = n.literal.complement()
        grafts = [
            m
            for m in nprime.pre_order()
            if m is not nprime and not m.children and m.literal == comp
        ]
        for m in grafts:
            u_copy, _ = u_root.copy_subtree()
            m.set_children(u_copy.children)
        spl, tru = simplify_in_place(root)
        trace.regular_splices += spl
        trace.leaf_truncations += tru
        size = _count_nodes(root)
        if size > max_nodes:
            raise ResourceLimitError(
                f"hyper conversion exceeded {max_nodes} nodes"
            )
        if record_trace:
            trace.rounds.append(ConversionRound(path, measure, size))
        else:
            trace.rounds.append(ConversionRound((), measure, 0))
    compute_targets(work)
    if not is_hyper(work):
        raise StructureError("conversion finished on a non-hyper tableau")
    trace.output_size = work.inner_size()
    return work, trace
