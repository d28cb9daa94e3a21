"""Tableau documents: a diff-friendly indented text format, one node per
line (`literal [side] -> targetdepth`), bit-exact round-tripping.
"""

from __future__ import annotations

import re
from typing import Optional

from .syntax import Literal
from .tableaux import Node, Tableau, compute_targets
from .tptp import ParseError, _Parser, _parse_literal, format_literal

_HEADER = "tableau"

_LINE_RE = re.compile(
    r"^(?P<indent> *)(?P<lit>.*?)(?:\s+\[(?P<side>[FG])\])?(?:\s+->\s+(?P<target>\d+))?\s*$"
)


def format_tableau(tab: Tableau) -> str:
    compute_targets(tab)
    lines = [_HEADER]

    def emit(n: Node) -> None:
        for c in n.children:
            parts = ["  " * c.depth + format_literal(c.literal)]
            if c.side is not None:
                parts.append(f"[{c.side}]")
            if c.target is not None:
                parts.append(f"-> {c.target.depth}")
            lines.append(" ".join(parts))
            emit(c)

    emit(tab.root)
    return "\n".join(lines) + "\n"


def parse_tableau(text: str) -> Tableau:
    lines = text.splitlines()
    body: list[tuple[int, str]] = []
    for i, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.lstrip().startswith("#") or raw.lstrip().startswith("%"):
            continue
        body.append((i, raw))
    if not body or body[0][1].strip() != _HEADER:
        line = body[0][0] if body else 1
        raise ParseError(f"expected {_HEADER!r} header", line, 1)
    root = Node()
    stack: list[Node] = [root]  # stack[d] = most recent node at depth d
    targets: list[tuple[Node, int, int]] = []
    for line_no, raw in body[1:]:
        m = _LINE_RE.match(raw)
        if m is None or not m.group("lit").strip():
            raise ParseError("malformed tableau line", line_no, 1)
        indent = len(m.group("indent"))
        if indent % 2 != 0:
            raise ParseError("indentation must be a multiple of two spaces", line_no, 1)
        depth = indent // 2
        if depth < 1 or depth > len(stack):
            raise ParseError(f"bad nesting depth {depth}", line_no, 1)
        lit = _parse_single_literal(m.group("lit"), line_no)
        node = Node(lit, m.group("side"))
        stack[depth - 1].add(node)
        del stack[depth:]
        stack.append(node)
        if m.group("target") is not None:
            targets.append((node, int(m.group("target")), line_no))
    for node, tdepth, line_no in targets:
        anc: Optional[Node] = node
        while anc is not None and anc.depth != tdepth:
            anc = anc.parent
        if anc is None or anc.literal is None:
            raise ParseError(f"no ancestor at depth {tdepth}", line_no, 1)
        if anc.literal != node.literal.complement():
            raise ParseError(
                f"target at depth {tdepth} is not complementary", line_no, 1
            )
        node.target = anc
    return Tableau(root)


def _parse_single_literal(text: str, line_no: int) -> Literal:
    try:
        p = _Parser(text)
        lit = _parse_literal(p)
        if p.peek().kind != "eof":
            p.error("trailing input after literal")
        return lit
    except ParseError as e:
        raise ParseError(e.message, line_no, e.col) from None


def tableau_equal(a: Tableau, b: Tableau) -> bool:
    """Structural equality: shape, literals, sides, and target depths."""
    compute_targets(a)
    compute_targets(b)

    def eq(x: Node, y: Node) -> bool:
        if x.literal != y.literal or x.side != y.side:
            return False
        xt = x.target.depth if x.target is not None else None
        yt = y.target.depth if y.target is not None else None
        if xt != yt:
            return False
        if len(x.children) != len(y.children):
            return False
        return all(eq(c, d) for c, d in zip(x.children, y.children))

    return eq(a.root, b.root)
