"""Graphviz DOT export of decorated chains and MMP states.

Kept curves are drawn as circles and curves inside a singular point as boxes;
node labels carry self-intersections.
"""

from __future__ import annotations

from .mmp import BOUNDARY, SECTION, FamilyState
from .resolutions import DecoratedResolution


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _render(name: str, nodes: list[tuple[int, bool, str | None]]) -> str:
    lines = [f"graph {_quote(name)} {{", "  rankdir=LR;", "  node [fontsize=10];"]
    for i, (selfint, boxed, tag) in enumerate(nodes):
        shape = "box" if boxed else "circle"
        attrs = [f"shape={shape}", f"label={_quote(str(selfint))}"]
        if tag:
            attrs.append(f"xlabel={_quote(tag)}")
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for i in range(1, len(nodes)):
        lines.append(f"  n{i - 1} -- n{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def resolution_to_dot(dec: DecoratedResolution, name: str = "resolution") -> str:
    owner = dec.block_of()
    return _render(name, [(-c, b is not None, None) for c, b in zip(dec.chain, owner)])


def state_to_dot(state: FamilyState, name: str = "fibre") -> str:
    nodes = []
    for c in state.curves:
        tag = c.label if c.role in (BOUNDARY, SECTION) else None
        nodes.append((c.selfint, c.block is not None, tag))
    return _render(name, nodes)
