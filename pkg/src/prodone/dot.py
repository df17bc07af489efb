"""DOT rendering of the cyclic-subsemigroup lattice of a class semigroup.

One node per distinct cyclic subsemigroup <x> = {x, 2x, 3x, ...}, plus the
unit group, the embedded quotient-group copy, and the whole semigroup on
top.  Edges are covering containments.  Nodes generated by an idempotent
(the singletons) are drawn as boxes.  Output is deterministic: nodes are
ordered by (size, members) and edges lexicographically.
"""

from __future__ import annotations

from typing import Mapping, Sequence as Seq


def _cyclic_orbit(op: Seq[Seq[int]], x: int) -> frozenset[int]:
    seen = []
    cur = x
    while cur not in seen:
        seen.append(cur)
        cur = op[cur][x]
    return frozenset(seen)


def lattice_dot(size: int, op: Seq[Seq[int]], reps: Seq[str],
                idempotents: Seq[int], units: Seq[int],
                quotient: Seq[int], title: str) -> str:
    idem_set = set(idempotents)
    sets: dict[frozenset[int], dict] = {}

    def register(members: frozenset[int], label: str, kind: str) -> None:
        node = sets.setdefault(members, {"labels": [], "kinds": set()})
        if label not in node["labels"]:
            node["labels"].append(label)
        node["kinds"].add(kind)

    for x in range(size):
        orbit = _cyclic_orbit(op, x)
        label = f"<[{reps[x] or '1'}]>"
        existing = sets.get(orbit)
        if existing is None or existing["kinds"] == {"special"}:
            register(orbit, label, "cyclic")
        # keep only the first (least class id) generator label per orbit

    register(frozenset(units), "units", "special")
    register(frozenset(quotient), "quotient copy", "special")
    register(frozenset(range(size)), title, "special")

    ordered = sorted(sets, key=lambda s: (len(s), sorted(s)))
    ids = {members: f"n{i}" for i, members in enumerate(ordered)}

    lines = ["digraph class_semigroup_lattice {", "  rankdir=BT;",
             '  node [fontname="Helvetica"];']
    for members in ordered:
        node = sets[members]
        label = " = ".join(node["labels"])
        shape = "box" if (len(members) == 1 and next(iter(members)) in idem_set) \
            else "ellipse"
        peripheries = 2 if "special" in node["kinds"] and len(members) < size else 1
        attrs = [f'label="{label}"', f"shape={shape}"]
        if peripheries > 1:
            attrs.append("peripheries=2")
        lines.append(f"  {ids[members]} [{', '.join(attrs)}];")
    edges = []
    for lo in ordered:
        for hi in ordered:
            if not lo < hi:
                continue
            if any(lo < mid < hi for mid in ordered):
                continue
            edges.append((ids[lo], ids[hi]))
    for a, b in sorted(edges, key=lambda e: (int(e[0][1:]), int(e[1][1:]))):
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_dot_from_result(result: Mapping) -> str:
    return lattice_dot(
        size=result["size"],
        op=result["op"],
        reps=result["representatives"],
        idempotents=result["idempotents"],
        units=result["units"],
        quotient=result["quotient_classes"],
        title="C",
    )


def bottom_node_count(result: Mapping) -> int:
    """Number of box (singleton idempotent) nodes in the rendered lattice."""
    op = result["op"]
    idems = set(result["idempotents"])
    singletons = {frozenset([x]) for x in range(result["size"])
                  if _cyclic_orbit(op, x) == frozenset([x])}
    return sum(1 for s in singletons if next(iter(s)) in idems)
