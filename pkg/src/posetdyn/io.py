"""JSON documents for posets, restrictions and labelings, and DOT export.

A document is an object with ``"elements"`` and ``"covers"`` and optionally
``"restriction"`` (element -> label list), ``"q"``, ``"labeling"`` (element ->
label), ``"toggle_order"`` (element -> integer) and ``"description"``.
JSON arrays used as element identifiers become tuples, so Gamma posets with
``[p, k]`` elements round-trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputFormatError, PosetError
from .labelings import RestrictionFunction
from .poset import Poset


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise InputFormatError(f"element identifiers must be strings, integers or arrays, got {x!r}")


def _thaw(x):
    if isinstance(x, tuple):
        return [_thaw(v) for v in x]
    return x


def element_key(p) -> str:
    """The string under which element ``p`` is keyed in JSON objects."""
    if isinstance(p, str):
        return p
    return json.dumps(_thaw(p), separators=(",", ":"))


@dataclass
class Document:
    poset: Poset
    restriction: RestrictionFunction | None = None
    q: int | None = None
    labeling: dict | None = None
    toggle_order: dict | None = None
    description: str = ""
    extra: dict = field(default_factory=dict)


def _keyed(P: Poset, obj, what: str) -> dict:
    if not isinstance(obj, dict):
        raise InputFormatError(f'"{what}" must be an object keyed by element')
    by_key = {element_key(p): p for p in P.elements}
    out = {}
    for k, v in obj.items():
        if k not in by_key:
            raise InputFormatError(f'"{what}" names unknown element {k!r}')
        out[by_key[k]] = v
    return out


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputFormatError(f"{what} must be an integer, got {v!r}")
    return v


def parse_document(data) -> Document:
    if not isinstance(data, dict):
        raise InputFormatError("document must be a JSON object")
    if "elements" not in data:
        raise InputFormatError('document has no "elements" list')
    elements = data["elements"]
    covers = data.get("covers", [])
    if not isinstance(elements, list) or not isinstance(covers, list):
        raise InputFormatError('"elements" and "covers" must be arrays')
    els = [_freeze(e) for e in elements]
    pairs = []
    for c in covers:
        if not isinstance(c, list) or len(c) != 2:
            raise InputFormatError(f"cover {c!r} is not a [lower, upper] pair")
        pairs.append((_freeze(c[0]), _freeze(c[1])))
    try:
        P = Poset(els, pairs)
    except PosetError as exc:
        raise InputFormatError(str(exc)) from exc
    doc = Document(P, description=str(data.get("description", "")))
    if "restriction" in data:
        raw = _keyed(P, data["restriction"], "restriction")
        sets = {}
        for p, labels in raw.items():
            if not isinstance(labels, list) or not labels:
                raise InputFormatError(f"restriction for {p!r} must be a nonempty list")
            sets[p] = [_int(v, "restriction label") for v in labels]
        doc.restriction = RestrictionFunction(sets)
    if "q" in data:
        doc.q = _int(data["q"], '"q"')
    if "labeling" in data:
        doc.labeling = {p: _int(v, "label") for p, v in _keyed(P, data["labeling"], "labeling").items()}
    if "toggle_order" in data:
        doc.toggle_order = {p: _int(v, "level") for p, v in _keyed(P, data["toggle_order"], "toggle_order").items()}
    known = {"elements", "covers", "restriction", "q", "labeling", "toggle_order", "description"}
    doc.extra = {k: v for k, v in data.items() if k not in known}
    return doc


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_document(path) -> Document:
    return parse_document(read_json(path))


def load_restriction(path, P: Poset) -> RestrictionFunction:
    """A restriction file: either an element -> labels object, or a document
    with a "restriction" key."""
    data = read_json(path)
    if isinstance(data, dict) and "restriction" in data:
        data = data["restriction"]
    raw = _keyed(P, data, "restriction")
    sets = {}
    for p, labels in raw.items():
        if not isinstance(labels, list) or not labels:
            raise InputFormatError(f"restriction for {p!r} must be a nonempty list")
        sets[p] = [_int(v, "restriction label") for v in labels]
    return RestrictionFunction(sets)


# ---------------------------------------------------------------------------
# export


def poset_to_json(P: Poset, R: RestrictionFunction | None = None, **extra) -> dict:
    out = {
        "elements": [_thaw(p) for p in P.elements],
        "covers": [[_thaw(a), _thaw(b)] for a, b in sorted(P.covers, key=lambda c: (P.index(c[0]), P.index(c[1])))],
    }
    if R is not None:
        out["restriction"] = {element_key(p): list(R[p]) for p in P.elements}
    out.update(extra)
    return out


def labeling_to_json(P: Poset, values) -> dict:
    return {element_key(p): int(v) for p, v in zip(P.elements, values)}


def gamma_to_json(G) -> dict:
    out = poset_to_json(G.poset)
    out["ghosts"] = {element_key(p): k for p, (_, k) in G.ghosts.items()}
    out["mode"] = "strict" if G.strict else "weak"
    return out


def _node(p) -> str:
    if isinstance(p, tuple):
        label = ",".join(str(x) for x in p)
    else:
        label = str(p)
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(P: Poset, name: str = "P", ghosts: dict | None = None) -> str:
    """Hasse diagram in DOT, edges drawn lower -> upper. ``ghosts`` maps a
    chain bottom element to a plain-text label drawn underneath it."""
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for p in P.elements:
        lines.append(f"  {_node(p)};")
    for a, b in sorted(P.covers, key=lambda c: (P.index(c[0]), P.index(c[1]))):
        lines.append(f"  {_node(a)} -> {_node(b)};")
    for anchor, ghost in (ghosts or {}).items():
        lines.append(f"  {_node(ghost)} [shape=plaintext];")
        if anchor is not None:
            lines.append(f"  {_node(ghost)} -> {_node(anchor)} [style=invis];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def gamma_to_dot(G, name: str = "Gamma") -> str:
    """DOT for a Gamma poset; each omitted pair (p, max R(p)) is drawn as an
    unboxed label below the chain of p."""
    anchored, loose = {}, []
    for p, ghost in G.ghosts.items():
        chain = [e for e in G.elements if e[0] == p]
        if chain:
            # the lowest pair of a chain carries its largest label
            anchored[chain[-1]] = ghost
        else:
            loose.append(ghost)
    body = to_dot(G.poset, name, anchored)[: -len("}\n")]
    body += "".join(f"  {_node(g)} [shape=plaintext];\n" for g in loose)
    return body + "}\n"
