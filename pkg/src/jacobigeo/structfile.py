"""Structure-definition files.

A plain-text ``key = value`` format, one entry per line, ``#`` starts a comment::

    name = contact-r3
    kind = contact
    coords = x y z
    excluded = x - 1, y
    eta.x = -y
    eta.z = 1
    g.xx = 1 + y^2
    phi.x.y = 1          # phi^x_y, i.e. phi(d/dy) has d/dx-component 1
    lambda = metric
    expect.jacobi = pass

Index labels are either dotted (``pi.x1.y1``) or concatenated coordinate names
(``pi.xy``) split greedily against the chart.  Values use the expression
grammar of :mod:`jacobigeo.expr`.  The same content round-trips through JSON
(:func:`to_json` / :func:`from_json`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .expr import ExprError
from .manifold import Chart, GeometryError

KINDS = ("poisson", "jacobi", "contact", "almost-contact-metric", "lcs", "lcs-with-metric")
LAMBDA_CHOICES = ("eta", "theta", "metric", "zero")
VERDICT_WORDS = ("pass", "fail", "preconditions-failed", "theorem-violated")

# component prefix -> number of indices
COMPONENTS = {"pi": 2, "g": 2, "eta": 1, "phi": 2, "omega": 2, "theta": 1, "xi": 1,
              "f": 0, "lambda": 1}
_ALLOWED = {
    "poisson": {"pi", "g"},
    "jacobi": {"pi", "xi", "g"},
    "contact": {"eta", "g", "phi"},
    "almost-contact-metric": {"phi", "xi", "eta", "g"},
    "lcs": {"omega", "theta", "f"},
    "lcs-with-metric": {"omega", "theta", "f", "g"},
}


class StructureError(ValueError):
    """Invalid structure definition; carries the 1-based line number when known."""

    def __init__(self, message, line=None, source="<structure>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)


@dataclass
class StructureDef:
    name: str
    kind: str
    coords: tuple
    excluded: tuple = ()
    components: dict = field(default_factory=dict)   # (prefix, index tuple) -> text
    lam: str | None = None
    signature: str = "riemannian"
    expect: dict = field(default_factory=dict)
    description: str = ""
    counterexample: bool = False
    lines: dict = field(default_factory=dict, repr=False)

    def chart(self):
        return Chart(self.coords, self.excluded)

    def has(self, prefix):
        return any(p == prefix for p, _ in self.components)

    def get(self, prefix):
        return {idx: text for (p, idx), text in self.components.items() if p == prefix}


def split_label(label, names):
    """Split ``"xy"`` or ``"x.y"`` into coordinate names; raises on ambiguity."""
    if "." in label:
        parts = label.split(".")
        for p in parts:
            if p not in names:
                raise StructureError(f"unknown coordinate {p!r} in index label {label!r}")
        return tuple(parts)
    found = []

    def walk(rest, acc):
        if not rest:
            found.append(tuple(acc))
            return
        for n in names:
            if rest.startswith(n):
                walk(rest[len(n):], acc + [n])

    walk(label, [])
    if not found:
        raise StructureError(f"cannot split index label {label!r} into coordinates {names}")
    if len(set(found)) > 1:
        raise StructureError(f"ambiguous index label {label!r}; use dots, e.g. "
                             f"{'.'.join(found[0])!r}")
    return found[0]


def _split_key(key, names, line, source):
    prefix, _, label = key.partition(".")
    if prefix not in COMPONENTS:
        raise StructureError(f"unknown key {key!r}", line, source)
    k = COMPONENTS[prefix]
    if k == 0:
        if label:
            raise StructureError(f"{prefix!r} takes no index", line, source)
        return prefix, ()
    if not label:
        raise StructureError(f"{prefix!r} needs {k} index label(s)", line, source)
    try:
        parts = split_label(label, names)
    except StructureError as exc:
        raise StructureError(str(exc).split(": ", 1)[-1], line, source) from None
    if len(parts) != k:
        raise StructureError(f"{prefix!r} needs {k} indices, got {len(parts)}", line, source)
    return prefix, tuple(names.index(p) for p in parts)


def parse_text(text, source="<structure>") -> StructureDef:
    entries = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise StructureError(f"expected 'key = value', got {line!r}", no, source)
        key, _, value = line.partition("=")
        entries.append((key.strip(), value.strip(), no))
    return _from_entries(entries, source)


def _from_entries(entries, source):
    meta = {}
    comps = []
    expect = {}
    for key, value, no in entries:
        if key.startswith("expect."):
            name = key[len("expect."):]
            if value not in VERDICT_WORDS:
                raise StructureError(f"unknown verdict {value!r}", no, source)
            expect[name] = value
        elif key in ("name", "kind", "coords", "excluded", "lambda", "signature",
                     "description", "counterexample"):
            if key in meta:
                raise StructureError(f"duplicate key {key!r}", no, source)
            meta[key] = (value, no)
        else:
            comps.append((key, value, no))
    for req in ("kind", "coords"):
        if req not in meta:
            raise StructureError(f"missing required key {req!r}", None, source)
    kind, kno = meta["kind"]
    if kind not in KINDS:
        raise StructureError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}",
                             kno, source)
    names = tuple(meta["coords"][0].replace(",", " ").split())
    excluded = ()
    if "excluded" in meta and meta["excluded"][0]:
        excluded = tuple(e.strip() for e in meta["excluded"][0].split(",") if e.strip())
    try:
        chart = Chart(names, excluded)
    except (GeometryError, ExprError) as exc:
        raise StructureError(str(exc), meta["coords"][1], source) from None
    lam = None
    components = {}
    lines = {}
    for key, value, no in comps:
        prefix, idx = _split_key(key, list(chart.names), no, source)
        if prefix != "lambda" and prefix not in _ALLOWED[kind]:
            raise StructureError(f"component {prefix!r} does not belong to kind {kind!r}",
                                 no, source)
        if (prefix, idx) in components:
            raise StructureError(f"duplicate component {key!r}", no, source)
        try:
            chart.parse(value)
        except ExprError as exc:
            raise StructureError(f"{key}: {exc}", no, source) from None
        components[(prefix, idx)] = value
        lines[(prefix, idx)] = no
    if "lambda" in meta:
        lam, lno = meta["lambda"]
        if lam not in LAMBDA_CHOICES:
            raise StructureError(f"lambda must be one of {', '.join(LAMBDA_CHOICES)} or given "
                                 "by lambda.<i> components", lno, source)
        if any(p == "lambda" for p, _ in components):
            raise StructureError("lambda given both as a choice and as components", lno, source)
    elif any(p == "lambda" for p, _ in components):
        lam = "explicit"
    sig = meta.get("signature", ("riemannian", None))
    if sig[0] not in ("riemannian", "pseudo"):
        raise StructureError(f"unknown signature {sig[0]!r}", sig[1], source)
    cex = meta.get("counterexample", ("false", None))
    if cex[0] not in ("true", "false"):
        raise StructureError("counterexample must be true or false", cex[1], source)
    return StructureDef(meta.get("name", (source, None))[0], kind, chart.names,
                        excluded, components, lam, sig[0], expect,
                        meta.get("description", ("", None))[0], cex[0] == "true", lines)


def _label(names, idx):
    return ".".join(names[i] for i in idx)


def _component_items(d: StructureDef):
    order = list(COMPONENTS)
    return sorted(d.components.items(), key=lambda kv: (order.index(kv[0][0]), kv[0][1]))


def _key(d, prefix, idx):
    return prefix if not idx else f"{prefix}.{_label(d.coords, idx)}"


def to_text(d: StructureDef) -> str:
    out = []
    if d.description:
        out.append(f"description = {d.description}")
    out += [f"name = {d.name}", f"kind = {d.kind}", f"coords = {' '.join(d.coords)}"]
    if d.excluded:
        out.append(f"excluded = {', '.join(d.excluded)}")
    if d.signature != "riemannian":
        out.append(f"signature = {d.signature}")
    if d.counterexample:
        out.append("counterexample = true")
    for (prefix, idx), text in _component_items(d):
        out.append(f"{_key(d, prefix, idx)} = {text}")
    if d.lam and d.lam != "explicit":
        out.append(f"lambda = {d.lam}")
    for name, verdict in d.expect.items():
        out.append(f"expect.{name} = {verdict}")
    return "\n".join(out) + "\n"


def to_json(d: StructureDef) -> str:
    doc = {
        "name": d.name, "kind": d.kind, "description": d.description,
        "chart": {"dim": len(d.coords), "coords": list(d.coords), "excluded": list(d.excluded)},
        "signature": d.signature, "counterexample": d.counterexample,
        "components": {_key(d, p, idx): t for (p, idx), t in _component_items(d)},
        "lambda": d.lam if d.lam != "explicit" else None,
        "expect": dict(d.expect),
    }
    return json.dumps(doc, indent=2, sort_keys=False)


def from_json(text, source="<json>") -> StructureDef:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"invalid JSON: {exc.msg}", exc.lineno, source) from None
    if not isinstance(doc, dict) or "chart" not in doc:
        raise StructureError("JSON structure needs a 'chart' object", None, source)
    chart = doc["chart"]
    coords = chart.get("coords", [])
    if "dim" in chart and chart["dim"] != len(coords):
        raise StructureError("chart.dim does not match the number of coordinates", None, source)
    entries = [("kind", doc.get("kind", ""), None), ("coords", " ".join(coords), None)]
    if doc.get("name"):
        entries.append(("name", doc["name"], None))
    if doc.get("description"):
        entries.append(("description", doc["description"], None))
    if chart.get("excluded"):
        entries.append(("excluded", ", ".join(chart["excluded"]), None))
    if doc.get("signature"):
        entries.append(("signature", doc["signature"], None))
    if doc.get("counterexample"):
        entries.append(("counterexample", "true", None))
    if doc.get("lambda"):
        entries.append(("lambda", doc["lambda"], None))
    for k, v in doc.get("components", {}).items():
        entries.append((k, str(v), None))
    for k, v in doc.get("expect", {}).items():
        entries.append((f"expect.{k}", v, None))
    return _from_entries(entries, source)


def load_path(path) -> StructureDef:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json") or text.lstrip().startswith("{"):
        return from_json(text, str(path))
    return parse_text(text, str(path))


__all__ = ["KINDS", "LAMBDA_CHOICES", "StructureDef", "StructureError", "from_json",
           "load_path", "parse_text", "split_label", "to_json", "to_text"]
