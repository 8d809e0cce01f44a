"""The line-oriented ``.gm`` text format and DOT export.

::

    # comment
    manifold <name>
    piece <id> genus=<int> [fibers=<a1>/<b1>,<a2>/<b2>,...]
    edge <id> <piece>:<int> -> <piece>:<int> matrix=[<a>,<b>;<c>,<d>]

Fibers given with beta outside [1, alpha-1] are normalized; the integer
part is absorbed by a section change on the piece's boundary torus 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    Edge,
    Endpoint,
    GluingMatrix,
    GraphManifold,
    GraphManifoldError,
    SeifertPiece,
    ValidationError,
    split_fiber,
    twist_sections,
    validate,
)


class ParseError(GraphManifoldError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ManifoldValidationError(ValidationError):
    """Validation failure with the source lines of the offending declarations."""

    def __init__(self, violations, lines: dict[str, int]):
        self.lines = lines
        super().__init__(violations)
        located = []
        for v in self.violations:
            line = lines.get(v.subject)
            located.append(f"line {line}: {v}" if line else str(v))
        self.args = ("; ".join(located),)


_ID = r"[A-Za-z0-9_.']+"
_INT = r"[+-]?\d+"
_FIBER = rf"{_INT}\s*/\s*{_INT}"

# each grammar rule is a sequence of fragments so a mismatch can be located
_RULES = {
    "manifold": [r"manifold\s+", rf"(?P<name>{_ID})", r"\s*$"],
    "piece": [
        r"piece\s+", rf"(?P<id>{_ID})", r"\s+genus\s*=\s*", rf"(?P<genus>{_INT})",
        rf"(?:\s+fibers\s*=\s*(?P<fibers>{_FIBER}(?:\s*,\s*{_FIBER})*))?", r"\s*$",
    ],
    "edge": [
        r"edge\s+", rf"(?P<id>{_ID})", r"\s+", rf"(?P<sp>{_ID})", r"\s*:\s*", r"(?P<si>\d+)",
        r"\s*->\s*", rf"(?P<tp>{_ID})", r"\s*:\s*", r"(?P<ti>\d+)",
        r"\s+matrix\s*=\s*\[\s*", rf"(?P<a>{_INT})", r"\s*,\s*", rf"(?P<b>{_INT})",
        r"\s*;\s*", rf"(?P<c>{_INT})", r"\s*,\s*", rf"(?P<d>{_INT})", r"\s*\]\s*$",
    ],
}
_USAGE = {
    "manifold": "manifold <name>",
    "piece": "piece <id> genus=<int> [fibers=a/b,...]",
    "edge": "edge <id> <piece>:<i> -> <piece>:<j> matrix=[a,b;c,d]",
}


def _match(rule: str, text: str, lineno: int, col: int) -> re.Match:
    full = re.match("".join(_RULES[rule]), text)
    if full:
        return full
    pos = 0
    for frag in _RULES[rule]:
        step = re.compile(frag).match(text, pos)
        if not step:
            break
        pos = step.end()
    raise ParseError(f"syntax error, expected '{_USAGE[rule]}'", lineno, col + pos)


@dataclass(frozen=True)
class ManifoldDocument:
    text: str
    manifold: GraphManifold
    lines: dict[str, int]


def parse_document(text: str) -> ManifoldDocument:
    name = None
    pieces: dict[str, tuple[int, list[tuple[int, int]]]] = {}
    edges: list[Edge] = []
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col = len(body) - len(body.lstrip()) + 1
        keyword = stripped.split()[0]
        if keyword == "manifold":
            mt = _match("manifold", stripped, lineno, col)
            if name is not None:
                raise ParseError("duplicate 'manifold' declaration", lineno, col)
            name = mt["name"]
        elif keyword == "piece":
            mt = _match("piece", stripped, lineno, col)
            pid = mt["id"]
            if pid in pieces:
                raise ParseError(f"duplicate piece id {pid!r}", lineno, col + mt.start("id"))
            fibers = []
            if mt["fibers"]:
                for chunk in mt["fibers"].split(","):
                    a, b = (int(x) for x in chunk.split("/"))
                    fibers.append((a, b))
            pieces[pid] = (int(mt["genus"]), fibers)
            lines[f"piece {pid}"] = lineno
        elif keyword == "edge":
            mt = _match("edge", stripped, lineno, col)
            eid = mt["id"]
            if f"edge {eid}" in lines:
                raise ParseError(f"duplicate edge id {eid!r}", lineno, col + mt.start("id"))
            for grp in ("sp", "tp"):
                if mt[grp] not in pieces:
                    raise ParseError(f"edge {eid} refers to undeclared piece {mt[grp]!r}", lineno,
                                     col + mt.start(grp))
            mat = GluingMatrix(*(int(mt[k]) for k in "abcd"))
            edges.append(Edge(eid, Endpoint(mt["sp"], int(mt["si"])), Endpoint(mt["tp"], int(mt["ti"])), mat))
            lines[f"edge {eid}"] = lineno
        else:
            raise ParseError(f"unknown declaration {keyword!r}", lineno, col)
    if name is None:
        raise ParseError("missing 'manifold <name>' declaration", 1)
    lines[f"manifold {name}"] = next(
        (i for i, raw in enumerate(text.splitlines(), 1) if raw.split("#", 1)[0].strip().startswith("manifold")), 1
    )

    twists: dict[str, int] = {}
    built = []
    for pid, (genus, raw_fibers) in pieces.items():
        normalized = []
        twist = 0
        for a, b in raw_fibers:
            try:
                fiber, t = split_fiber(a, b)
            except GraphManifoldError as exc:
                raise ParseError(str(exc), lines[f"piece {pid}"]) from None
            if fiber is None:
                raise ParseError(f"fiber {a}/{b} has multiplicity < 2", lines[f"piece {pid}"])
            normalized.append(fiber)
            twist += t
        twists[pid] = twist
        built.append(SeifertPiece(pid, genus, 0, tuple(normalized)))
    m = GraphManifold.assemble(name, built, edges)
    report = validate(m)
    if report:
        raise ManifoldValidationError(report, lines)
    for pid, t in twists.items():
        if t:
            # beta/alpha dropped by t, so the boundary slope on torus 0 must gain t
            m = twist_sections(m, pid, {0: -t})
            report = validate(m)
            if report:
                raise ManifoldValidationError(report, lines)
    return ManifoldDocument(text, m, lines)


def parse(text: str) -> GraphManifold:
    return parse_document(text).manifold


def serialize(m: GraphManifold) -> str:
    out = [f"manifold {m.name}"]
    for p in m.pieces:
        line = f"piece {p.id} genus={p.genus}"
        if p.exceptional_fibers:
            line += " fibers=" + ",".join(str(f) for f in p.exceptional_fibers)
        out.append(line)
    for e in m.edges:
        out.append(f"edge {e.id} {e.source} -> {e.target} matrix={e.matrix}")
    return "\n".join(out) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(m: GraphManifold) -> str:
    out = [f"digraph {_quote(m.name)} {{"]
    for p in m.pieces:
        fibers = ",".join(str(f) for f in p.exceptional_fibers) or "none"
        out.append(f"  {_quote(p.id)} [label={_quote(f'{p.id} (g={p.genus}, fibers={fibers})')}];")
    for e in m.edges:
        out.append(f"  {_quote(e.source.piece)} -> {_quote(e.target.piece)} "
                   f"[label={_quote(f'{e.id} {e.matrix}')}];")
    out.append("}")
    return "\n".join(out) + "\n"
