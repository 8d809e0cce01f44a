"""Coordinated graph manifolds: Seifert pieces, directed JSJ edges, gluing matrices.

Conventions
-----------
Every boundary torus of a piece carries an (s, h) basis: the first coordinate
is the section curve, the second the regular fiber.  An edge is directed; its
source endpoint is the "-" side and its target the "+" side, and the gluing
matrix ``A`` satisfies ``tau(s-, h-) = (s+, h+) A``.

All values are immutable.  Pieces and edges are kept sorted by identifier so
that structural equality does not depend on construction order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Iterable, Iterator, NamedTuple

IDENT = re.compile(r"^[A-Za-z0-9_.']+$")


class GraphManifoldError(ValueError):
    """Base class for errors raised by this package."""


class HypothesisError(GraphManifoldError):
    """A construction was called on input that does not meet its hypotheses."""

    def __init__(self, message: str, stage: str | None = None):
        self.stage = stage
        super().__init__(f"[{stage}] {message}" if stage else message)


class ValidationError(GraphManifoldError):
    def __init__(self, violations: "list[Violation]"):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def natural_key(ident: str) -> tuple:
    """Sort key that orders ``e2`` before ``e10``."""
    return tuple(
        (0, int(tok), "") if tok.isdigit() else (1, 0, tok)
        for tok in re.findall(r"\d+|\D+", ident)
    )


@dataclass(frozen=True, order=True)
class ExceptionalFiber:
    """Seifert invariant (alpha, beta) of a singular fiber, 1 <= beta < alpha."""

    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha < 2:
            raise GraphManifoldError(f"fiber multiplicity must be >= 2, got {self.alpha}")
        if not 1 <= self.beta <= self.alpha - 1:
            raise GraphManifoldError(
                f"fiber {self.alpha}/{self.beta}: beta must lie in [1, alpha-1]"
            )
        if gcd(self.alpha, self.beta) != 1:
            raise GraphManifoldError(f"fiber {self.alpha}/{self.beta}: gcd(alpha, beta) must be 1")

    def __str__(self):
        return f"{self.alpha}/{self.beta}"


def split_fiber(alpha: int, beta: int) -> tuple[ExceptionalFiber | None, int]:
    """Split an arbitrary Seifert pair into a normalized fiber plus an integer twist.

    ``beta/alpha == fiber.beta/alpha + twist``.  When ``alpha == 1`` the pair is
    a regular fiber and only the twist survives.
    """
    if alpha < 1:
        raise GraphManifoldError(f"fiber multiplicity must be positive, got {alpha}")
    if gcd(alpha, beta) != 1:
        raise GraphManifoldError(f"fiber {alpha}/{beta}: gcd(alpha, beta) must be 1")
    twist, rest = divmod(beta, alpha)
    if alpha == 1:
        return None, twist
    return ExceptionalFiber(alpha, rest), twist


@dataclass(frozen=True)
class SeifertPiece:
    """A Seifert piece over an orientable surface of the given genus."""

    id: str
    genus: int
    boundary_count: int = 0
    exceptional_fibers: tuple[ExceptionalFiber, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exceptional_fibers", tuple(sorted(self.exceptional_fibers)))

    @property
    def is_product(self) -> bool:
        return not self.exceptional_fibers

    def surface_euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count


@dataclass(frozen=True)
class GluingMatrix:
    """Integer matrix (a b; c d) expressing a torus gluing in (s, h) bases."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def of(cls, rows) -> "GluingMatrix":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __neg__(self) -> "GluingMatrix":
        return GluingMatrix(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: "GluingMatrix") -> "GluingMatrix":
        return GluingMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GluingMatrix":
        """Integer inverse; requires det = +-1."""
        if self.det not in (1, -1):
            raise GraphManifoldError(f"matrix {self} is not invertible over Z")
        k = self.det
        return GluingMatrix(self.d * k, -self.b * k, -self.c * k, self.a * k)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __str__(self):
        return f"[{self.a},{self.b};{self.c},{self.d}]"


SWAP = GluingMatrix(0, 1, 1, 0)


class Endpoint(NamedTuple):
    piece: str
    index: int

    def __str__(self):
        return f"{self.piece}:{self.index}"


@dataclass(frozen=True)
class Edge:
    id: str
    source: Endpoint
    target: Endpoint
    matrix: GluingMatrix

    def __post_init__(self):
        object.__setattr__(self, "source", Endpoint(*self.source))
        object.__setattr__(self, "target", Endpoint(*self.target))

    @property
    def is_loop(self) -> bool:
        return self.source.piece == self.target.piece

    def reversed(self) -> "Edge":
        """The same torus with the opposite direction (matrix inverted)."""
        return Edge(self.id, self.target, self.source, self.matrix.inverse())


@dataclass(frozen=True)
class GraphManifold:
    name: str
    pieces: tuple[SeifertPiece, ...]
    edges: tuple[Edge, ...]
    _piece_index: dict = field(init=False, repr=False, compare=False, hash=False)
    _edge_index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pieces = tuple(sorted(self.pieces, key=lambda p: natural_key(p.id)))
        edges = tuple(sorted(self.edges, key=lambda e: natural_key(e.id)))
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_piece_index", {p.id: p for p in pieces})
        object.__setattr__(self, "_edge_index", {e.id: e for e in edges})

    @classmethod
    def assemble(cls, name: str, pieces: Iterable[SeifertPiece], edges: Iterable[Edge]) -> "GraphManifold":
        """Build a manifold, deriving each piece's boundary count from the edges."""
        edges = tuple(edges)
        counts: dict[str, int] = {}
        for e in edges:
            for end in (e.source, e.target):
                counts[end.piece] = counts.get(end.piece, 0) + 1
        pieces = tuple(replace(p, boundary_count=counts.get(p.id, 0)) for p in pieces)
        return cls(name, pieces, edges)

    def piece(self, pid: str) -> SeifertPiece:
        try:
            return self._piece_index[pid]
        except KeyError:
            raise GraphManifoldError(f"unknown piece {pid!r}") from None

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError:
            raise GraphManifoldError(f"unknown edge {eid!r}") from None

    @property
    def piece_ids(self) -> list[str]:
        return [p.id for p in self.pieces]

    def endpoints(self) -> Iterator[tuple[Edge, str, Endpoint]]:
        """Yield (edge, side, endpoint) with side in {"source", "target"}."""
        for e in self.edges:
            yield e, "source", e.source
            yield e, "target", e.target

    def boundary_slots(self, pid: str) -> dict[int, tuple[Edge, str]]:
        """Map each boundary index of a piece to the edge endpoint glued there."""
        return {end.index: (e, side) for e, side, end in self.endpoints() if end.piece == pid}

    def self_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.is_loop]

    def with_name(self, name: str) -> "GraphManifold":
        return GraphManifold(name, self.pieces, self.edges)


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    message: str

    def __str__(self):
        return f"{self.subject}: {self.message}"


def validate(m: GraphManifold) -> list[Violation]:
    """Return every violated structural rule; an empty list means ``m`` is valid."""
    out: list[Violation] = []
    seen: set[str] = set()
    for p in m.pieces:
        if p.id in seen:
            out.append(Violation("duplicate-piece", f"piece {p.id}", "duplicate piece id"))
        seen.add(p.id)
        if p.genus < 0:
            out.append(Violation("genus", f"piece {p.id}", "genus must be >= 0"))
    seen_edges: set[str] = set()
    for e in m.edges:
        if e.id in seen_edges:
            out.append(Violation("duplicate-edge", f"edge {e.id}", "duplicate edge id"))
        seen_edges.add(e.id)
        if e.matrix.det != -1:
            out.append(Violation("determinant", f"edge {e.id}", "determinant must be -1"))
        if e.matrix.b == 0:
            out.append(Violation("fiber-to-fiber", f"edge {e.id}", "b != 0 required"))

    used: dict[str, dict[int, str]] = {p.id: {} for p in m.pieces}
    for e, side, end in m.endpoints():
        if end.piece not in used:
            out.append(Violation("dangling", f"edge {e.id}", f"unknown piece {end.piece!r}"))
            continue
        slots = used[end.piece]
        if end.index in slots:
            out.append(Violation("boundary-reuse", f"edge {e.id}",
                                 f"boundary index reused: {end} already used by edge {slots[end.index]}"))
        else:
            slots[end.index] = e.id
    for p in m.pieces:
        slots = used[p.id]
        if p.boundary_count != len(slots) or set(slots) != set(range(p.boundary_count)):
            out.append(Violation(
                "boundary-count", f"piece {p.id}",
                f"boundary indices {sorted(slots)} do not match 0..{p.boundary_count - 1}",
            ))

    if not m.edges:
        out.append(Violation("no-edges", f"manifold {m.name}", "at least one JSJ edge is required"))
    if m.pieces and not _connected(m):
        out.append(Violation("disconnected", f"manifold {m.name}", "dual graph is not connected"))
    return out


def require_valid(m: GraphManifold) -> None:
    report = validate(m)
    if report:
        raise ValidationError(report)


def _connected(m: GraphManifold) -> bool:
    return len(components(m.piece_ids, [(e.source.piece, e.target.piece) for e in m.edges])) == 1


def components(vertices: Iterable[str], links: Iterable[tuple[str, str]]) -> list[list[str]]:
    """Connected components of an undirected multigraph, each sorted, in sorted order."""
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in links:
        if u in parent and v in parent:
            parent[find(u)] = find(v)
    groups: dict[str, list[str]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    comps = [sorted(g, key=natural_key) for g in groups.values()]
    return sorted(comps, key=lambda c: [natural_key(x) for x in c])


def recoordinate_piece(m: GraphManifold, pid: str) -> GraphManifold:
    """Replace the (s, h) basis of every boundary torus of ``pid`` by (-s, -h).

    Each incidence at the piece negates the gluing matrix once, so a self-edge
    is negated twice and comes back unchanged.
    """
    m.piece(pid)
    edges = []
    for e in m.edges:
        flips = (e.source.piece == pid) + (e.target.piece == pid)
        edges.append(replace(e, matrix=-e.matrix) if flips % 2 else e)
    return GraphManifold(m.name, m.pieces, tuple(edges))


def twist_sections(m: GraphManifold, pid: str, twists: dict[int, int]) -> GraphManifold:
    """Change the section of ``pid`` by ``s' = s + t h`` on each boundary listed.

    Gluing matrices at the affected boundaries are rewritten so that the
    manifold is unchanged.  A global section change requires the twists to
    sum to zero together with any twists absorbed into fibers; that
    bookkeeping is the caller's.
    """
    m.piece(pid)
    slots = m.boundary_slots(pid)
    edges = {e.id: e for e in m.edges}
    for idx, t in twists.items():
        if not t:
            continue
        e_id = slots[idx][0].id
        e = edges[e_id]
        # new basis (s', h) = (s, h) U  with U = (1 0; t 1)
        u = GluingMatrix(1, 0, t, 1)
        u_inv = GluingMatrix(1, 0, -t, 1)
        mat = e.matrix
        if e.source == Endpoint(pid, idx):
            mat = mat @ u
        if e.target == Endpoint(pid, idx):
            mat = u_inv @ mat
        edges[e_id] = replace(e, matrix=mat)
    return GraphManifold(m.name, m.pieces, tuple(edges.values()))


@dataclass(frozen=True)
class DualEdge:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Multigraph:
    vertices: tuple[str, ...]
    edges: tuple[DualEdge, ...]

    def loops(self) -> list[DualEdge]:
        return [e for e in self.edges if e.source == e.target]


def dual_graph(m: GraphManifold) -> Multigraph:
    return Multigraph(
        tuple(m.piece_ids),
        tuple(DualEdge(e.id, e.source.piece, e.target.piece) for e in m.edges),
    )
