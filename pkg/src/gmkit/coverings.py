"""Finite coverings of graph manifolds described at dual-graph level.

A covering is recorded by where each piece and edge of the total space goes,
the vertical/horizontal degree of every piece covering, and the degree with
which each boundary circle of a covering surface wraps its image.  The
constructions here are self-certifying: everything they return passes
:func:`check_covering`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .invariants import orbifold_euler
from .model import (
    Edge,
    Endpoint,
    GluingMatrix,
    GraphManifold,
    GraphManifoldError,
    HypothesisError,
    SeifertPiece,
    SWAP,
    Violation,
    recoordinate_piece,
    require_valid,
    validate,
)


@dataclass(frozen=True)
class CoveringDescriptor:
    total_space: GraphManifold
    base_space: GraphManifold
    piece_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    vertical_degree: Mapping[str, int]
    horizontal_degree: Mapping[str, int]
    # degree of each boundary circle of a covering surface over its image circle
    boundary_multiplicity: Mapping[Endpoint, int]
    char_m: int | None = None
    separable: bool = False
    # total-space edges that run against the direction of their image edge
    reversed_edges: frozenset[str] = frozenset()
    deck_involution: Mapping[str, str] | None = None
    note: str = ""

    def local_degree(self, pid: str) -> int:
        return self.vertical_degree[pid] * self.horizontal_degree[pid]

    @property
    def total_degree(self) -> int:
        base = self.base_space.piece_ids[0]
        return sum(self.local_degree(p) for p, q in self.piece_map.items() if q == base)

    def torus_degree(self, end: Endpoint) -> int:
        return self.vertical_degree[end.piece] * self.boundary_multiplicity[end]


@dataclass(frozen=True)
class CheckReport:
    violations: tuple[Violation, ...]
    total_degree: int | None

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def identity_covering(m: GraphManifold, note: str = "") -> CoveringDescriptor:
    return CoveringDescriptor(
        total_space=m,
        base_space=m,
        piece_map={p: p for p in m.piece_ids},
        edge_map={e.id: e.id for e in m.edges},
        vertical_degree={p: 1 for p in m.piece_ids},
        horizontal_degree={p: 1 for p in m.piece_ids},
        boundary_multiplicity={end: 1 for _, _, end in m.endpoints()},
        char_m=1,
        separable=True,
        note=note,
    )


def _lifted_boundary_map(c: CoveringDescriptor) -> dict[Endpoint, Endpoint]:
    out = {}
    for e in c.total_space.edges:
        base = c.base_space.edge(c.edge_map[e.id])
        src, tgt = (base.target, base.source) if e.id in c.reversed_edges else (base.source, base.target)
        out[e.source] = src
        out[e.target] = tgt
    return out


def check_covering(c: CoveringDescriptor) -> CheckReport:
    """Verify the combinatorial consistency of a claimed covering.

    Clauses: incidence, constant total degree, orbifold Euler characteristic
    scaling by the horizontal degree, boundary-circle bookkeeping,
    m-characteristic matrix lifting, and agreement of the torus covering
    degree seen from both sides of every lifted JSJ torus.
    """
    out: list[Violation] = []
    T, B = c.total_space, c.base_space

    def fail(rule, subject, msg):
        out.append(Violation(rule, subject, msg))

    for label, m in (("total space", T), ("base space", B)):
        for v in validate(m):
            fail("validity", f"{label} {m.name}", str(v))
    if out:
        return CheckReport(tuple(out), None)

    # (1) incidence
    base_pieces, base_edges = set(B.piece_ids), {e.id for e in B.edges}
    for p in T.pieces:
        img = c.piece_map.get(p.id)
        if img not in base_pieces:
            fail("incidence", f"piece {p.id}", f"maps to unknown piece {img!r}")
        for key, deg in (("vertical", c.vertical_degree), ("horizontal", c.horizontal_degree)):
            if deg.get(p.id, 0) < 1:
                fail("degree", f"piece {p.id}", f"{key} degree must be a positive integer")
    for e in T.edges:
        if c.edge_map.get(e.id) not in base_edges:
            fail("incidence", f"edge {e.id}", f"maps to unknown edge {c.edge_map.get(e.id)!r}")
    if out:
        return CheckReport(tuple(out), None)
    if set(c.piece_map.values()) != base_pieces:
        fail("incidence", "piece map", "not surjective")
    if set(c.edge_map.values()) != base_edges:
        fail("incidence", "edge map", "not surjective")
    bmap = _lifted_boundary_map(c)
    for e in T.edges:
        for end in (e.source, e.target):
            if c.piece_map[end.piece] != bmap[end].piece:
                fail("incidence", f"edge {e.id}",
                     f"endpoint {end} lies on {c.piece_map[end.piece]} but its image edge "
                     f"{c.edge_map[e.id]} meets {bmap[end].piece} there")
    for end in bmap:
        if c.boundary_multiplicity.get(end, 0) < 1:
            fail("boundary-circles", f"boundary {end}", "missing or non-positive multiplicity")
    if out:
        return CheckReport(tuple(out), None)

    # (2) total degree, per piece and per torus
    fibre_degree: dict[str, int] = {p: 0 for p in B.piece_ids}
    for p, q in c.piece_map.items():
        fibre_degree[q] += c.local_degree(p)
    degrees = set(fibre_degree.values())
    total = degrees.pop() if len(degrees) == 1 else None
    if total is None:
        fail("total-degree", "pieces", f"degree over base pieces varies: {fibre_degree}")
    torus_sum: dict[str, int] = {e.id: 0 for e in B.edges}
    for e in T.edges:
        torus_sum[c.edge_map[e.id]] += c.torus_degree(e.source)
    for eid, s in torus_sum.items():
        if total is not None and s != total:
            fail("total-degree", f"edge {eid}", f"preimage tori have total degree {s}, expected {total}")

    # (3) Euler characteristic of base orbifolds
    for p in T.pieces:
        q = B.piece(c.piece_map[p.id])
        chi_t = orbifold_euler(p.genus, (f.alpha for f in p.exceptional_fibers), p.boundary_count)
        chi_b = orbifold_euler(q.genus, (f.alpha for f in q.exceptional_fibers), q.boundary_count)
        if chi_t != c.horizontal_degree[p.id] * chi_b:
            fail("euler-characteristic", f"piece {p.id}",
                 f"chi = {chi_t} but d_h * chi(base {q.id}) = {c.horizontal_degree[p.id] * chi_b}")

    # (4) boundary circles: preimages of each base circle wrap d_h times in total
    for p in T.pieces:
        q = B.piece(c.piece_map[p.id])
        wraps = {i: 0 for i in range(q.boundary_count)}
        for end, img in bmap.items():
            if end.piece == p.id:
                wraps[img.index] += c.boundary_multiplicity[end]
        for i, w in wraps.items():
            if w != c.horizontal_degree[p.id]:
                fail("boundary-circles", f"piece {p.id}",
                     f"circles over {q.id}:{i} wrap {w} times, expected d_h = {c.horizontal_degree[p.id]}")

    # (5) m-characteristic: m x m on every torus and matrices lift unchanged
    if c.char_m is not None:
        m = c.char_m
        for e in T.edges:
            base = B.edge(c.edge_map[e.id])
            for end in (e.source, e.target):
                if c.vertical_degree[end.piece] != m or c.boundary_multiplicity[end] != m:
                    fail("characteristic", f"edge {e.id}",
                         f"torus over {base.id} is not the {m}x{m} characteristic cover at {end}")
            expected = base.matrix.inverse() if e.id in c.reversed_edges else base.matrix
            if e.matrix != expected:
                fail("characteristic", f"edge {e.id}",
                     f"lifted matrix {e.matrix} differs from base matrix {expected}")

    # (6) both sides of a lifted torus must see the same covering degree
    for e in T.edges:
        ds, dt = c.torus_degree(e.source), c.torus_degree(e.target)
        if ds != dt:
            fail("fiber", f"edge {e.id}", f"torus degree {ds} from source side but {dt} from target side")

    if c.deck_involution is not None:
        inv = c.deck_involution
        for p, q in inv.items():
            if inv.get(q) != p or p == q or c.piece_map.get(p) != c.piece_map.get(q):
                fail("deck", f"piece {p}", "deck involution must be a fixed-point-free fiberwise swap")

    return CheckReport(tuple(out), total)


def _copy_id(ident: str, sheet: int) -> str:
    return f"{ident}.{sheet}"


def separate_self_edges_cover(m: GraphManifold) -> tuple[GraphManifold, CoveringDescriptor]:
    """Double cover in which no JSJ torus bounds the same piece on both sides.

    Sheets are indexed by Z/2; a self-edge switches sheet and every other
    edge stays on its sheet.
    """
    require_valid(m)
    if not m.self_edges():
        return m, identity_covering(m, note="no self-edges; returned unchanged")
    label = {e.id: int(e.is_loop) for e in m.edges}
    pieces = [
        SeifertPiece(_copy_id(p.id, i), p.genus, p.boundary_count, p.exceptional_fibers)
        for p in m.pieces for i in (0, 1)
    ]
    edges = []
    for e in m.edges:
        for i in (0, 1):
            j = (i + label[e.id]) % 2
            edges.append(Edge(
                _copy_id(e.id, i),
                Endpoint(_copy_id(e.source.piece, i), e.source.index),
                Endpoint(_copy_id(e.target.piece, j), e.target.index),
                e.matrix,
            ))
    cover = GraphManifold(f"{m.name}_sep", tuple(pieces), tuple(edges))
    _check_ids_unique(cover)
    return cover, _sheeted_descriptor(cover, m)


def _sheeted_descriptor(cover: GraphManifold, base: GraphManifold, **extra) -> CoveringDescriptor:
    strip = lambda ident: ident.rsplit(".", 1)[0]  # noqa: E731
    return CoveringDescriptor(
        total_space=cover,
        base_space=base,
        piece_map={p: strip(p) for p in cover.piece_ids},
        edge_map={e.id: strip(e.id) for e in cover.edges},
        vertical_degree={p: 1 for p in cover.piece_ids},
        horizontal_degree={p: 1 for p in cover.piece_ids},
        boundary_multiplicity={end: 1 for _, _, end in cover.endpoints()},
        char_m=1,
        separable=True,
        **extra,
    )


def _check_ids_unique(m: GraphManifold) -> None:
    if len(set(m.piece_ids)) != len(m.pieces) or len({e.id for e in m.edges}) != len(m.edges):
        raise GraphManifoldError(f"identifier clash while building {m.name}; rename pieces/edges")


# -- multiple-edge manifolds ------------------------------------------------


@dataclass(frozen=True)
class Classification:
    multiple_edge: int | None
    is_pm_A: bool
    is_property_I: bool
    is_swap_normal_form: bool
    all_pieces_product_genus2: bool

    @property
    def is_multiple_edge(self) -> bool:
        return self.multiple_edge is not None


def oriented_matrices(m: GraphManifold) -> list[tuple[Edge, GluingMatrix, bool]]:
    """For a two-piece manifold: each edge's matrix read from the first piece to the second.

    Returns (edge, matrix, reversed) triples; reversing an edge inverts its matrix.
    """
    first = m.piece_ids[0]
    out = []
    for e in m.edges:
        if e.source.piece == first:
            out.append((e, e.matrix, False))
        else:
            out.append((e, e.matrix.inverse(), True))
    return out


def classify(m: GraphManifold) -> Classification:
    require_valid(m)
    products = all(p.is_product and p.genus >= 2 for p in m.pieces)
    swap = all(e.matrix in (SWAP, -SWAP) for e in m.edges)
    n = None
    pm = prop_i = False
    if len(m.pieces) == 2 and not m.self_edges():
        n = len(m.edges)
        mats = [mat for _, mat, _ in oriented_matrices(m)]
        ref = mats[0]
        pm = all(x in (ref, -ref) for x in mats)
        prop_i = products and all(x == ref for x in mats)
    return Classification(n, pm, prop_i, swap, products)


@dataclass(frozen=True)
class NormalizationResult:
    """Coverings N1 -> N and N1' -> N2 with N2 satisfying Property I.

    ``n1`` carries coordinates lifted from the input; ``n1_prime`` is the same
    manifold with the second sheet re-coordinated by (-s, -h), which is the
    coordinate system lifted from ``n2``.
    """

    n1: GraphManifold
    n1_prime: GraphManifold
    n2: GraphManifold
    p1: CoveringDescriptor
    p2: CoveringDescriptor
    matrix: GluingMatrix
    flipped_edges: tuple[str, ...]

    @property
    def descriptors(self) -> list[CoveringDescriptor]:
        return [self.p1, self.p2]


def _require_pm_products(m: GraphManifold, stage: str) -> Classification:
    cls = classify(m)
    if not cls.is_multiple_edge:
        raise HypothesisError("not a multiple-edge graph manifold (need two pieces, all edges between them)", stage)
    if not cls.is_pm_A:
        raise HypothesisError("gluing matrices are not all equal up to sign", stage)
    if not cls.all_pieces_product_genus2:
        raise HypothesisError("every piece must be a product F x S^1 with genus(F) >= 2", stage)
    return cls


def property_i_normalize(m: GraphManifold, reference: GluingMatrix | None = None) -> NormalizationResult:
    """Pass to a double cover and a quotient so that every gluing matrix is +A.

    ``A`` is ``reference`` if given, else the first edge's matrix (read from
    the first piece to the second).  Edges glued by -A switch sheets in the
    double cover; afterwards the second sheet is re-coordinated, which makes
    every matrix +A, and the sheet swap descends to the quotient N2.
    """
    stage = "property-i"
    _require_pm_products(m, stage)
    oriented = oriented_matrices(m)
    A = reference if reference is not None else oriented[0][1]
    if any(mat not in (A, -A) for _, mat, _ in oriented):
        raise HypothesisError(f"gluing matrices are not all +-{A}", stage)
    label = {e.id: int(mat == -A) for e, mat, _ in oriented}
    flipped = tuple(eid for eid, lab in label.items() if lab)
    first, second = m.piece_ids

    if not flipped:
        p = identity_covering(m, note="all matrices already equal")
        return NormalizationResult(m, m, m, p, p, A, ())
    if len(flipped) == len(m.edges):
        n2 = recoordinate_piece(m, second)
        return NormalizationResult(
            m, n2, n2, identity_covering(m),
            identity_covering(n2, note=f"{second} re-coordinated by (-s,-h)"), A, flipped,
        )

    pieces = [
        SeifertPiece(_copy_id(p.id, i), p.genus, p.boundary_count, p.exceptional_fibers)
        for p in m.pieces for i in (0, 1)
    ]
    edges = []
    for e in m.edges:
        for i in (0, 1):
            j = (i + label[e.id]) % 2
            edges.append(Edge(
                _copy_id(e.id, i),
                Endpoint(_copy_id(e.source.piece, i), e.source.index),
                Endpoint(_copy_id(e.target.piece, j), e.target.index),
                e.matrix,
            ))
    n1 = GraphManifold(f"{m.name}_N1", tuple(pieces), tuple(edges))
    _check_ids_unique(n1)
    n1_prime = recoordinate_piece(recoordinate_piece(n1, _copy_id(first, 1)), _copy_id(second, 1))
    n2_edges = tuple(
        Edge(e.id, e.source, e.target, A.inverse() if rev else A) for e, _, rev in oriented
    )
    n2 = GraphManifold(f"{m.name}_N2", m.pieces, n2_edges)
    swap = {}
    for pid in m.piece_ids:
        swap[_copy_id(pid, 0)] = _copy_id(pid, 1)
        swap[_copy_id(pid, 1)] = _copy_id(pid, 0)
    p1 = _sheeted_descriptor(n1, m, note="double cover switching sheets along edges glued by -A")
    p2 = _sheeted_descriptor(n1_prime, n2, deck_involution=swap,
                             note="quotient by the sheet swap after re-coordinating sheet 1")
    return NormalizationResult(n1, n1_prime, n2, p1, p2, A, flipped)


def covering_genus(genus: int, d: int) -> int:
    """Genus of the d-fold horizontal cover with d boundary circles."""
    return d * (genus - 1) + d * (d - 1) // 2 + 1


def genus_cover(m: GraphManifold) -> tuple[GraphManifold, CoveringDescriptor]:
    """The d^2-fold d-characteristic cover of a Property I manifold with d edges.

    Each piece is covered with vertical and horizontal degree d; every
    boundary circle has a single preimage wrapping d times, so the covering
    surfaces keep d boundary circles and their genus follows from
    chi(F') = d chi(F).
    """
    stage = "genus-cover"
    cls = classify(m)
    if not cls.is_property_I:
        raise HypothesisError("input must satisfy Property I", stage)
    d = len(m.edges)
    if d == 1:
        return m, identity_covering(m, note="d = 1")
    pieces = tuple(
        SeifertPiece(p.id, covering_genus(p.genus, d), p.boundary_count, ()) for p in m.pieces
    )
    cover = GraphManifold(f"{m.name}_genus{d}", pieces, m.edges)
    desc = CoveringDescriptor(
        total_space=cover,
        base_space=m,
        piece_map={p: p for p in m.piece_ids},
        edge_map={e.id: e.id for e in m.edges},
        vertical_degree={p: d for p in m.piece_ids},
        horizontal_degree={p: d for p in m.piece_ids},
        boundary_multiplicity={end: d for _, _, end in cover.endpoints()},
        char_m=d,
        separable=True,
    )
    return cover, desc

