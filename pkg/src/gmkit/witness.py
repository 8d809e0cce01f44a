"""Certificates that a multiple-edge graph manifold has a finite cover with SV != 0.

The chain is

    N <-p1- N1 -p2-> N2 <-p3- N3 -p4-> N4

where p1, p2 normalize the gluing matrices, p3 is the genus cover and p4 is
the composite of two vertical pinches, a cyclic d-fold covering and a final
projection onto a closed Seifert manifold with PSL~(2,R) geometry.  The
fiber product of p2 and p3 is reported but never built.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Union

from .coverings import (
    CoveringDescriptor,
    _require_pm_products,
    check_covering,
    classify,
    genus_cover,
    identity_covering,
    oriented_matrices,
    property_i_normalize,
)
from .invariants import ClosedSeifert, Slope, sv_closed
from .model import (
    Edge,
    Endpoint,
    GraphManifold,
    GraphManifoldError,
    HypothesisError,
    SeifertPiece,
    recoordinate_piece,
    require_valid,
)

MAP_KINDS = ("vertical_pinch", "cyclic_cover", "degree_one_pinch_project", "degree_two_project")


@dataclass(frozen=True)
class MapDescriptor:
    kind: str
    degree: int
    source: Union[GraphManifold, ClosedSeifert]
    target: Union[GraphManifold, ClosedSeifert]
    branch: int | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise GraphManifoldError(f"unknown map kind {self.kind!r}")
        expected = {"vertical_pinch": {1}, "degree_one_pinch_project": {1}, "degree_two_project": {2}}
        if self.kind in expected and self.degree not in expected[self.kind]:
            raise GraphManifoldError(f"{self.kind} must have degree in {expected[self.kind]}")


def vertical_pinch(m: GraphManifold, pid: str, g_target: int) -> tuple[GraphManifold, MapDescriptor]:
    """Degree-one map collapsing handles of a product piece, identity near the boundary."""
    require_valid(m)
    piece = m.piece(pid)
    if not piece.is_product:
        raise HypothesisError(f"piece {pid} has exceptional fibers; a vertical pinch needs F x S^1", "pinch")
    if not 2 <= g_target <= piece.genus:
        raise HypothesisError(f"target genus {g_target} must satisfy 2 <= g <= {piece.genus}", "pinch")
    if g_target == piece.genus:
        return m, MapDescriptor("vertical_pinch", 1, m, m, notes=(f"{pid}: identity",))
    pieces = tuple(replace(p, genus=g_target) if p.id == pid else p for p in m.pieces)
    out = GraphManifold(m.name, pieces, m.edges)
    return out, MapDescriptor("vertical_pinch", 1, m, out,
                              notes=(f"{pid}: genus {piece.genus} -> {g_target}",))


def rotation_cover(m: GraphManifold) -> tuple[GraphManifold, CoveringDescriptor]:
    """Quotient of a Property I manifold by a free Z/d rotation of both surfaces.

    Each piece's genus must be a*d + 1 with a >= 1; the quotient N' has a
    single edge, pieces of genus a + 1 with one boundary torus, and the same
    gluing matrix.  Returned as the covering N -> N'.
    """
    stage = "rotation"
    if not classify(m).is_property_I:
        raise HypothesisError("input must satisfy Property I", stage)
    d = len(m.edges)
    quotient_genus = {}
    for p in m.pieces:
        a, r = divmod(p.genus - 1, d)
        if r or a < 1:
            raise HypothesisError(f"genus of {p.id} is {p.genus}, not of the form a*{d}+1 with a >= 1", stage)
        quotient_genus[p.id] = a + 1
    if d == 1:
        return m, identity_covering(m, note="d = 1")
    first, second = m.piece_ids
    oriented = oriented_matrices(m)
    e0 = oriented[0][0]
    A = oriented[0][1]
    pieces = tuple(SeifertPiece(p.id, quotient_genus[p.id], 1, ()) for p in m.pieces)
    quotient = GraphManifold(
        f"{m.name}_rot{d}", pieces, (Edge(e0.id, Endpoint(first, 0), Endpoint(second, 0), A),)
    )
    desc = CoveringDescriptor(
        total_space=m,
        base_space=quotient,
        piece_map={p: p for p in m.piece_ids},
        edge_map={e.id: e0.id for e in m.edges},
        vertical_degree={p: 1 for p in m.piece_ids},
        horizontal_degree={p: d for p in m.piece_ids},
        boundary_multiplicity={end: 1 for _, _, end in m.endpoints()},
        char_m=1,
        separable=True,
        reversed_edges=frozenset(e.id for e, _, rev in oriented if rev),
        note=f"free rotation of angle 2pi/{d}",
    )
    return quotient, desc


def project_to_psl(m: GraphManifold) -> tuple[ClosedSeifert, MapDescriptor]:
    """Nonzero-degree map from a single-edge manifold onto a PSL~(2,R) manifold.

    With A = (a b; c d) on the edge from piece 1 to piece 2:
      1. ac != 0: pinch piece 1 to a solid torus; piece 2 filled along a s + c h.
      2. dc != 0: symmetric, piece 1 filled along -d s + c h.
      3. otherwise A = +-(1 b; 0 -1) or +-(0 1; 1 0): fold both pieces onto one
         product and fill along (b s - 2 h)/gcd(2, b), resp. s - h; degree 2.
    """
    stage = "projection"
    require_valid(m)
    if len(m.pieces) != 2 or len(m.edges) != 1 or m.edges[0].is_loop:
        raise HypothesisError("need two pieces joined by a single edge", stage)
    if not all(p.is_product and p.genus >= 2 for p in m.pieces):
        raise HypothesisError("both pieces must be products F x S^1 with genus(F) >= 2", stage)
    e = m.edges[0]
    A = e.matrix
    a, c, d = A.a, A.c, A.d
    src, tgt = m.piece(e.source.piece), m.piece(e.target.piece)

    if a * c != 0:
        target = ClosedSeifert.from_cone_data(tgt.genus, [(a, c)])
        slope = Slope(a, c)
        desc = MapDescriptor("degree_one_pinch_project", 1, m, target, branch=1, notes=(
            f"pinch {src.id} to a solid torus killing its section",
            f"fill {tgt.id} along {slope}",
        ))
    elif d * c != 0:
        target = ClosedSeifert.from_cone_data(src.genus, [(-d, c)])
        slope = Slope(-d, c)
        desc = MapDescriptor("degree_one_pinch_project", 1, m, target, branch=2, notes=(
            f"pinch {tgt.id} to a solid torus killing its section",
            f"fill {src.id} along {slope}",
        ))
    else:
        notes = []
        if A.a == -1 or A.b == -1 and A.a == 0:
            m = recoordinate_piece(m, tgt.id)
            A = m.edges[0].matrix
            notes.append(f"re-coordinated {tgt.id} by (-s,-h); matrix now {A}")
        if A.c == 0:
            g2 = gcd(2, A.b)
            slope = Slope(A.b // g2, -2 // g2)
        else:
            slope = Slope(1, -1)
        genus = min(src.genus, tgt.genus)
        for p in (src, tgt):
            if p.genus > genus:
                notes.append(f"vertical pinch {p.id}: genus {p.genus} -> {genus}")
        notes.append(f"fold both pieces onto one product of genus {genus}; fill along {slope}")
        target = ClosedSeifert.from_cone_data(genus, [(slope.p, slope.q)])
        desc = MapDescriptor("degree_two_project", 2, m, target, branch=3, notes=tuple(notes))
    if target.sv <= 0:
        raise GraphManifoldError(f"projection target has SV = {target.sv}; expected a PSL~ manifold")
    return target, desc


@dataclass(frozen=True)
class ChainLink:
    stage: str
    degree: int
    map: Union[CoveringDescriptor, MapDescriptor]

    @property
    def is_covering(self) -> bool:
        return isinstance(self.map, CoveringDescriptor)


@dataclass(frozen=True)
class WitnessConclusion:
    statement: str
    p4_degree: int
    sv_n3_lower_bound: Fraction
    cover_degree_bound: int


@dataclass(frozen=True)
class WitnessCertificate:
    source: GraphManifold
    chain: tuple[ChainLink, ...]
    target: ClosedSeifert
    target_sv: Fraction
    conclusion: WitnessConclusion

    def link(self, stage: str) -> ChainLink:
        for ln in self.chain:
            if ln.stage == stage:
                return ln
        raise KeyError(stage)

    @property
    def projection_branch(self) -> int:
        return self.link("p4.project").map.branch


def _link(stage: str, obj) -> ChainLink:
    if isinstance(obj, CoveringDescriptor):
        return ChainLink(stage, obj.total_degree, obj)
    return ChainLink(stage, obj.degree, obj)


def sv_witness(m: GraphManifold) -> WitnessCertificate:
    """Build and self-check the finite-cover certificate for a +-A multiple-edge manifold."""
    _require_pm_products(m, "hypothesis")
    norm = property_i_normalize(m)
    n3, p3 = genus_cover(norm.n2)
    d = len(m.edges)
    a = (min(p.genus for p in n3.pieces) - 1) // d
    if a < 1:
        raise HypothesisError(f"genus cover too small for a rotation of order {d}", "pinch")
    chain = [_link("p1", norm.p1), _link("p2", norm.p2), _link("p3", p3)]
    pinched = n3
    for pid in n3.piece_ids:
        pinched, pmap = vertical_pinch(pinched, pid, a * d + 1)
        chain.append(_link(f"p4.pinch.{pid}", pmap))
    quotient, rot = rotation_cover(pinched)
    chain.append(_link("p4.rotation", rot))
    target, proj = project_to_psl(quotient)
    chain.append(_link("p4.project", proj))

    p4 = 1
    for ln in chain[3:]:
        p4 *= ln.degree
    conclusion = WitnessConclusion(
        statement=(
            f"{m.name} admits a finite cover N~ (fiber product of p2 and p3 over N2) with "
            f"SV(N~) >= SV(N3) >= deg(p4) * SV(N4) = {p4 * target.sv} > 0; N~ not constructed"
        ),
        p4_degree=p4,
        sv_n3_lower_bound=p4 * target.sv,
        cover_degree_bound=chain[1].degree * chain[2].degree,
    )
    cert = WitnessCertificate(m, tuple(chain), target, sv_closed(target), conclusion)
    problems = verify_certificate(cert)
    if problems:
        raise GraphManifoldError("witness failed self-check: " + "; ".join(problems))
    return cert


def verify_certificate(cert: WitnessCertificate) -> list[str]:
    """Re-check every covering link and the arithmetic of the conclusion."""
    problems = []
    for ln in cert.chain:
        if ln.degree < 1:
            problems.append(f"{ln.stage}: degree {ln.degree} must be positive")
        if ln.is_covering:
            report = check_covering(ln.map)
            if not report.ok:
                problems.extend(f"{ln.stage}: {v}" for v in report.violations)
            elif report.total_degree != ln.degree:
                problems.append(f"{ln.stage}: recorded degree {ln.degree} != checked {report.total_degree}")
    if cert.target_sv != sv_closed(cert.target) or cert.target_sv <= 0:
        problems.append(f"target SV {cert.target_sv} is not a positive SV of the target")
    p4 = 1
    for ln in cert.chain:
        if ln.stage.startswith("p4."):
            p4 *= ln.degree
    c = cert.conclusion
    if c.p4_degree != p4 or c.sv_n3_lower_bound != p4 * cert.target_sv:
        problems.append("conclusion degrees do not match the chain")
    if c.cover_degree_bound != cert.link("p2").degree * cert.link("p3").degree:
        problems.append("cover degree bound is not deg(p2) * deg(p3)")
    return problems
