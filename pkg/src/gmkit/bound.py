"""Canonical submanifolds, their canonically framed fillings, and degree bounds."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Union

from .coverings import classify, separate_self_edges_cover
from .invariants import ClosedSeifert, Slope, abs_euler, abs_sv, hat_piece
from .model import (
    Endpoint,
    GraphManifold,
    GraphManifoldError,
    HypothesisError,
    SeifertPiece,
    components,
    natural_key,
    require_valid,
    split_fiber,
    twist_sections,
)
from .witness import WitnessCertificate, sv_witness

DEFAULT_MAX_EDGES = 12


class EdgeCapExceeded(GraphManifoldError):
    pass


@dataclass(frozen=True)
class CutBoundary:
    piece: str
    index: int
    slope: Slope


@dataclass(frozen=True)
class CanonicalSubmanifold:
    pieces: tuple[str, ...]
    retained_edges: tuple[str, ...]
    cut_boundaries: tuple[CutBoundary, ...]

    @property
    def key(self) -> tuple:
        return (self.pieces, self.retained_edges)

    def __str__(self):
        ps = ",".join(self.pieces)
        es = ",".join(self.retained_edges) or "-"
        return f"{{{ps}}} edges={{{es}}}"


def _ordered(ids) -> tuple[str, ...]:
    return tuple(sorted(ids, key=natural_key))


def _sort_key(pieces: tuple[str, ...], edges: tuple[str, ...]) -> tuple:
    return ([natural_key(p) for p in pieces], [natural_key(e) for e in edges])


def make_canonical(m: GraphManifold, pieces, retained_edges) -> CanonicalSubmanifold:
    """Build the submanifold spanned by ``pieces`` keeping only ``retained_edges``.

    Every boundary torus of a chosen piece whose edge is not retained becomes
    a boundary torus of the submanifold, framed by the fiber of the piece on
    the other side of that edge.
    """
    pieces = _ordered(set(pieces))
    retained = _ordered(set(retained_edges))
    chosen = set(pieces)
    if not chosen:
        raise GraphManifoldError("a canonical submanifold needs at least one piece")
    for eid in retained:
        e = m.edge(eid)
        if e.source.piece not in chosen or e.target.piece not in chosen:
            raise GraphManifoldError(f"retained edge {eid} leaves the chosen pieces")
    cuts = []
    for e in m.edges:
        if e.id in retained:
            continue
        A = e.matrix
        if e.source.piece in chosen:
            cuts.append(CutBoundary(e.source.piece, e.source.index, Slope(A.b, -A.a)))
        if e.target.piece in chosen:
            cuts.append(CutBoundary(e.target.piece, e.target.index, Slope(A.b, A.d)))
    cuts.sort(key=lambda c: (natural_key(c.piece), c.index))
    return CanonicalSubmanifold(pieces, retained, tuple(cuts))


def enumerate_canonical_submanifolds(m: GraphManifold, max_edges: int = DEFAULT_MAX_EDGES) -> list[CanonicalSubmanifold]:
    """All canonical submanifolds, each exactly once.

    Cutting along the tori not retained, a union of components of the result
    is determined by its set of pieces S together with the retained edges,
    which may be any subset of the edges with both ends in S.
    """
    require_valid(m)
    if len(m.edges) > max_edges:
        raise EdgeCapExceeded(f"{m.name} has {len(m.edges)} edges; enumeration cap is {max_edges} (--max-edges)")
    ids = m.piece_ids
    out = []
    for k in range(1, len(ids) + 1):
        for subset in combinations(ids, k):
            chosen = set(subset)
            inner = [e.id for e in m.edges if e.source.piece in chosen and e.target.piece in chosen]
            for r in range(len(inner) + 1):
                for kept in combinations(inner, r):
                    out.append(make_canonical(m, subset, kept))
    out.sort(key=lambda s: _sort_key(*s.key))
    return out


HatComponent = Union[ClosedSeifert, GraphManifold]


@dataclass(frozen=True)
class HatRecord:
    submanifold: CanonicalSubmanifold
    components: tuple[HatComponent, ...]
    abs_euler: Fraction
    abs_sv: Fraction

    @property
    def is_seifert(self) -> bool:
        return all(isinstance(c, ClosedSeifert) for c in self.components)


def _fill_component(m: GraphManifold, L: CanonicalSubmanifold, comp: list[str]) -> GraphManifold:
    """Dehn-fill the cut boundaries of a multi-piece (or looped) component.

    A filling slope p s + q h on a piece that keeps other boundary tori is
    turned into an exceptional fiber (p, q mod p) by the section change
    s' = s + floor(q/p) h; the accumulated twist is pushed onto the piece's
    first retained boundary so that the total twist is zero.
    """
    chosen = set(comp)
    retained = [m.edge(eid) for eid in L.retained_edges if m.edge(eid).source.piece in chosen]
    cuts = {(c.piece, c.index): c.slope for c in L.cut_boundaries if c.piece in chosen}
    work = GraphManifold(m.name, tuple(m.piece(p) for p in comp), tuple(retained))
    new_pieces = []
    fibers_by_piece = {}
    for pid in comp:
        piece = m.piece(pid)
        fibers = list(piece.exceptional_fibers)
        total = 0
        for (cp, idx), s in cuts.items():
            if cp != pid:
                continue
            fiber, t = split_fiber(s.p, s.q)
            total += t
            if fiber is not None:
                fibers.append(fiber)
        fibers_by_piece[pid] = fibers
        if total:
            kept = sorted(end.index for _, _, end in work.endpoints() if end.piece == pid)
            work = twist_sections(work, pid, {kept[0]: -total})
    # reindex surviving boundary tori 0..k-1 in their original order
    reindex = {}
    for pid in comp:
        kept = sorted(end.index for _, _, end in work.endpoints() if end.piece == pid)
        for new, old in enumerate(kept):
            reindex[(pid, old)] = new
        new_pieces.append(SeifertPiece(pid, m.piece(pid).genus, len(kept), tuple(fibers_by_piece[pid])))
    edges = tuple(
        replace(e,
                source=Endpoint(e.source.piece, reindex[tuple(e.source)]),
                target=Endpoint(e.target.piece, reindex[tuple(e.target)]))
        for e in work.edges
    )
    return GraphManifold(f"{m.name}_hat_{'_'.join(comp)}", tuple(new_pieces), edges)


def hat_submanifold(m: GraphManifold, L: CanonicalSubmanifold) -> HatRecord:
    require_valid(m)
    links = [(m.edge(eid).source.piece, m.edge(eid).target.piece) for eid in L.retained_edges]
    comps = components(L.pieces, links)
    out: list[HatComponent] = []
    for comp in comps:
        has_edges = any(src in comp for src, _ in links)
        if len(comp) == 1 and not has_edges:
            pid = comp[0]
            piece = m.piece(pid)
            cone = [(f.alpha, f.beta) for f in piece.exceptional_fibers]
            cone += [(c.slope.p, c.slope.q) for c in L.cut_boundaries if c.piece == pid]
            out.append(ClosedSeifert.from_cone_data(piece.genus, cone))
        else:
            out.append(_fill_component(m, L, comp))
    e_total = Fraction(0)
    sv_total = Fraction(0)
    for c in out:
        if isinstance(c, ClosedSeifert):
            e_total += abs(c.euler_number)
            sv_total += c.sv
        else:
            e_total += abs_euler(c)
            sv_total += abs_sv(c)
    return HatRecord(L, tuple(out), e_total, sv_total)


# -- degree bound report ----------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    submanifold: CanonicalSubmanifold
    hat: HatRecord
    ratio: Fraction | None


@dataclass(frozen=True)
class BoundReport:
    path: str  # "abs_euler_nonzero" or "abs_euler_zero"
    target_space: GraphManifold
    target_piece: str | None
    target_hat: HatComponent
    target_sv: Fraction | None
    candidates: tuple[Candidate, ...]
    numeric_bound_over_seifert_hats: Fraction | None
    witness: WitnessCertificate | None
    finiteness_conclusion: str
    assumptions: tuple[str, ...]
    notes: tuple[str, ...] = ()


def degree_bound_report(M: GraphManifold, N: GraphManifold, max_edges: int = DEFAULT_MAX_EDGES) -> BoundReport:
    """Finiteness report for the mapping degrees from M to N.

    If |e|(N) != 0 the degree of any map is bounded by SV(L^)/SV(Q^) over
    canonical submanifolds L of M; the bound is evaluated for candidates
    whose filling is a union of closed Seifert manifolds.  If |e|(N) = 0 and
    all gluing matrices are +-(0 1; 1 0), two adjacent pieces of N span a
    multiple-edge manifold whose witness certificate gives finiteness.
    """
    require_valid(M)
    require_valid(N)
    if not all(p.is_product and p.genus >= 2 for p in N.pieces):
        raise HypothesisError(
            "every piece of N must be a product of a surface of genus at least 2 and the circle; "
            "pass to such a finite cover first (characteristic separable cover of the target)",
            "bound",
        )
    notes = []
    if N.self_edges():
        N, _ = separate_self_edges_cover(N)
        notes.append(
            "N has JSJ tori bounding one piece on both sides; replaced by its double cover "
            f"{N.name} (finiteness of D(M,N) follows from that of the cover)"
        )
    candidates_raw = [(L, hat_submanifold(M, L)) for L in enumerate_canonical_submanifolds(M, max_edges)]
    assumptions = (
        "f^-1(Q) is a canonical submanifold of M for every piece Q of N "
        "(standard form of nonzero degree maps; not verified here)",
    )

    if abs_euler(N) != 0:
        best = None
        for pid in N.piece_ids:
            h = hat_piece(N, pid)
            if best is None or h.sv > best[1].sv:
                best = (pid, h)
        q_id, q_hat = best
        if q_hat.sv == 0:
            raise GraphManifoldError("|e|(N) != 0 but no piece hat has SV != 0")
        candidates = tuple(
            Candidate(L, hat, hat.abs_sv / q_hat.sv if hat.is_seifert else None)
            for L, hat in candidates_raw
        )
        ratios = [c.ratio for c in candidates if c.ratio is not None]
        bound = max(ratios) if ratios else None
        return BoundReport(
            path="abs_euler_nonzero",
            target_space=N,
            target_piece=q_id,
            target_hat=q_hat,
            target_sv=q_hat.sv,
            candidates=candidates,
            numeric_bound_over_seifert_hats=bound,
            witness=None,
            finiteness_conclusion=(
                f"|deg f| <= max SV(L^)/SV(Q^) over canonical L in M with Q = {q_id}, SV(Q^) = {q_hat.sv}; "
                f"finitely many L^ ({len(candidates)} candidates), so D(M,N) is finite"
            ),
            assumptions=assumptions,
            notes=tuple(notes),
        )

    if not classify(N).is_swap_normal_form:
        raise HypothesisError(
            "|e|(N) = 0 but the gluing matrices are not all +-(0 1; 1 0); pass to the finite cover "
            "coordinated so that every gluing matrix is +-(0 1; 1 0) first",
            "bound",
        )
    e0 = next(e for e in N.edges if not e.is_loop)
    pair = _ordered({e0.source.piece, e0.target.piece})
    between = [e.id for e in N.edges if {e.source.piece, e.target.piece} == set(pair)]
    Q = make_canonical(N, pair, between)
    q_hat = hat_submanifold(N, Q).components[0]
    witness = sv_witness(q_hat)
    candidates = tuple(Candidate(L, hat, None) for L, hat in candidates_raw)
    return BoundReport(
        path="abs_euler_zero",
        target_space=N,
        target_piece=None,
        target_hat=q_hat,
        target_sv=None,
        candidates=candidates,
        numeric_bound_over_seifert_hats=None,
        witness=witness,
        finiteness_conclusion=(
            f"Q^ = hat of {{{', '.join(pair)}}} is a {len(between)}-multiple-edge manifold with a finite cover "
            f"of SV >= {witness.conclusion.sv_n3_lower_bound} > 0; with finitely many L^ "
            f"({len(candidates)} candidates) D(M,N) is finite"
        ),
        assumptions=assumptions,
        notes=tuple(notes),
    )
