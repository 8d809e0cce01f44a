"""Exact rational invariants of Seifert pieces and their canonical fillings.

Sign convention: filling a boundary torus along ``p s + q h`` contributes
``q/p`` to the sum whose negative is the Euler number, and so does an
exceptional fiber ``(alpha, beta)``::

    e = -( sum beta/alpha + sum q/p )

Only ``|e|`` and whether ``e`` vanishes matter downstream; both are
independent of this choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .model import (
    GraphManifold,
    GraphManifoldError,
    SeifertPiece,
    require_valid,
)


@dataclass(frozen=True, order=True)
class Slope:
    """The unoriented curve ``p s + q h``, normalized to p > 0 or (0, 1)."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise GraphManifoldError("slope (0, 0) is not a curve")
        g = gcd(p, q)
        p, q = p // g, q // g
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_fiber(self) -> bool:
        return self.p == 0

    def __str__(self):
        return f"({self.p},{self.q})"


def _cone(p: int, q: int) -> tuple[int, int]:
    s = Slope(p, q)
    return (s.p, s.q)


def orbifold_euler(genus: int, cone_orders: Iterable[int], boundary_count: int = 0) -> Fraction:
    """chi of an orientable 2-orbifold; cone points of order 1 contribute nothing."""
    chi = Fraction(2 - 2 * genus - boundary_count)
    for p in cone_orders:
        if p >= 2:
            chi -= 1 - Fraction(1, p)
    return chi


def sv_value(chi: Fraction, euler: Fraction) -> Fraction:
    if euler != 0 and chi < 0:
        return chi * chi / abs(euler)
    return Fraction(0)


@dataclass(frozen=True)
class ClosedSeifert:
    """A closed Seifert manifold given by base genus and cone data (p, q)."""

    genus: int
    cone_data: tuple[tuple[int, int], ...]
    euler_number: Fraction
    chi_orb: Fraction
    sv: Fraction

    @classmethod
    def from_cone_data(cls, genus: int, cone_data: Iterable[tuple[int, int]]) -> "ClosedSeifert":
        data = tuple(_cone(p, q) for p, q in cone_data)
        if any(p == 0 for p, _ in data):
            raise GraphManifoldError("a fiber-parallel filling does not give a Seifert fibration")
        euler = -sum((Fraction(q, p) for p, q in data), Fraction(0))
        chi = orbifold_euler(genus, (p for p, _ in data))
        return cls(genus, data, euler, chi, sv_value(chi, euler))


def canonical_filling_slopes(m: GraphManifold, pid: str) -> dict[int, Slope]:
    """Slope of the adjacent piece's fiber on every boundary torus of ``pid``.

    For ``A = (a b; c d)``: on the source side the fiber ``h+`` pulls back to
    the second column of ``A^-1 = (-d b; c -a)``; on the target side ``h-``
    maps to ``b s+ + d h+``.
    """
    require_valid(m)
    m.piece(pid)
    slopes = {}
    for idx, (e, side) in sorted(m.boundary_slots(pid).items()):
        A = e.matrix
        slopes[idx] = Slope(A.b, -A.a) if side == "source" else Slope(A.b, A.d)
    return slopes


def euler_number_filled(piece: SeifertPiece, slopes: Sequence[Slope]) -> Fraction:
    if len(slopes) != piece.boundary_count:
        raise GraphManifoldError(
            f"piece {piece.id} has {piece.boundary_count} boundary tori, got {len(slopes)} slopes"
        )
    total = Fraction(0)
    for f in piece.exceptional_fibers:
        total += Fraction(f.beta, f.alpha)
    for s in slopes:
        if s.is_fiber:
            raise GraphManifoldError(f"slope {s} is the fiber; not an admissible filling")
        total += Fraction(s.q, s.p)
    return -total


def hat_piece(m: GraphManifold, pid: str) -> ClosedSeifert:
    piece = m.piece(pid)
    slopes = canonical_filling_slopes(m, pid)
    cone = [(f.alpha, f.beta) for f in piece.exceptional_fibers]
    cone += [(s.p, s.q) for _, s in sorted(slopes.items())]
    return ClosedSeifert.from_cone_data(piece.genus, cone)


def sv_closed(cs: ClosedSeifert) -> Fraction:
    return sv_value(cs.chi_orb, cs.euler_number)


def abs_euler(m: GraphManifold) -> Fraction:
    return sum((abs(hat_piece(m, pid).euler_number) for pid in m.piece_ids), Fraction(0))


def abs_sv(m: GraphManifold) -> Fraction:
    return sum((sv_closed(hat_piece(m, pid)) for pid in m.piece_ids), Fraction(0))
