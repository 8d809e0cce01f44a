"""Command-line driver: ``gm <command> ...``.

Exit codes: 0 ok, 1 validation failure, 2 parse error, 3 hypothesis not met.
Reports print prose first, then ``---`` and machine-readable ``key=value`` lines.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bound import DEFAULT_MAX_EDGES, EdgeCapExceeded, degree_bound_report
from .coverings import check_covering, genus_cover, property_i_normalize, separate_self_edges_cover
from .invariants import abs_euler, abs_sv, hat_piece
from .io import ParseError, export_dot, parse, serialize
from .model import GraphManifoldError, HypothesisError, ValidationError
from .witness import sv_witness

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_HYPOTHESIS = 0, 1, 2, 3


class Report:
    def __init__(self):
        self.text: list[str] = []
        self.keys: list[tuple[str, object]] = []

    def say(self, line: str = ""):
        self.text.append(line)

    def kv(self, key: str, value):
        self.keys.append((key, value))

    def render(self) -> str:
        out = list(self.text)
        out.append("---")
        out.extend(f"{k}={v}" for k, v in self.keys)
        return "\n".join(out) + "\n"


def _load(path: str):
    return parse(Path(path).read_text(encoding="utf-8"))


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> Report:
    m = _load(args.file)
    r = Report()
    r.say(f"{m.name}: valid ({len(m.pieces)} pieces, {len(m.edges)} edges)")
    r.kv("valid", "true")
    r.kv("pieces", len(m.pieces))
    r.kv("edges", len(m.edges))
    return r


def cmd_invariants(args) -> Report:
    m = _load(args.file)
    r = Report()
    r.say(f"canonical fillings of {m.name}:")
    for pid in m.piece_ids:
        h = hat_piece(m, pid)
        cone = " ".join(f"({p},{q})" for p, q in h.cone_data) or "-"
        r.say(f"  {pid}: genus={h.genus} cone={cone} chi_orb={h.chi_orb} e={h.euler_number} sv={h.sv}")
        r.kv(f"piece.{pid}.chi_orb", h.chi_orb)
        r.kv(f"piece.{pid}.e", h.euler_number)
        r.kv(f"piece.{pid}.sv", h.sv)
    ae, asv = abs_euler(m), abs_sv(m)
    r.say(f"|e| = {ae}, |SV| = {asv}")
    r.kv("abs_euler", ae)
    r.kv("abs_sv", asv)
    return r


def _cover_report(r: Report, label: str, desc) -> None:
    check = check_covering(desc)
    r.say(f"{label}: {desc.total_space.name} -> {desc.base_space.name}, degree {check.total_degree}, "
          f"check {'passed' if check.ok else 'FAILED'}")
    for v in check.violations:
        r.say(f"  violation: {v}")
    r.kv(f"{label}.degree", check.total_degree)
    r.kv(f"{label}.check", "pass" if check.ok else "fail")
    r.kv(f"{label}.char_m", desc.char_m if desc.char_m is not None else "none")
    r.kv(f"{label}.separable", str(desc.separable).lower())


def cmd_cover(args) -> Report:
    m = _load(args.file)
    r = Report()
    if args.kind == "separate-self-edges":
        cover, desc = separate_self_edges_cover(m)
        _cover_report(r, "cover", desc)
        if desc.note:
            r.say(f"note: {desc.note}")
        result = cover
    elif args.kind == "property-i":
        norm = property_i_normalize(m)
        _cover_report(r, "p1", norm.p1)
        _cover_report(r, "p2", norm.p2)
        r.say(f"normalized matrix A = {norm.matrix}; edges glued by -A: {', '.join(norm.flipped_edges) or 'none'}")
        r.kv("matrix", norm.matrix)
        result = norm.n2
    else:
        cover, desc = genus_cover(m)
        _cover_report(r, "cover", desc)
        for p in cover.pieces:
            r.kv(f"piece.{p.id}.genus", p.genus)
        result = cover
    _write(serialize(result), args.output)
    r.kv("output", args.output or "-")
    return r


def _witness_lines(r: Report, cert, prefix: str = "") -> None:
    for ln in cert.chain:
        kind = "covering" if ln.is_covering else ln.map.kind
        r.say(f"  {ln.stage}: {kind}, degree {ln.degree}")
        r.kv(f"{prefix}chain.{ln.stage}.degree", ln.degree)
    t = cert.target
    cone = " ".join(f"({p},{q})" for p, q in t.cone_data)
    r.say(f"  target N4: genus {t.genus}, filled {cone}, e={t.euler_number}, chi_orb={t.chi_orb}, SV={cert.target_sv}")
    r.say(f"  {cert.conclusion.statement}")
    r.kv(f"{prefix}projection_branch", cert.projection_branch)
    r.kv(f"{prefix}target_genus", t.genus)
    r.kv(f"{prefix}target_e", t.euler_number)
    r.kv(f"{prefix}target_chi_orb", t.chi_orb)
    r.kv(f"{prefix}target_sv", cert.target_sv)
    r.kv(f"{prefix}p4_degree", cert.conclusion.p4_degree)
    r.kv(f"{prefix}sv_n3_lower_bound", cert.conclusion.sv_n3_lower_bound)
    r.kv(f"{prefix}cover_degree_bound", cert.conclusion.cover_degree_bound)


def cmd_witness(args) -> Report:
    m = _load(args.file)
    cert = sv_witness(m)
    r = Report()
    r.say(f"finite-cover certificate for {m.name}:")
    _witness_lines(r, cert)
    return r


def cmd_bound(args) -> Report:
    M, N = _load(args.m_file), _load(args.n_file)
    rep = degree_bound_report(M, N, max_edges=args.max_edges)
    r = Report()
    r.say(f"degree bound for maps {M.name} -> {N.name} (path {rep.path})")
    for note in rep.notes:
        r.say(f"note: {note}")
    for a in rep.assumptions:
        r.say(f"assumption: {a}")
    r.kv("path", rep.path)
    r.kv("candidates", len(rep.candidates))
    if rep.path == "abs_euler_nonzero":
        r.say(f"Q = {rep.target_piece}, SV(Q^) = {rep.target_sv}")
        r.kv("q_piece", rep.target_piece)
        r.kv("q_sv", rep.target_sv)
    for c in rep.candidates:
        ratio = c.ratio if c.ratio is not None else "not computable (graph-manifold hat)"
        if rep.path == "abs_euler_zero":
            ratio = "n/a"
        r.say(f"  L = {c.submanifold}: |e|={c.hat.abs_euler} |SV|={c.hat.abs_sv} ratio={ratio}")
    bound = rep.numeric_bound_over_seifert_hats
    r.say(f"bound over Seifert-hat candidates: {bound if bound is not None else 'none'}")
    r.kv("bound_over_seifert_hats", bound if bound is not None else "none")
    if rep.witness is not None:
        r.say("witness for Q^:")
        _witness_lines(r, rep.witness, prefix="witness.")
    r.say(rep.finiteness_conclusion)
    return r


def cmd_dot(args):
    sys.stdout.write(export_dot(_load(args.file)))
    return None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gm", description="Graph manifold invariants, coverings and degree bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a .gm file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("invariants", help="chi_orb, e and SV of every filled piece; |e| and |SV|")
    p.add_argument("file")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("cover", help="construct a covering space")
    p.add_argument("kind", choices=["separate-self-edges", "property-i", "genus"])
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the resulting manifold here (default: stdout)")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("witness", help="finite cover with nonzero SV for a multiple-edge manifold")
    p.add_argument("file")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("bound", help="degree-bound report for maps M -> N")
    p.add_argument("m_file", metavar="M_FILE")
    p.add_argument("n_file", metavar="N_FILE")
    p.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("dot", help="Graphviz DOT of the dual graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_dot)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (HypothesisError, EdgeCapExceeded) as exc:
        print(f"hypothesis not met: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GraphManifoldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    if report is not None:
        # a -o file is already written; the report goes to stdout unless it would mix with a manifold
        stream = sys.stderr if args.command == "cover" and not getattr(args, "output", None) else sys.stdout
        stream.write(report.render())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
