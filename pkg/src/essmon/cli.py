"""Command-line interface: ``essmon <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass

from . import __version__
from .essential import (EssentialError, accept_custom_sequence, dual_structure_constants, essential_set,
                        gamma_sample, valuation_check)
from .orders import parse_order
from .pbw import FreeWord, check_bracket_condition, check_quasi_commutative, parse_sequence, straighten
from .polytopes import (UnboundedError, compare_sets, fflv_polytope, find_permutation, gt_cone, gt_word,
                        lattice_points, sp4_polytope, string_weight_truncation)
from .rootsys import build_root_system, weyl_dim
from .shapovalov import VermaModule, gram_block


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    payload: dict
    ok: bool = True
    rows: list | None = None  # CSV rows, when the command has a tabular form
    text: str | None = None  # preformatted text output


def _ints(text: str, what: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise UsageError(f"--{what} expects comma-separated integers, got {text!r}") from None


def _lambda(args, rs, flag="lambda"):
    raw = getattr(args, flag.replace("-", "_"))
    if raw is None:
        raise UsageError(f"--{flag} is required")
    lam = _ints(raw, flag)
    if len(lam) != rs.rank:
        raise UsageError(f"--{flag} needs {rs.rank} coordinates for {rs.spec}, got {len(lam)}")
    if any(x < 0 for x in lam):
        raise UsageError(f"--{flag} must be dominant (non-negative coordinates)")
    return lam


def _root_system(args):
    if not args.type:
        raise UsageError("--type is required")
    try:
        return build_root_system(args.type)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _sequence(args, rs, default=None):
    text = args.sequence or default
    if text is None:
        raise UsageError("--sequence is required")
    try:
        return parse_sequence(rs, text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _order(args, rs, S, default=None):
    text = args.order or default
    if text is None:
        raise UsageError("--order is required")
    try:
        return parse_order(text, rs, S.roots)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --- commands -------------------------------------------------------------------------------

def cmd_roots(args) -> Outcome:
    rs = _root_system(args)
    data = rs.to_json()
    rows = [[rs.root_name(r), *r, h] for r, h in zip(rs.positive_roots, rs.heights)]
    return Outcome(data, rows=rows)


def cmd_sequence_check(args) -> Outcome:
    rs = _root_system(args)
    S = _sequence(args, rs)
    S, dom = accept_custom_sequence(rs, S, trials=args.trials, seed=args.seed)
    data = {
        "type": str(rs.spec),
        "sequence": S.describe(rs),
        "provenance": S.provenance,
        "pbw_type": S.is_pbw_type(),
        "left_bracket": check_bracket_condition(rs, S, "left").ok,
        "right_bracket": check_bracket_condition(rs, S, "right").ok,
        "dominance": dom.to_json(),
        "birationality_unverified": S.birationality_unverified,
    }
    ok = dom.status == "dominant"
    if args.order:
        order = _order(args, rs, S)
        qc = check_quasi_commutative(rs, S, order, word_samples=200, seed=args.seed, max_degree=5)
        data["order"] = order.describe()
        data["quasi_commutative"] = {"ok": qc.ok, "words": qc.checked,
                                     "witness": repr(qc.witness) if qc.witness else None, "detail": qc.detail}
    return Outcome(data, ok)


def cmd_straighten(args) -> Outcome:
    rs = _root_system(args)
    S = _sequence(args, rs)
    if not args.word:
        raise UsageError("--word is required, e.g. --word 1@2,3@1 (position@exponent)")
    try:
        w = FreeWord.parse(args.word)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if any(p >= S.N for p, _ in w.letters):
        raise UsageError(f"word positions must lie in 1..{S.N}")
    order = _order(args, rs, S) if args.order else None
    res = straighten(rs, S, w, order)
    data = {"type": str(rs.spec), "sequence": S.describe(rs), "word": args.word, "terms": res.to_json()}
    rows = [[*m, str(c)] for m, c in sorted(res.items())]
    return Outcome(data, rows=rows)


def cmd_essential(args) -> Outcome:
    rs = _root_system(args)
    S = _sequence(args, rs)
    order = _order(args, rs, S)
    lam = _lambda(args, rs)
    es = essential_set(rs, S, order, lam, strict=False)
    data = es.to_json(rs)
    if args.dump_gram:
        V = VermaModule(rs, lam)
        blocks = []
        for mu in sorted(es.blocks):
            blocks.append(gram_block(rs, lam, es.blocks[mu], S, V).to_json())
        data["gram_blocks"] = blocks
    rows = [list(m) for m in sorted(es.exponents)]
    return Outcome(data, es.dim_check, rows=rows)


def cmd_gamma(args) -> Outcome:
    rs = _root_system(args)
    S = _sequence(args, rs)
    order = _order(args, rs, S)
    if not args.box:
        raise UsageError("--box is required, e.g. --box 2,2")
    box = _ints(args.box, "box")
    if len(box) != rs.rank:
        raise UsageError(f"--box needs {rs.rank} coordinates")
    g = gamma_sample(rs, S, order, box, jobs=args.jobs)
    rows = [[*l, *m] for l, m in g.elements]
    return Outcome(g.to_json(), not g.violations, rows=rows)


def _polytope(args, rs):
    fam = args.family
    if fam == "fflv":
        lam = _lambda(args, rs)
        S = _sequence(args, rs, default="good")
        try:
            return fflv_polytope(rs, lam, S), lam
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if fam in ("gt", "string-trunc"):
        if rs.spec.family != "A":
            raise UsageError("the chain cone is defined for type A")
        cone = gt_cone(rs.rank)
        if fam == "gt":
            return cone, None
        lam = _lambda(args, rs)
        return string_weight_truncation(cone, rs, gt_word(rs.rank), lam), lam
    if fam == "sp4":
        if str(rs.spec) != "C2":
            raise UsageError("the sp4 polytope needs --type C2")
        lam = _lambda(args, rs)
        return sp4_polytope(*lam), lam
    raise UsageError(f"unknown --family {fam!r}; expected fflv, gt, sp4 or string-trunc")


def cmd_polytope(args) -> Outcome:
    rs = _root_system(args)
    if not args.family:
        raise UsageError("--family is required")
    P, lam = _polytope(args, rs)
    data = {"type": str(rs.spec), "family": args.family, "polyhedron": P.to_json()}
    rows = None
    if lam is not None:
        pts = lattice_points(P)
        data["lambda"] = list(lam)
        data["points"] = [list(p) for p in pts]
        data["count"] = len(pts)
        data["weyl_dim"] = weyl_dim(rs, lam)
        rows = [list(p) for p in pts]
    return Outcome(data, rows=rows)


def cmd_compare(args) -> Outcome:
    rs = _root_system(args)
    if not args.family:
        raise UsageError("--family is required")
    if args.family == "gt":
        raise UsageError("compare needs a bounded family: fflv, sp4 or string-trunc")
    S = _sequence(args, rs, default="good" if args.family == "fflv" else None)
    order = _order(args, rs, S)
    P, lam = _polytope(args, rs)
    es = essential_set(rs, S, order, lam, strict=False)
    pts = lattice_points(P)
    data = {"type": str(rs.spec), "family": args.family, "lambda": list(lam)}
    if args.family == "sp4":
        perm = find_permutation(pts, es.as_set())
        data["permutation"] = list(perm) if perm is not None else None
        if perm is not None:
            pts = lattice_points(P.permuted(perm))
    cmp = compare_sets(es.as_set(), pts)
    data.update(cmp.to_json())
    rows = [["es_only", *m] for m in cmp.only_a] + [["polytope_only", *m] for m in cmp.only_b]
    return Outcome(data, cmp.equal, rows=rows)


def cmd_structure_constants(args) -> Outcome:
    rs = _root_system(args)
    S = _sequence(args, rs)
    order = _order(args, rs, S)
    lam = _lambda(args, rs)
    mu = _lambda(args, rs, "mu")
    es_l = essential_set(rs, S, order, lam)
    es_m = essential_set(rs, S, order, mu)
    es_lm = essential_set(rs, S, order, tuple(a + b for a, b in zip(lam, mu)))
    ps = [_ints(args.p, "p")] if args.p else es_l.exponents
    qs = [_ints(args.q, "q")] if args.q else es_m.exponents
    products = []
    ok = True
    for p, q in itertools.product(ps, qs):
        try:
            res = dual_structure_constants(rs, es_l, p, es_m, q, es_lm, check=False)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        ok &= res.ok
        products.append({
            "p": list(p), "q": list(q),
            "coefficients": [{"r": list(r), "c": str(c)} for r, c in sorted(res.coeffs.items())],
            "lead": list(res.lead), "lead_coeff": str(res.lead_coeff),
            "below": [list(r) for r in res.below], "ok": res.ok,
        })
    data = {"type": str(rs.spec), "lambda": list(lam), "mu": list(mu), "products": products}
    return Outcome(data, ok)


def cmd_valuation_check(args) -> Outcome:
    rs = _root_system(args)
    S = _sequence(args, rs)
    order = _order(args, rs, S)
    lam = _lambda(args, rs)
    es = essential_set(rs, S, order, lam)
    rep = valuation_check(rs, es)
    data = {"type": str(rs.spec), "lambda": list(lam), "order": order.describe(), "checked": rep.checked,
            "failures": rep.failures, "ok": rep.ok}
    return Outcome(data, rep.ok)


def cmd_verify_all(args) -> Outcome:
    from .verify import CRITERIA, format_table, run_all
    which = None
    if args.criteria:
        which = _ints(args.criteria, "criteria")
        unknown = [k for k in which if k not in CRITERIA]
        if unknown:
            raise UsageError(f"unknown criteria {unknown}; expected numbers in 1..{max(CRITERIA)}")
    results = run_all(seed=args.seed, jobs=args.jobs, which=which)
    data = {"seed": args.seed, "criteria": [r.to_json() for r in results],
            "passed": sum(r.passed for r in results), "total": len(results)}
    return Outcome(data, all(r.passed for r in results), text=format_table(results))


FORMATS = ("json", "csv", "text")

COMMANDS = {
    "roots": cmd_roots,
    "sequence-check": cmd_sequence_check,
    "straighten": cmd_straighten,
    "essential": cmd_essential,
    "gamma": cmd_gamma,
    "polytope": cmd_polytope,
    "compare": cmd_compare,
    "structure-constants": cmd_structure_constants,
    "valuation-check": cmd_valuation_check,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="essmon", description="Essential monomials, birational sequences and their polytopes.")
    p.add_argument("--version", action="version", version=f"essmon {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--type", help="root system, e.g. A2, C2, G2")
        sp.add_argument("--sequence", help="pbw:<roots> | reduced:<indices> | lusztig:<indices> | good | custom:<roots>")
        sp.add_argument("--order", help="<lex|rlex|oplex|oprlex>:<zero|homogeneous|height|admissible|custom=w1,...>")
        sp.add_argument("--lambda", dest="lambda_", metavar="L", help="dominant weight in fundamental coordinates")
        sp.add_argument("--mu", help="second dominant weight (structure-constants)")
        sp.add_argument("--p", help="essential exponent for lambda (structure-constants)")
        sp.add_argument("--q", help="essential exponent for mu (structure-constants)")
        sp.add_argument("--box", help="upper corner of the weight box (gamma)")
        sp.add_argument("--family", help="fflv | gt | sp4 | string-trunc (polytope, compare)")
        sp.add_argument("--word", help="word as position@exponent letters, e.g. 1@2,3@1 (straighten)")
        sp.add_argument("--trials", type=int, default=5, help="random points for the dominance test")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--criteria", help="subset of acceptance criteria (verify-all)")
        sp.add_argument("--dump-gram", action="store_true", help="include Gram blocks of the contravariant form")
        sp.add_argument("--format", choices=FORMATS, default=None)
        sp.add_argument("--out", metavar="FORMAT|PATH",
                        help="json, csv or text selects the format; anything else is a file path")
    return p


def dumps(obj, level: int = 0) -> str:
    """JSON with one key per line and lists of scalars kept on one line."""
    pad = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(x, (dict, list, tuple)) for x in obj):
            return json.dumps(list(obj))
        items = [pad + dumps(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return json.dumps(obj)


def _render(outcome: Outcome, fmt: str) -> str:
    if fmt == "json":
        return dumps(outcome.payload) + "\n"
    if fmt == "text":
        if outcome.text is None:
            raise UsageError("text output is only available for verify-all")
        return outcome.text
    if outcome.rows is None:
        raise UsageError("csv output is not available for this command")
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(outcome.rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    args.__dict__["lambda"] = args.lambda_
    out_path = args.out
    if out_path in FORMATS:
        if args.format and args.format != out_path:
            print(f"essmon {args.command}: error: --out {out_path} conflicts with --format {args.format}", file=sys.stderr)
            return 2
        args.format, out_path = out_path, None
    fmt = args.format or ("text" if args.command == "verify-all" else "json")
    try:
        if args.jobs < 1 or args.trials < 1:
            raise UsageError("--jobs and --trials must be positive")
        outcome = COMMANDS[args.command](args)
        text = _render(outcome, fmt)
    except UsageError as exc:
        print(f"essmon {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (UnboundedError, EssentialError) as exc:
        print(f"essmon {args.command}: {exc}", file=sys.stderr)
        return 1
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if outcome.ok else 1


if __name__ == "__main__":
    sys.exit(main())
