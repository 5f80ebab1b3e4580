"""The bundled acceptance suite.

Each criterion is a function returning a ``CriterionResult``; ``run_all``
evaluates them in order, sharing essential sets through one cache. Output
carries no timings, so two runs with the same seed are byte-identical.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from .essential import (EssentialError, closure_violations, deriving_violations, dominance_check,
                        dual_structure_constants, essential_set, gamma_sample, valuation_check)
from .orders import parse_order
from .pbw import check_bracket_condition, check_quasi_commutative, es_nminus, parse_sequence
from .polytopes import (compare_sets, empirical_hull_report, fflv_polytope, gt_cone, gt_word,
                        lattice_points, sp4_polytope, string_weight_truncation)
from .rootsys import build_root_system, longest_word, weyl_dim

STRING_ORDER = "oplex:height"
FFLV_ORDER = "rlex:homogeneous"
SP4_SEQUENCE = "pbw:a1,a1+a2,2a1+a2,a2"
SP4_WEIGHTS = "1,1,1,2"


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    summary: str
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.number:>2}  {self.name}: {self.summary}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "summary": self.summary, "detail": self.detail}


class Context:
    """Shared cache of essential sets keyed by (type, sequence, order, lambda)."""

    def __init__(self, seed: int = 42, jobs: int = 1):
        self.seed = seed
        self.jobs = jobs
        self._es: dict = {}
        self._conf: dict = {}

    def config(self, typ: str, seq: str, order: str):
        key = (typ, seq, order)
        hit = self._conf.get(key)
        if hit is None:
            rs = build_root_system(typ)
            S = parse_sequence(rs, seq)
            hit = self._conf[key] = (rs, S, parse_order(order, rs, S.roots))
        return hit

    def es(self, typ: str, seq: str, order: str, lam):
        key = (typ, seq, order, tuple(lam))
        hit = self._es.get(key)
        if hit is None:
            rs, S, o = self.config(typ, seq, order)
            hit = self._es[key] = essential_set(rs, S, o, tuple(lam), strict=False)
        return hit

    def sets(self, typ: str, seq: str, order: str, bound: int) -> dict:
        rs = build_root_system(typ)
        return {lam: self.es(typ, seq, order, lam).as_set()
                for lam in itertools.product(range(bound + 1), repeat=rs.rank)}


def reduced_spec(typ: str) -> str:
    rs = build_root_system(typ)
    return "reduced:" + ",".join(map(str, longest_word(rs)))


def gt_spec(n: int) -> str:
    return "reduced:" + ",".join(map(str, gt_word(n)))


DIMENSION_CASES = [("A2", 3), ("A3", 2), ("C2", 2), ("G2", 2)]


def _dimension_configs():
    for typ, bound in DIMENSION_CASES:
        yield typ, reduced_spec(typ), STRING_ORDER, bound
        yield typ, "good", FFLV_ORDER, bound


def criterion_1(ctx: Context) -> CriterionResult:
    bad = []
    checked = 0
    for typ, seq, order, bound in _dimension_configs():
        rs = build_root_system(typ)
        for lam in itertools.product(range(bound + 1), repeat=rs.rank):
            es = ctx.es(typ, seq, order, lam)
            checked += 1
            if len(es) != weyl_dim(rs, lam):
                bad.append({"type": typ, "sequence": seq, "order": order, "lambda": list(lam),
                            "count": len(es), "weyl_dim": weyl_dim(rs, lam)})
    return CriterionResult(1, "dimension identity", not bad, f"{checked - len(bad)}/{checked} weights match",
                           {"checked": checked, "mismatches": bad})


def criterion_2(ctx: Context) -> CriterionResult:
    nminus = []
    trunc = []
    checked = 0
    for n in (2, 3):
        typ = f"A{n}"
        seq = gt_spec(n)
        rs, S, order = ctx.config(typ, seq, STRING_ORDER)
        cone = gt_cone(n)
        # the chain cone is claimed for the right lexicographic order and for height op-lex
        for otext in (STRING_ORDER, "rlex:zero"):
            o = parse_order(otext, rs, S.roots)
            es = es_nminus(rs, S, o, 4)
            pts = {p for p in lattice_points(cone, [(0, 4)] * S.N) if sum(p) <= 4}
            cmp = compare_sets(es, pts)
            nminus.append({"type": typ, "order": otext, "points": len(pts), "equal": cmp.equal,
                           "only_es": [list(x) for x in cmp.only_a], "only_cone": [list(x) for x in cmp.only_b]})
        for lam in itertools.product(range(2), repeat=n):
            es = ctx.es(typ, seq, STRING_ORDER, lam)
            cmp = compare_sets(es.as_set(), lattice_points(string_weight_truncation(cone, rs, gt_word(n), lam)))
            checked += 1
            if not cmp.equal:
                trunc.append({"type": typ, "lambda": list(lam), **cmp.to_json()})
    ok = all(r["equal"] for r in nminus) and not trunc
    return CriterionResult(2, "string-case equality", ok,
                           f"{sum(r['equal'] for r in nminus)}/{len(nminus)} cone checks, "
                           f"{checked - len(trunc)}/{checked} truncations equal",
                           {"nminus": nminus, "truncation_mismatches": trunc})


FFLV_CASES = [("A2", 2), ("A3", 2), ("C2", 2)]


def _fflv_compare(ctx: Context, order: str):
    bad = []
    checked = 0
    for typ, bound in FFLV_CASES:
        rs, S, _ = ctx.config(typ, "good", order)
        for lam in itertools.product(range(bound + 1), repeat=rs.rank):
            es = ctx.es(typ, "good", order, lam)
            cmp = compare_sets(es.as_set(), lattice_points(fflv_polytope(rs, lam, S)))
            checked += 1
            if not cmp.equal:
                bad.append({"type": typ, "lambda": list(lam), **cmp.to_json()})
    return checked, bad


def criterion_3(ctx: Context) -> CriterionResult:
    checked, bad = _fflv_compare(ctx, FFLV_ORDER)
    # the homogeneous opposite right lex order, reported alongside for comparison
    _, bad_op = _fflv_compare(ctx, "oprlex:homogeneous")
    failing = sorted({b["type"] for b in bad})
    summary = f"{checked - len(bad)}/{checked} weights equal under {FFLV_ORDER}"
    if bad:
        summary += f" (mismatch in {','.join(failing)}); oprlex:homogeneous: {checked - len(bad_op)}/{checked}"
    return CriterionResult(3, "Dyck-path polytope equality", not bad, summary,
                           {"order": FFLV_ORDER, "mismatches": bad,
                            "opposite_order_mismatches": bad_op, "checked": checked})


SP4_WEIGHTS_LIST = [(1, 0), (0, 1), (1, 1), (2, 1)]


def sp4_order() -> str:
    return f"lex:custom={SP4_WEIGHTS}"


def criterion_4(ctx: Context) -> CriterionResult:
    found = None
    per = []
    candidates = set(itertools.permutations(range(4)))
    for lam in SP4_WEIGHTS_LIST:
        es = ctx.es("C2", SP4_SEQUENCE, sp4_order(), lam).as_set()
        P = sp4_polytope(*lam)
        good = {p for p in candidates if set(lattice_points(P.permuted(p))) == es}
        per.append({"lambda": list(lam), "count": len(es), "matching_permutations": len(good)})
        candidates &= good
    if candidates:
        found = min(candidates)
    summary = (f"permutation x -> y, y[perm[k]] = x[k] with perm = {list(found)}" if found is not None
               else "no common coordinate permutation")
    return CriterionResult(4, "sp4 example", found is not None, summary,
                           {"sequence": SP4_SEQUENCE, "order": sp4_order(), "weights": per,
                            "permutation": list(found) if found is not None else None})


def _closure_configs():
    for typ, seq, order, bound in _dimension_configs():
        yield typ, seq, order, bound
    yield "A2", gt_spec(2), STRING_ORDER, 1
    yield "A3", gt_spec(3), STRING_ORDER, 1
    yield "C2", SP4_SEQUENCE, sp4_order(), 2


def criterion_5(ctx: Context) -> CriterionResult:
    total = 0
    bad = []
    for typ, seq, order, bound in _closure_configs():
        sets = ctx.sets(typ, seq, order, bound)
        v = closure_violations(sets)
        total += 1
        if v:
            bad.append({"type": typ, "sequence": seq, "order": order,
                        "violations": [[list(a) for a in t] for t in v[:5]], "count": len(v)})
    return CriterionResult(5, "monoid closure", not bad, f"{sum(b['count'] for b in bad)} violations over {total} boxes",
                           {"boxes": total, "violating": bad})


def criterion_6(ctx: Context) -> CriterionResult:
    rng = random.Random(ctx.seed)
    bad = []
    n = 0
    for seq, order in ((reduced_spec("A2"), STRING_ORDER), ("good", FFLV_ORDER)):
        rs, _, _ = ctx.config("A2", seq, order)
        for _ in range(50):
            lam = (rng.randint(0, 2), rng.randint(0, 2))
            mu = (rng.randint(0, 2), rng.randint(0, 2))
            es_l, es_m = ctx.es("A2", seq, order, lam), ctx.es("A2", seq, order, mu)
            es_lm = ctx.es("A2", seq, order, tuple(a + b for a, b in zip(lam, mu)))
            p = rng.choice(es_l.exponents)
            q = rng.choice(es_m.exponents)
            res = dual_structure_constants(rs, es_l, p, es_m, q, es_lm, check=False)
            n += 1
            if not res.ok:
                bad.append({"sequence": seq, "lambda": list(lam), "mu": list(mu), "p": list(p), "q": list(q),
                            "lead_coeff": str(res.lead_coeff), "below": [list(r) for r in res.below]})
    return CriterionResult(6, "triangularity", not bad, f"{n - len(bad)}/{n} products triangular with leading coefficient 1",
                           {"products": n, "failures": bad})


def criterion_7(ctx: Context) -> CriterionResult:
    seq = reduced_spec("A2")
    rs, _, _ = ctx.config("A2", seq, STRING_ORDER)
    checked = 0
    bad = []
    for lam in itertools.product(range(3), repeat=2):
        rep = valuation_check(rs, ctx.es("A2", seq, STRING_ORDER, lam))
        checked += rep.checked
        bad.extend({"lambda": list(lam), **f} for f in rep.failures)
    return CriterionResult(7, "valuation equality", not bad, f"{checked - len(bad)}/{checked} lowest terms equal x^p",
                           {"checked": checked, "failures": bad})


QC_CASES = [("good", FFLV_ORDER), ("lusztig", "lex:zero")]


def criterion_8(ctx: Context) -> CriterionResult:
    rows = []
    ok = True
    for typ in ("A2", "C2"):
        for seq, order in QC_CASES:
            rs, S, o = ctx.config(typ, seq, order)
            qc = check_quasi_commutative(rs, S, o, word_samples=200, seed=ctx.seed, max_degree=5)
            left = check_bracket_condition(rs, S, "left").ok
            der = []
            for lam in itertools.product(range(3), repeat=rs.rank):
                der.extend({"lambda": list(lam), "m": list(m), "i": i}
                           for m, i in deriving_violations(ctx.es(typ, seq, order, lam)))
            # case (ii) also needs the left bracket condition
            good = qc.ok and not der and (seq != "lusztig" or left)
            ok &= good
            rows.append({"type": typ, "sequence": seq, "order": order, "words": qc.checked,
                         "quasi_commutative": qc.ok, "witness": repr(qc.witness) if qc.witness else None,
                         "left_bracket": left, "deriving_violations": der[:5]})
    passed = sum(r["quasi_commutative"] and not r["deriving_violations"] for r in rows)
    return CriterionResult(8, "quasi-commutativity", ok, f"{passed}/{len(rows)} configurations", {"cases": rows})


def criterion_9(ctx: Context) -> CriterionResult:
    rows = []
    for seq, order in ((reduced_spec("A2"), STRING_ORDER), ("good", FFLV_ORDER)):
        rs, S, o = ctx.config("A2", seq, order)
        g = gamma_sample(rs, S, o, (2, 2), sets=ctx.sets("A2", seq, order, 2))
        rows.append({"sequence": seq, "order": order, "lattice_rank": g.lattice_rank, "expected": g.expected_rank})
    ok = all(r["lattice_rank"] == r["expected"] for r in rows)
    return CriterionResult(9, "lattice rank", ok, ", ".join(f"rank {r['lattice_rank']}/{r['expected']}" for r in rows),
                           {"samples": rows})


def criterion_10(ctx: Context) -> CriterionResult:
    runs = [("A2", reduced_spec("A2"), STRING_ORDER, 2), ("A2", gt_spec(2), STRING_ORDER, 1),
            ("A3", gt_spec(3), STRING_ORDER, 1)]
    runs += [(typ, "good", FFLV_ORDER, bound) for typ, bound in FFLV_CASES]
    checked = 0
    bad = []
    for typ, seq, order, bound in runs:
        rs = build_root_system(typ)
        for lam in itertools.product(range(bound + 1), repeat=rs.rank):
            rep = empirical_hull_report(ctx.es(typ, seq, order, lam))
            checked += 1
            if rep.difference:
                bad.append({"type": typ, "sequence": seq, "lambda": list(lam),
                            "difference": [list(x) for x in rep.difference]})
    return CriterionResult(10, "saturation evidence", not bad, f"{checked - len(bad)}/{checked} hulls without extra lattice points",
                           {"checked": checked, "non_saturated": bad})


def dominance_example() -> dict:
    rs = build_root_system("A2")
    return dominance_check(rs, parse_sequence(rs, "custom:a1,a1,a2")).to_json()


CRITERIA: dict[int, Callable[[Context], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_all(seed: int = 42, jobs: int = 1, which=None) -> list[CriterionResult]:
    ctx = Context(seed, jobs)
    out = []
    for k in sorted(which or CRITERIA):
        try:
            out.append(CRITERIA[k](ctx))
        except (EssentialError, ValueError) as exc:
            out.append(CriterionResult(k, CRITERIA[k].__name__, False, f"error: {exc}"))
    return out


def format_table(results) -> str:
    lines = [r.line() for r in results]
    n = sum(r.passed for r in results)
    lines.append(f"{n}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
