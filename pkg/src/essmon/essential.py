"""Essential sets, dual structure constants and lowest-term valuations.

The representation V(lambda) is built explicitly (see ``irrep``) and every
root vector acts through weight-block matrices. The vectors f^(m) v_lambda
are enumerated from the right, f_{beta_N}^(m_N) first, and a suffix is
dropped as soon as it vanishes. Inside a weight space they are sorted
ascending under the order and m is essential exactly when its vector is
independent of the vectors before it.
"""

from __future__ import annotations

import dataclasses
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .irrep import SimpleIrrep
from .linalg import IncrementalEchelon, bareiss_rank, mat_mul, mat_sub, mat_vec, rank
from .orders import OrderSpec
from .pbw import BirationalSequence, Straightener
from .rootsys import RootSystem, root_decomposition, weyl_dim


class RootAction:
    """Matrices of all f_beta (beta > 0) on V(lambda), weight block by weight block."""

    def __init__(self, rs: RootSystem, lam):
        self.rs = rs
        self.lam = tuple(lam)
        self.V = SimpleIrrep(rs.cartan, self.lam)
        self.shift = [rs.root_weight(b) for b in rs.positive_roots]
        self._mats: dict = {}
        self._simple = {rs.index(rs.simple_root(i)): i for i in range(rs.rank)}

    def _sub(self, mu, r):
        return tuple(a - b for a, b in zip(mu, self.shift[r]))

    def matrix(self, r: int, mu):
        """f_{beta_r}: V_mu -> V_{mu - beta_r}, or None when it is zero."""
        key = (r, mu)
        if key in self._mats:
            return self._mats[key]
        V = self.V
        tgt = self._sub(mu, r)
        if mu not in V.dims or tgt not in V.dims:
            M = None
        elif r in self._simple:
            M = V.f[self._simple[r]].get(mu)
        else:
            i, eta, p = root_decomposition(self.rs.positive_roots, self.rs.positive_roots[r])
            ri = self.rs.index(self.rs.simple_root(i))
            re = self.rs.index(eta)
            a = self._chain(ri, re, mu)
            b = self._chain(re, ri, mu)
            if a is None and b is None:
                M = None
            else:
                if a is None:
                    D = [[-x for x in row] for row in b]
                elif b is None:
                    D = a
                else:
                    D = mat_sub(a, b)
                M = [[x / (p + 1) for x in row] for row in D]
                if all(not x for row in M for x in row):
                    M = None
        self._mats[key] = M
        return M

    def _chain(self, outer: int, inner: int, mu):
        """f_outer f_inner on V_mu."""
        A = self.matrix(inner, mu)
        if A is None:
            return None
        B = self.matrix(outer, self._sub(mu, inner))
        if B is None:
            return None
        return mat_mul(B, A)

    def apply(self, r: int, mu, vec):
        """(mu - beta_r, f_{beta_r} vec) with None for a zero result."""
        tgt = self._sub(mu, r)
        M = self.matrix(r, mu)
        if M is None:
            return tgt, None
        out = mat_vec(M, vec)
        if not any(out):
            return tgt, None
        return tgt, out

    def highest_vector(self):
        return self.lam, [Fraction(1)]


_ACTIONS: dict = {}


def root_action(rs: RootSystem, lam) -> RootAction:
    key = (rs.spec, tuple(lam))
    act = _ACTIONS.get(key)
    if act is None:
        if len(_ACTIONS) > 64:
            _ACTIONS.clear()
        act = _ACTIONS[key] = RootAction(rs, lam)
    return act


@dataclass
class EssentialSet:
    lam: tuple
    exponents: list  # ascending under the order
    order: OrderSpec
    sequence: BirationalSequence
    dim_check: bool
    weyl_dim: int
    # weight (fundamental coords) -> essential exponents of that weight, ascending
    blocks: dict = field(repr=False, default_factory=dict)
    # every m with f^(m) v != 0 -> {p: xi_p(f^(m) v)}
    values: dict = field(repr=False, default_factory=dict)
    weights: dict = field(repr=False, default_factory=dict)
    echelons: dict = field(repr=False, default_factory=dict)
    action: RootAction | None = field(repr=False, default=None)
    scales: tuple | None = field(repr=False, default=None)

    def __contains__(self, m) -> bool:
        return tuple(m) in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = self.__dict__["_cached_set"] = frozenset(self.exponents)
        return s

    def __len__(self):
        return len(self.exponents)

    def as_set(self) -> frozenset:
        return self._set

    def block_sizes(self) -> dict:
        return {mu: len(v) for mu, v in self.blocks.items()}

    def to_json(self, rs: RootSystem | None = None) -> dict:
        return {
            "lambda": list(self.lam),
            "order": self.order.describe(),
            "sequence": self.sequence.label or [list(b) for b in self.sequence.roots],
            "exponents": [list(m) for m in sorted(self.exponents)],
            "count": len(self.exponents),
            "weyl_dim": self.weyl_dim,
            "dim_check": self.dim_check,
        }


class EssentialError(RuntimeError):
    pass


def _vectors(act: RootAction, S: BirationalSequence, scales=None) -> dict:
    """All m with f^(m) v_lambda != 0, mapped to (weight, vector)."""
    rs = act.rs
    idx = [rs.index(b) for b in S.roots]
    N = S.N
    out = {}
    m = [0] * N

    def rec(i, mu, vec):
        if i < 0:
            out[tuple(m)] = (mu, vec)
            return
        k = 0
        cur_mu, cur = mu, vec
        while cur is not None:
            m[i] = k
            rec(i - 1, cur_mu, cur)
            k += 1
            cur_mu, cur = act.apply(idx[i], cur_mu, cur)
            if cur is not None:
                c = Fraction(1, k) if scales is None else Fraction(scales[i]) / k
                cur = [x * c for x in cur]
        m[i] = 0

    mu0, v0 = act.highest_vector()
    rec(N - 1, mu0, v0)
    return out


def essential_set(rs: RootSystem, S: BirationalSequence, order: OrderSpec, lam, scales=None,
                  strict: bool = True) -> EssentialSet:
    """es(lambda) with the coordinates of every f^(m) v_lambda in the essential basis.

    ``scales`` rescales the root vectors f_{beta_i} by nonzero rationals (the
    essential set does not depend on them; the coordinates do).
    """
    lam = tuple(int(x) for x in lam)
    if len(lam) != rs.rank or min(lam) < 0:
        raise ValueError(f"not a dominant weight for {rs.spec}: {lam}")
    if S.N != order.N:
        raise ValueError(f"order is for N = {order.N}, sequence has N = {S.N}")
    act = root_action(rs, lam)
    vecs = _vectors(act, S, scales)
    by_weight: dict = {}
    for m, (mu, _) in vecs.items():
        by_weight.setdefault(mu, []).append(m)
    blocks, values, echelons, weights = {}, {}, {}, {}
    exps = []
    for mu in sorted(by_weight, reverse=True):
        ms = order.sorted(by_weight[mu])
        ech = IncrementalEchelon(act.V.dims[mu])
        piv = []
        for m in ms:
            vec = vecs[m][1]
            ok, coords = ech.add(vec)
            weights[m] = mu
            if ok:
                piv.append(m)
                values[m] = {m: Fraction(1)}
            else:
                values[m] = {p: c for p, c in zip(piv, coords) if c}
        blocks[mu] = piv
        echelons[mu] = ech
        exps.extend(piv)
        if len(piv) != act.V.dims[mu] and strict:
            raise EssentialError(f"weight {mu}: {len(piv)} essential vectors for a space of dimension {act.V.dims[mu]}")
    exps = order.sorted(exps)
    wd = weyl_dim(rs, lam)
    ok = len(exps) == wd
    if strict and not ok:
        raise EssentialError(f"|es({lam})| = {len(exps)} but dim V({lam}) = {wd}")
    return EssentialSet(lam, exps, order, S, ok, wd, blocks, values, weights, echelons, act,
                        tuple(scales) if scales is not None else None)


def essential_sets(rs: RootSystem, S: BirationalSequence, order: OrderSpec, lams: Sequence, jobs: int = 1) -> dict:
    """es(lambda) for several lambda; the result does not depend on ``jobs``."""
    lams = [tuple(l) for l in lams]
    if jobs <= 1 or len(lams) < 2:
        return {l: essential_set(rs, S, order, l) for l in lams}
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        res = list(ex.map(_es_worker, [(rs.spec, S, order, l) for l in lams]))
    out = {}
    for l, (exps, ok) in zip(lams, res):
        out[l] = EssentialSet(l, exps, order, S, ok, weyl_dim(rs, l))
    return out


def _es_worker(args):
    from .rootsys import build_root_system
    spec, S, order, lam = args
    es = essential_set(build_root_system(spec), S, order, lam)
    return es.exponents, es.dim_check


# --- representation matrices and dual functionals ---------------------------------------

def rep_matrices(rs: RootSystem, es: EssentialSet) -> list:
    """Matrix of each f_{beta_i} on the basis {f^(p) v : p in es}, basis in ascending order."""
    basis = es.exponents
    pos = {p: k for k, p in enumerate(basis)}
    S = es.sequence
    act = es.action
    scales = es.scales
    mats = []
    for i, b in enumerate(S.roots):
        r = rs.index(b)
        M = [[Fraction(0)] * len(basis) for _ in basis]
        for col, p in enumerate(basis):
            mu = es.weights[p]
            vec = _vector_of(es, p)
            tgt, img = act.apply(r, mu, vec)
            if img is None:
                continue
            if scales is not None:
                img = [x * scales[i] for x in img]
            coords = es.echelons[tgt].coords(img)
            if coords is None:
                raise EssentialError("image outside the module")
            for q, c in zip(es.blocks[tgt], coords):
                if c:
                    M[pos[q]][col] = c
        mats.append(M)
    return mats


def _vector_of(es: EssentialSet, m):
    """f^(m) v_lambda recomputed in the module (rescaled if needed)."""
    act = es.action
    rs = act.rs
    mu, vec = act.highest_vector()
    for i in range(len(m) - 1, -1, -1):
        k = m[i]
        r = rs.index(es.sequence.roots[i])
        for t in range(1, k + 1):
            mu, vec = act.apply(r, mu, vec)
            if vec is None:
                return None
            c = Fraction(1, t) if es.scales is None else Fraction(es.scales[i]) / t
            vec = [x * c for x in vec]
    return vec


def xi_value(es: EssentialSet, p, m) -> Fraction:
    """xi_{lambda,p}(f^(m) v_lambda)."""
    return es.values.get(tuple(m), {}).get(tuple(p), Fraction(0))


@dataclass
class DualProduct:
    coeffs: dict  # r -> c, nonzero only
    lead: tuple
    lead_coeff: Fraction
    below: list  # r < p + q with c_r != 0 (must be empty)

    @property
    def ok(self) -> bool:
        return self.lead_coeff == 1 and not self.below


def dual_structure_constants(rs: RootSystem, es_l: EssentialSet, p, es_m: EssentialSet, q,
                             es_lm: EssentialSet, check: bool = True) -> DualProduct:
    """Expansion of xi_{lambda,p} xi_{mu,q} in the basis xi_{lambda+mu, r}."""
    p, q = tuple(p), tuple(q)
    if p not in es_l:
        raise ValueError(f"{p} is not essential for lambda = {es_l.lam}")
    if q not in es_m:
        raise ValueError(f"{q} is not essential for mu = {es_m.lam}")
    if tuple(a + b for a, b in zip(es_l.lam, es_m.lam)) != es_lm.lam:
        raise ValueError("third essential set must belong to lambda + mu")
    order = es_lm.order
    target_w = tuple(a + b - c for a, b, c in zip(es_l.weights[p], es_m.weights[q], es_lm.lam))
    coeffs = {}
    for r in es_lm.exponents:
        # only r of the right weight can pair nontrivially
        if tuple(x - y for x, y in zip(es_lm.weights[r], es_lm.lam)) != target_w:
            continue
        c = Fraction(0)
        for a in itertools.product(*(range(x + 1) for x in r)):
            va = es_l.values.get(a)
            if not va or p not in va:
                continue
            b = tuple(x - y for x, y in zip(r, a))
            vb = es_m.values.get(b)
            if not vb or q not in vb:
                continue
            c += va[p] * vb[q]
        if c:
            coeffs[r] = c
    lead = tuple(a + b for a, b in zip(p, q))
    lk = order.key(lead)
    below = [r for r in coeffs if order.key(r) < lk]
    res = DualProduct(coeffs, lead, coeffs.get(lead, Fraction(0)), sorted(below))
    if check and not res.ok:
        raise EssentialError(f"triangularity fails for ({p}, {q}): lead {res.lead_coeff}, below {res.below}")
    return res


# --- pullback polynomials and the valuation ---------------------------------------------

def pullback_polynomial(rs: RootSystem, es: EssentialSet, p, mats=None) -> dict:
    """xi_{lambda,p}(exp(x_1 F_1) ... exp(x_N F_N) v_lambda) as {exponent: coefficient}.

    The exponentials are applied right to left with the nilpotent
    representation matrices, so every series is a finite sum.
    """
    p = tuple(p)
    if p not in es:
        raise ValueError(f"{p} is not essential for lambda = {es.lam}")
    mats = mats or rep_matrices(rs, es)
    N = es.sequence.N
    dim = len(es.exponents)
    start = es.exponents.index((0,) * N)
    # polynomial vector: exponent -> coordinate vector
    poly = {(0,) * N: [Fraction(int(k == start)) for k in range(dim)]}
    for i in range(N - 1, -1, -1):
        M = mats[i]
        new = {}
        for ex, vec in poly.items():
            cur = vec
            k = 0
            while cur is not None:
                e2 = list(ex)
                e2[i] += k
                e2 = tuple(e2)
                acc = new.get(e2)
                new[e2] = cur if acc is None else [x + y for x, y in zip(acc, cur)]
                k += 1
                nxt = mat_vec(M, cur)
                cur = [x / k for x in nxt] if any(nxt) else None
        poly = new
    col = es.exponents.index(p)
    return {ex: vec[col] for ex, vec in sorted(poly.items()) if vec[col]}


def lowest_term_valuation(poly: dict, order: OrderSpec, weight_keys: bool = False):
    """Order-minimal exponent with nonzero coefficient.

    With ``weight_keys`` the keys are (lambda, m) and lambda is compared first
    in graded-lex order.
    """
    support = [k for k, c in poly.items() if c]
    if not support:
        raise ValueError("the zero polynomial has no valuation")
    if weight_keys:
        return min(support, key=lambda t: ((sum(t[0]),) + tuple(t[0]), order.key(t[1])))
    return min(support, key=order.key)


def quotient_valuation(num: dict, den: dict, order: OrderSpec) -> tuple:
    a = lowest_term_valuation(num, order)
    b = lowest_term_valuation(den, order)
    return tuple(x - y for x, y in zip(a, b))


@dataclass
class ValuationReport:
    lam: tuple
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def valuation_check(rs: RootSystem, es: EssentialSet) -> ValuationReport:
    mats = rep_matrices(rs, es)
    fails = []
    for p in es.exponents:
        poly = pullback_polynomial(rs, es, p, mats)
        low = lowest_term_valuation(poly, es.order)
        if low != p or poly[low] != 1:
            fails.append({"p": list(p), "lowest": list(low), "coeff": str(poly[low])})
    return ValuationReport(es.lam, len(es.exponents), fails)


# --- the monoid Gamma -----------------------------------------------------------------

def box_weights(box: Sequence[int]) -> list[tuple]:
    return [tuple(t) for t in itertools.product(*(range(b + 1) for b in box))]


@dataclass
class GammaSample:
    box: tuple
    sets: dict  # lambda -> frozenset of exponents
    violations: list
    lattice_rank: int
    expected_rank: int
    generators: list

    @property
    def elements(self) -> list:
        return [(l, m) for l in sorted(self.sets) for m in sorted(self.sets[l])]

    def to_json(self) -> dict:
        return {
            "box": list(self.box),
            "weights": len(self.sets),
            "elements": sum(len(v) for v in self.sets.values()),
            "closure_violations": [[list(l), list(p), list(m), list(q)] for l, p, m, q in self.violations],
            "lattice_rank": self.lattice_rank,
            "expected_rank": self.expected_rank,
            "generator_candidates": [[list(l), list(m)] for l, m in self.generators],
        }


def closure_violations(sets: dict) -> list:
    """Pairs with p + q not essential for lambda + mu (over in-sample lambda + mu)."""
    out = []
    lams = sorted(sets)
    for i, l in enumerate(lams):
        for m in lams[i:]:
            tot = tuple(a + b for a, b in zip(l, m))
            if tot not in sets:
                continue
            target = sets[tot]
            for p in sorted(sets[l]):
                for q in sorted(sets[m]):
                    if tuple(a + b for a, b in zip(p, q)) not in target:
                        out.append((l, p, m, q))
    return out


def gamma_sample(rs: RootSystem, S: BirationalSequence, order: OrderSpec, box: Sequence[int],
                 jobs: int = 1, sets: dict | None = None) -> GammaSample:
    box = tuple(box)
    lams = box_weights(box)
    if sets is None:
        sets = {l: es.as_set() for l, es in essential_sets(rs, S, order, lams, jobs).items()}
    viol = closure_violations(sets)
    vectors = [list(l) + list(m) for l in lams for m in sorted(sets[l])]
    lrank = bareiss_rank(vectors) if vectors else 0
    gens = []
    for l in lams:
        if not any(l):
            continue
        splits = [(a, tuple(x - y for x, y in zip(l, a))) for a in box_weights(l) if any(a) and a != l]
        for m in sorted(sets[l]):
            decomposable = False
            for a, b in splits:
                if any(tuple(x - y for x, y in zip(m, p)) in sets[b] for p in sets[a]):
                    decomposable = True
                    break
            if not decomposable:
                gens.append((l, m))
    return GammaSample(box, sets, viol, lrank, rs.rank + S.N, gens)


def deriving_violations(es_or_set, N: int | None = None) -> list:
    """(m, i) with m in es but m - e_i not in es: for quasi-commutative
    filtrations m not essential implies m + e_i not essential."""
    s = es_or_set.as_set() if isinstance(es_or_set, EssentialSet) else frozenset(es_or_set)
    out = []
    for m in sorted(s):
        for i, x in enumerate(m):
            if x and tuple(v - int(k == i) for k, v in enumerate(m)) not in s:
                out.append((m, i))
    return out


def extension_check(rs: RootSystem, es: EssentialSet, shift: int = 3) -> list:
    """Exponents of es(lambda) that stop being essential at lambda + shift
    ("lambda >> 0" made concrete); also tested against es(n^-) directly."""
    S, order = es.sequence, es.order
    bigger = tuple(x + shift for x in es.lam)
    es_big = essential_set(rs, S, order, bigger)
    missing = [m for m in es.exponents if m not in es_big]
    if missing:
        bigger2 = tuple(2 * x for x in bigger)
        es_big = essential_set(rs, S, order, bigger2)
        missing = [m for m in es.exponents if m not in es_big]
    return missing


def nminus_check(rs: RootSystem, es: EssentialSet) -> list:
    """Exponents of es(lambda) that are not essential for U(n^-)."""
    st = Straightener(rs, es.sequence, es.order)
    out = []
    for m in es.exponents:
        if m not in st.essential_in_block(es.sequence.weight(m)):
            out.append(m)
    return out


# --- dominance --------------------------------------------------------------------------

@dataclass
class DominanceResult:
    status: str  # "dominant" | "likely_not_dominant"
    ranks: list
    N: int
    trials: int
    seed: int
    certified: bool

    def to_json(self) -> dict:
        return {"status": self.status, "ranks": self.ranks, "N": self.N, "trials": self.trials,
                "seed": self.seed, "certified": self.certified}


def dominance_check(rs: RootSystem, S: BirationalSequence, trials: int = 5, seed: int = 42) -> DominanceResult:
    """Rank of the differential of z -> exp(z_1 f_1) ... exp(z_N f_N) at random points.

    After left translation the k-th partial derivative is
    exp(-z_N ad f_N) ... exp(-z_{k+1} ad f_{k+1}) f_k, computed in n^- with
    the Chevalley table; the exponentials are finite because ad is nilpotent.
    """
    idx = [rs.index(b) for b in S.roots]
    rng = random.Random(seed)
    ranks = []
    for _ in range(trials):
        z = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(S.N)]
        cols = []
        for k in range(S.N):
            v = {idx[k]: Fraction(1)}
            for j in range(k + 1, S.N):
                v = _exp_ad(rs, idx[j], -z[j], v)
            cols.append([v.get(r, Fraction(0)) for r in range(rs.N)])
        rk = rank(cols)
        ranks.append(rk)
        if rk == rs.N:
            break
    status = "dominant" if max(ranks) == rs.N and S.N >= rs.N else "likely_not_dominant"
    return DominanceResult(status, ranks, S.N, len(ranks), seed, status == "dominant")


def accept_custom_sequence(rs: RootSystem, S: BirationalSequence, trials: int = 5,
                           seed: int = 42) -> tuple[BirationalSequence, DominanceResult]:
    """Dominance test for a sequence; a dominant custom sequence comes back
    flagged, since dominance alone does not prove birationality."""
    dom = dominance_check(rs, S, trials, seed)
    if S.provenance == "custom" and dom.status == "dominant":
        S = dataclasses.replace(S, birationality_unverified=True)
    return S, dom


def _exp_ad(rs: RootSystem, r: int, t: Fraction, v: dict) -> dict:
    """exp(t ad f_r) v for v in n^- (root index -> coefficient)."""
    out = dict(v)
    term = dict(v)
    k = 0
    while term:
        k += 1
        nxt = {}
        for s, c in term.items():
            b = rs.bracket_ff(r, s)
            if b is not None:
                nxt[b[0]] = nxt.get(b[0], 0) + c * b[1] * t / k
        term = {a: c for a, c in nxt.items() if c}
        for a, c in term.items():
            out[a] = out.get(a, 0) + c
    return {a: c for a, c in out.items() if c}
