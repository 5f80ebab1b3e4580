"""Straightening in U(n^-) with respect to a sequence of positive roots.

Two independent engines live here. ``PBWAlgebra`` multiplies ordered
divided-power monomials recursively (with memoisation) and is what the rest
of the package uses. ``rewrite_straighten`` is a plain word-rewriting
procedure that swaps one adjacent inversion at a time; it exists so the fast
engine can be checked against something naive, under two strategies.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import IncrementalEchelon
from .rootsys import RootSystem, longest_word, parse_root, roots_from_reduced_word

PROVENANCES = ("pbw_enumeration", "reduced_word", "custom")


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


# --- sequences -------------------------------------------------------------------

@dataclass(frozen=True)
class BirationalSequence:
    """S = (beta_1, ..., beta_N); roots in simple-root coordinates, repetitions allowed."""

    roots: tuple
    provenance: str = "custom"
    word: tuple | None = None
    label: str = ""
    # set when a custom sequence was accepted on the strength of a dominance check only
    birationality_unverified: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(int(x) for x in r) for r in self.roots))
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __len__(self):
        return len(self.roots)

    @property
    def N(self) -> int:
        return len(self.roots)

    def is_pbw_type(self) -> bool:
        return len(set(self.roots)) == len(self.roots)

    def weight(self, m) -> tuple:
        """wt(m) = sum m_i beta_i in simple-root coordinates."""
        n = len(self.roots[0]) if self.roots else 0
        out = [0] * n
        for c, b in zip(m, self.roots):
            if c:
                for k in range(n):
                    out[k] += c * b[k]
        return tuple(out)

    def describe(self, rs: RootSystem) -> list[str]:
        return [rs.root_name(b) for b in self.roots]


def validate_sequence(rs: RootSystem, S: BirationalSequence) -> None:
    if S.N != rs.N:
        raise ValueError(f"sequence has length {S.N}, but {rs.spec} has {rs.N} positive roots")
    for b in S.roots:
        if not rs.is_root(b):
            raise ValueError(f"{b} is not a positive root of {rs.spec}")
    if S.provenance == "pbw_enumeration" and sorted(S.roots) != sorted(rs.positive_roots):
        raise ValueError("a PBW enumeration must list every positive root exactly once")
    if S.provenance == "reduced_word":
        if S.word is None:
            raise ValueError("reduced-word sequence without its word")
        roots_from_reduced_word(rs, S.word)  # raises if not reduced


def pbw_sequence(rs: RootSystem, roots: Sequence, label: str = "") -> BirationalSequence:
    S = BirationalSequence(tuple(roots), "pbw_enumeration", label=label)
    validate_sequence(rs, S)
    return S


def reduced_word_sequence(rs: RootSystem, word: Sequence[int] | None = None) -> BirationalSequence:
    """S = (alpha_{i_1}, ..., alpha_{i_N}) for a reduced word of w0 (letters 1-based)."""
    word = tuple(word) if word is not None else tuple(longest_word(rs))
    S = BirationalSequence(tuple(rs.simple_root(i - 1) for i in word), "reduced_word", word=word,
                           label="reduced:" + ",".join(map(str, word)))
    validate_sequence(rs, S)
    return S


def convex_sequence(rs: RootSystem, word: Sequence[int] | None = None) -> BirationalSequence:
    """PBW enumeration beta_k = s_{i1}...s_{i(k-1)}(alpha_{ik}) attached to a reduced word."""
    word = tuple(word) if word is not None else tuple(longest_word(rs))
    roots = roots_from_reduced_word(rs, word)
    return pbw_sequence(rs, roots, label="lusztig:" + ",".join(map(str, word)))


def good_ordering(rs: RootSystem) -> BirationalSequence:
    """Larger roots first: height descending, ties by coordinates descending."""
    roots = sorted(rs.positive_roots, key=lambda r: (-sum(r), tuple(-x for x in r)))
    return pbw_sequence(rs, roots, label="good")


def custom_sequence(rs: RootSystem, roots: Sequence) -> BirationalSequence:
    S = BirationalSequence(tuple(roots), "custom",
                           label="custom:" + ",".join(rs.root_name(r) for r in roots))
    if S.N != rs.N:
        raise ValueError(f"sequence has length {S.N}, but {rs.spec} has {rs.N} positive roots")
    for b in S.roots:
        if not rs.is_root(b):
            raise ValueError(f"{b} is not a positive root of {rs.spec}")
    return S


def parse_sequence(rs: RootSystem, text: str) -> BirationalSequence:
    """``pbw:<names>`` | ``reduced:<indices>`` | ``lusztig:<indices>`` | ``good`` | ``custom:<names>``."""
    text = text.strip()
    kind, _, body = text.partition(":")
    kind = kind.lower()
    if kind == "good":
        return good_ordering(rs)
    if kind in ("reduced", "lusztig"):
        word = [int(x) for x in body.split(",") if x.strip()] if body.strip() else None
        return reduced_word_sequence(rs, word) if kind == "reduced" else convex_sequence(rs, word)
    if kind in ("pbw", "custom"):
        names = [x for x in body.split(",") if x.strip()]
        roots = [parse_root(rs, x) for x in names]
        if kind == "pbw":
            return pbw_sequence(rs, roots, label=text)
        return custom_sequence(rs, roots)
    raise ValueError(f"cannot parse sequence {text!r}; expected pbw:, reduced:, lusztig:, good or custom:")


# --- words and elements ----------------------------------------------------------

@dataclass(frozen=True)
class FreeWord:
    """Letters (position, divided-power exponent); positions are 0-based into S."""

    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((int(p), int(k)) for p, k in self.letters))
        for p, k in self.letters:
            if k < 1:
                raise ValueError(f"exponents must be >= 1, got {k}")
            if p < 0:
                raise ValueError(f"negative position {p}")

    @classmethod
    def parse(cls, text: str) -> "FreeWord":
        """``position@exponent`` letters: ``"2@1,1@2"`` is f_{beta_2} f_{beta_1}^(2).

        Positions are 1-based on input; a bare position means exponent 1.
        """
        letters = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "@" in part:
                p, k = part.split("@", 1)
            else:
                p, k = part, "1"
            letters.append((int(p) - 1, int(k)))
        return cls(tuple(letters))

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.letters)


def exp_of_word(w: FreeWord, N: int) -> tuple:
    out = [0] * N
    for p, k in w.letters:
        if p >= N:
            raise ValueError(f"position {p + 1} out of range for N = {N}")
        out[p] += k
    return tuple(out)


def coproduct_splits(m) -> list[tuple[tuple, tuple]]:
    """All (a, b) with a + b = m componentwise."""
    m = tuple(m)
    return [(a, tuple(x - y for x, y in zip(m, a))) for a in itertools.product(*(range(x + 1) for x in m))]


class PBWElement(dict):
    """Sparse map exponent -> nonzero Fraction, on divided-power monomials."""

    def add_term(self, m, c):
        if not c:
            return
        v = self.get(m, 0) + c
        if v:
            self[m] = v
        else:
            self.pop(m, None)

    def iadd(self, other, scale=1):
        for m, c in other.items():
            self.add_term(m, c * scale)
        return self

    def scaled(self, c) -> "PBWElement":
        return PBWElement({m: v * c for m, v in self.items()}) if c else PBWElement()

    def to_json(self) -> list:
        from .linalg import fstr
        return [{"exponent": list(m), "coeff": fstr(c)} for m, c in sorted(self.items())]


# --- the fast algebra ----------------------------------------------------------------

class PBWAlgebra:
    """U(n^-) in the divided-power PBW basis for a fixed ordering of the positive roots.

    ``order`` lists root indices (into ``rs.positive_roots``) by position; the
    default is the root system's own ordering.
    """

    def __init__(self, rs: RootSystem, order: Sequence[int] | None = None):
        self.rs = rs
        self.order = tuple(order) if order is not None else tuple(range(rs.N))
        if sorted(self.order) != list(range(rs.N)):
            raise ValueError("PBW ordering must be a permutation of the positive roots")
        self.N = rs.N
        self.pos_of_root = {r: p for p, r in enumerate(self.order)}
        # [f_p, f_q] = c f_r on positions
        self.bracket: dict = {}
        for p, i in enumerate(self.order):
            for q, j in enumerate(self.order):
                b = rs.bracket_ff(i, j)
                if b is not None:
                    self.bracket[(p, q)] = (self.pos_of_root[b[0]], b[1])
        self._cache: dict = {}
        self._left: dict = {}
        self._busy: set = set()

    @classmethod
    def for_sequence(cls, rs: RootSystem, S: BirationalSequence) -> "PBWAlgebra":
        if not S.is_pbw_type():
            raise ValueError("sequence repeats roots; it does not define a PBW ordering")
        return cls(rs, [rs.index(b) for b in S.roots])

    def one(self) -> PBWElement:
        return PBWElement({(0,) * self.N: Fraction(1)})

    def _ad(self, q, y: dict) -> dict:
        out = {}
        for r, c in y.items():
            b = self.bracket.get((q, r))
            if b is not None:
                out[b[0]] = out.get(b[0], 0) + c * b[1]
        return {k: v for k, v in out.items() if v}

    def mono_times_letter(self, m: tuple, p: int) -> PBWElement:
        """f^(m) f_p."""
        key = (m, p)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if key in self._busy:
            raise RuntimeError(f"straightening recursion did not terminate at {key}")
        self._busy.add(key)
        last = max((k for k, x in enumerate(m) if x), default=-1)
        if last <= p:
            n = list(m)
            n[p] += 1
            res = PBWElement({tuple(n): Fraction(n[p]) if last == p else Fraction(1)})
        else:
            q, a = last, m[last]
            m0 = list(m)
            m0[q] = 0
            m0 = tuple(m0)
            res = PBWElement()
            # f_q^(a) y = sum_k ((ad f_q)^k y / k!) f_q^(a-k)
            y = {p: Fraction(1)}
            for k in range(a + 1):
                if k:
                    y = {r: c / k for r, c in self._ad(q, y).items()}
                    if not y:
                        break
                for r, c in y.items():
                    part = self.mono_times_letter(m0, r)
                    res.iadd(self.times_divpow(part, q, a - k), c)
        self._busy.discard(key)
        self._cache[key] = res
        return res

    def times_divpow(self, X: dict, p: int, k: int) -> PBWElement:
        """X f_p^(k)."""
        if k == 0:
            return PBWElement(X)
        out = PBWElement()
        for m, c in X.items():
            last = max((t for t, x in enumerate(m) if x), default=-1)
            if last <= p:
                n = list(m)
                n[p] += k
                coeff = math.comb(n[p], k) if last == p else 1
                out.add_term(tuple(n), c * coeff)
            else:
                cur = PBWElement({m: Fraction(1)})
                for _ in range(k):
                    nxt = PBWElement()
                    for mm, cc in cur.items():
                        nxt.iadd(self.mono_times_letter(mm, p), cc)
                    cur = nxt
                out.iadd(cur, Fraction(c, math.factorial(k)))
        return out

    def mul(self, X: dict, Y: dict) -> PBWElement:
        out = PBWElement()
        for n, d in Y.items():
            cur = PBWElement(X)
            for p, k in enumerate(n):
                if k:
                    cur = self.times_divpow(cur, p, k)
            out.iadd(cur, d)
        return out

    def letter_times(self, p: int, X: dict) -> PBWElement:
        """f_p X."""
        out = PBWElement()
        for m, c in X.items():
            out.iadd(self._letter_times_mono(p, m), c)
        return out

    def _letter_times_mono(self, p: int, m: tuple) -> PBWElement:
        key = (p, m)
        hit = self._left.get(key)
        if hit is not None:
            return hit
        first = next((k for k, x in enumerate(m) if x), self.N)
        if p <= first:
            n = list(m)
            n[p] += 1
            res = PBWElement({tuple(n): Fraction(n[p])})
        else:
            e = [0] * self.N
            e[p] = 1
            res = self.mul({tuple(e): Fraction(1)}, {m: Fraction(1)})
        self._left[key] = res
        return res

    def word(self, letters: Iterable[tuple[int, int]]) -> PBWElement:
        """Product of divided powers f_p^(k) over (position, k) letters."""
        cur = self.one()
        for p, k in letters:
            cur = self.times_divpow(cur, p, k)
        return cur

    def root_word(self, letters: Iterable[tuple[int, int]]) -> PBWElement:
        """Like ``word`` but letters carry root indices instead of positions."""
        return self.word((self.pos_of_root[r], k) for r, k in letters)

    def weight(self, m) -> tuple:
        n = self.rs.rank
        out = [0] * n
        for p, c in enumerate(m):
            if c:
                b = self.rs.positive_roots[self.order[p]]
                for k in range(n):
                    out[k] += c * b[k]
        return tuple(out)


# --- monomials of a fixed weight ---------------------------------------------------------

def exponents_of_weight(S: BirationalSequence, nu) -> list[tuple]:
    """All m in N^N with wt(m) = nu (finite since every beta_i is positive)."""
    N = S.N
    nu = tuple(nu)
    out = []

    def rec(i, rem, acc):
        if i == N:
            if not any(rem):
                out.append(tuple(acc))
            return
        b = S.roots[i]
        k = 0
        r = rem
        while all(x >= 0 for x in r):
            acc.append(k)
            rec(i + 1, r, acc)
            acc.pop()
            k += 1
            r = tuple(x - y for x, y in zip(r, b))

    rec(0, nu, [])
    return out


# --- the sequence-level straightener ------------------------------------------------------

class Straightener:
    """Rewrites words in the root vectors of S into S-monomials.

    For a PBW-type S the target is the divided-power PBW basis in the order of
    S. When S repeats roots the S-monomials only span, so the result is given
    in the basis {f^(m) : m in es(n^-)} for ``order`` (by default the
    height-weighted opposite lex order).
    """

    def __init__(self, rs: RootSystem, S: BirationalSequence, order=None):
        self.rs = rs
        self.S = S
        self.pbw = S.is_pbw_type()
        if self.pbw:
            self.alg = PBWAlgebra.for_sequence(rs, S)
        else:
            self.alg = PBWAlgebra(rs)
        if order is None:
            from .orders import OrderSpec, make_weight_function
            order = OrderSpec(make_weight_function("height", rs, S.roots), "op-wlex", label="oplex:height")
        self.order = order
        self.root_idx = [rs.index(b) for b in S.roots]
        self._monos: dict = {}
        self._blocks: dict = {}

    def monomial(self, m) -> PBWElement:
        """f^(m) = f_{beta_1}^(m_1) ... f_{beta_N}^(m_N) in the internal PBW basis."""
        m = tuple(m)
        hit = self._monos.get(m)
        if hit is None:
            hit = self.alg.root_word((self.root_idx[p], k) for p, k in enumerate(m) if k)
            self._monos[m] = hit
        return hit

    def internal(self, w: FreeWord) -> PBWElement:
        for p, _ in w.letters:
            if p >= self.S.N:
                raise ValueError(f"position {p + 1} out of range for N = {self.S.N}")
        return self.alg.root_word((self.root_idx[p], k) for p, k in w.letters)

    def block(self, nu):
        """(ascending exponents of weight nu, echelon of their expansions, essential subset)."""
        nu = tuple(nu)
        hit = self._blocks.get(nu)
        if hit is not None:
            return hit
        exps = self.order.sorted(exponents_of_weight(self.S, nu))
        index = {}
        cols = []
        rows = []
        for m in exps:
            el = self.monomial(m)
            for k in el:
                if k not in index:
                    index[k] = len(cols)
                    cols.append(k)
            rows.append(el)
        ech = IncrementalEchelon(len(cols))
        ess = []
        for m, el in zip(exps, rows):
            vec = [Fraction(0)] * len(cols)
            for k, c in el.items():
                vec[index[k]] = c
            if ech.add(vec)[0]:
                ess.append(m)
        hit = (exps, ech, ess, index)
        self._blocks[nu] = hit
        return hit

    def essential_in_block(self, nu) -> list[tuple]:
        return list(self.block(nu)[2])

    def straighten(self, w: FreeWord) -> PBWElement:
        el = self.internal(w)
        if self.pbw:
            return el
        return self.express(el, self.S.weight(exp_of_word(w, self.S.N)))

    def express(self, el: dict, nu) -> PBWElement:
        """Coordinates of an internal element of weight nu in the essential S-monomials."""
        if not el:
            return PBWElement()
        exps, ech, ess, index = self.block(nu)
        vec = [Fraction(0)] * ech.dim
        for k, c in el.items():
            if k not in index:
                raise ArithmeticError("element is not in the span of the weight block")
            vec[index[k]] = c
        coords = ech.coords(vec)
        if coords is None:
            raise ArithmeticError("element is not in the span of the weight block")
        return PBWElement({m: c for m, c in zip(ess, coords) if c})


def straighten(rs: RootSystem, S: BirationalSequence, w: FreeWord, order=None) -> PBWElement:
    return Straightener(rs, S, order).straighten(w)


def rewrite_straighten(rs: RootSystem, S: BirationalSequence, w: FreeWord, strategy: str = "leftmost") -> PBWElement:
    """Naive straightening by adjacent swaps f_q f_p -> f_p f_q + [f_q, f_p] (q > p).

    Divided powers are expanded into plain letters first. Only for PBW-type S.
    """
    if not S.is_pbw_type():
        raise ValueError("word rewriting needs a sequence without repeated roots")
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    pos = {b: k for k, b in enumerate(S.roots)}
    N = S.N
    coeff = Fraction(1)
    letters = []
    for p, k in w.letters:
        coeff /= math.factorial(k)
        letters.extend([p] * k)
    todo = {tuple(letters): coeff}
    done = PBWElement()
    while todo:
        word, c = todo.popitem()
        inv = [t for t in range(len(word) - 1) if word[t] > word[t + 1]]
        if not inv:
            exps = [0] * N
            for p in word:
                exps[p] += 1
            scale = 1
            for x in exps:
                scale *= math.factorial(x)
            done.add_term(tuple(exps), c * scale)
            continue
        t = inv[0] if strategy == "leftmost" else inv[-1]
        q, p = word[t], word[t + 1]
        swapped = word[:t] + (p, q) + word[t + 2:]
        _acc(todo, swapped, c)
        b = rs.bracket_ff(rs.index(S.roots[q]), rs.index(S.roots[p]))
        if b is not None:
            k, n = b
            r = pos[rs.positive_roots[k]]
            _acc(todo, word[:t] + (r,) + word[t + 2:], c * n)
    return done


def _acc(d, key, c):
    v = d.get(key, 0) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


# --- bracket conditions and quasi-commutativity ----------------------------------------------

@dataclass
class CheckResult:
    ok: bool
    witness: object = None
    detail: str = ""
    checked: int = 0


def check_bracket_condition(rs: RootSystem, S: BirationalSequence, side: str) -> CheckResult:
    """left: for i < j, [f_i, f_j] is 0 or a multiple of some f_k with k > i; right: k < j."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    N = S.N
    checked = 0
    for i in range(N):
        for j in range(i + 1, N):
            checked += 1
            b = rs.bracket_ff(rs.index(S.roots[i]), rs.index(S.roots[j]))
            if b is None:
                continue
            target = rs.positive_roots[b[0]]
            ks = [k for k in range(N) if S.roots[k] == target]
            good = any(k > i for k in ks) if side == "left" else any(k < j for k in ks)
            if not good:
                return CheckResult(False, (i + 1, j + 1), f"[f_{i + 1}, f_{j + 1}] lands on positions {[k + 1 for k in ks]}", checked)
    return CheckResult(True, None, "", checked)


def random_word(rng: random.Random, N: int, max_degree: int, divided: bool = True) -> FreeWord:
    deg = rng.randint(1, max_degree)
    letters = []
    while deg > 0:
        k = rng.randint(1, deg) if divided else 1
        letters.append((rng.randrange(N), k))
        deg -= k
    return FreeWord(tuple(letters))


def check_quasi_commutative(rs: RootSystem, S: BirationalSequence, order, word_samples: int = 200,
                            seed: int = 42, max_degree: int = 5, words: Sequence[FreeWord] | None = None) -> CheckResult:
    """Each sampled word m must straighten to c f^(exp(m)) + (terms < exp(m)).

    Letters are divided powers, so the leading coefficient is prod k_j! / prod l_t!
    (the definition is phrased with plain powers).
    """
    st = Straightener(rs, S, order)
    rng = random.Random(seed)
    if words is None:
        words = [random_word(rng, S.N, max_degree) for _ in range(word_samples)]
    for n, w in enumerate(words):
        lead = exp_of_word(w, S.N)
        res = st.straighten(w)
        want = Fraction(1)
        for x in lead:
            want *= math.factorial(x)
        for _, k in w.letters:
            want /= math.factorial(k)
        if res.get(lead, 0) != want:
            return CheckResult(False, (w.letters, lead), f"coefficient of the leading monomial is {res.get(lead, 0)}, expected {want}", n + 1)
        key = order.key(lead)
        for m in res:
            if m != lead and order.key(m) > key:
                return CheckResult(False, (w.letters, m), f"term {m} is larger than exp = {lead}", n + 1)
    return CheckResult(True, None, "", len(words))


# --- es(n^-) -------------------------------------------------------------------------

def es_nminus(rs: RootSystem, S: BirationalSequence, order, max_degree: int) -> set:
    """Essential multi-exponents of U(n^-) of total degree <= max_degree.

    Essentiality is decided on the full weight block, so exponents of higher
    degree sharing a weight are compared too.
    """
    st = Straightener(rs, S, order)
    weights = set()

    def rec(i, deg, acc):
        if i == S.N:
            weights.add(S.weight(acc))
            return
        for k in range(max_degree - deg + 1):
            rec(i + 1, deg + k, acc + [k])

    rec(0, 0, [])
    out = set()
    for nu in sorted(weights):
        for m in st.essential_in_block(nu):
            if sum(m) <= max_degree:
                out.add(m)
    return out
