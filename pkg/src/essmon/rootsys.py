"""Root systems, Chevalley constants, reduced words and dimension formulas.

Conventions: ``cartan[i][j] = <alpha_j, alpha_i^vee>``, roots are integer
tuples in simple-root coordinates, weights are integer tuples in
fundamental-weight coordinates. So C2 has the long root alpha_2 and G2 has
the short root alpha_1 (= a) and highest root 3a+2b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .irrep import SimpleIrrep
from .linalg import mat_mul, mat_sub

FAMILIES = ("A", "B", "C", "D", "G")


@dataclass(frozen=True)
class RootSystemSpec:
    family: str
    rank: int

    def __post_init__(self):
        fam, n = self.family, self.rank
        if fam not in FAMILIES:
            raise ValueError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"rank must be a positive integer, got {n!r}")
        if fam == "G" and n != 2:
            raise ValueError("family G requires rank 2")
        if fam in ("B", "C") and n < 2:
            raise ValueError(f"{fam}{n} is not a valid type (use A1)")
        if fam == "D" and n < 3:
            raise ValueError(f"D{n} is not simple; family D requires rank >= 3")

    @classmethod
    def parse(cls, text: str) -> "RootSystemSpec":
        text = text.strip().upper()
        if len(text) < 2 or not text[1:].isdigit():
            raise ValueError(f"cannot parse root system type {text!r} (expected e.g. A2, C3, G2)")
        return cls(text[0], int(text[1:]))

    def __str__(self):
        return f"{self.family}{self.rank}"


def cartan_matrix(spec: RootSystemSpec) -> list[list[int]]:
    n, fam = spec.rank, spec.family
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if fam == "G":
        return [[2, -3], [-1, 2]]
    for i in range(n - 1):
        A[i][i + 1] = A[i + 1][i] = -1
    if fam == "B":
        A[n - 1][n - 2] = -2
    elif fam == "C":
        A[n - 2][n - 1] = -2
    elif fam == "D":
        A[n - 2][n - 1] = A[n - 1][n - 2] = 0
        A[n - 3][n - 1] = A[n - 1][n - 3] = -1
    return A


def symmetrizer(cartan) -> tuple[int, ...]:
    """Integers d_i with d_i a_ij = d_j a_ji, smallest equal to 1 (connected diagram)."""
    n = len(cartan)
    d: list = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if cartan[i][j] and d[j] is None:
                d[j] = d[i] * cartan[i][j] / cartan[j][i]
                stack.append(j)
    lo = min(d)
    d = [x / lo for x in d]
    if any(x.denominator != 1 for x in d):
        raise ValueError("cartan matrix is not symmetrizable over the integers")
    return tuple(int(x) for x in d)


def _positive_roots(cartan) -> list[tuple[int, ...]]:
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                pairing = sum(cartan[i][j] * beta[j] for j in range(n))
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) not in roots:
                        break
                    p += 1
                if p - pairing > 0:
                    up = tuple(b + int(k == i) for k, b in enumerate(beta))
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        frontier = nxt
    return sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r)))


@dataclass(frozen=True)
class RootSystem:
    spec: RootSystemSpec
    cartan: tuple
    positive_roots: tuple
    heights: tuple
    sym: tuple
    # (i, j) -> N with [f_i, f_j] = N f_{i+j}; only pairs whose sum is a root
    chevalley: dict = field(compare=False, repr=False)
    # (i, j) -> [e_i, f_j] as ("h", coroot coords) | ("f", k, c) | ("e", k, c)
    mixed: dict = field(compare=False, repr=False)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def N(self) -> int:
        return len(self.positive_roots)

    @property
    def rho(self) -> tuple:
        return (1,) * self.rank

    def index(self, root) -> int:
        return self._index[tuple(root)]

    @property
    def _index(self):
        return _root_index(self.positive_roots)

    def is_root(self, root) -> bool:
        return tuple(root) in self._index

    def root_weight(self, root) -> tuple:
        """Fundamental-weight coordinates of a root-lattice element."""
        n = self.rank
        return tuple(sum(self.cartan[i][j] * root[j] for j in range(n)) for i in range(n))

    def weight_to_roots(self, mu) -> tuple:
        """Simple-root coordinates (rationals) of a weight."""
        return tuple(sum(x * y for x, y in zip(row, mu)) for row in _cartan_inverse(self.cartan))

    def coroot(self, root) -> tuple:
        """beta^vee in simple-coroot coordinates."""
        db = self.root_norm(root)
        return tuple(Fraction(r * d, db) for r, d in zip(root, self.sym))

    def root_norm(self, root) -> Fraction:
        """(beta, beta)/2 in the normalisation where the shortest simple root has value 1."""
        n = self.rank
        return Fraction(sum(root[i] * self.sym[i] * self.cartan[i][j] * root[j] for i in range(n) for j in range(n)), 2)

    def pair(self, weight, root) -> Fraction:
        """<weight, root^vee> for a weight in fundamental coordinates."""
        return sum((w * c for w, c in zip(weight, self.coroot(root))), Fraction(0))

    def pair_roots(self, beta, alpha) -> Fraction:
        """<beta, alpha^vee> for two root-lattice elements."""
        return self.pair(self.root_weight(beta), alpha)

    def height(self, root) -> int:
        return sum(root)

    def simple_root(self, i: int) -> tuple:
        return tuple(int(i == j) for j in range(self.rank))

    def bracket_ff(self, i: int, j: int):
        """[f_{beta_i}, f_{beta_j}] as (k, N) or None, indices into positive_roots."""
        c = self.chevalley.get((i, j))
        if not c:
            return None
        k = self.index(tuple(a + b for a, b in zip(self.positive_roots[i], self.positive_roots[j])))
        return k, c

    def root_name(self, root) -> str:
        return root_name(self, root)

    def to_json(self) -> dict:
        roots = [list(r) for r in self.positive_roots]
        table = []
        for (i, j), c in sorted(self.chevalley.items()):
            k = self.bracket_ff(i, j)[0]
            table.append({"beta": roots[i], "gamma": roots[j], "sum": roots[k], "N": c})
        return {
            "type": str(self.spec),
            "cartan": [list(r) for r in self.cartan],
            "roots": roots,
            "names": [self.root_name(r) for r in self.positive_roots],
            "heights": list(self.heights),
            "chevalley": table,
        }


@lru_cache(maxsize=None)
def _root_index(roots):
    return {r: k for k, r in enumerate(roots)}


@lru_cache(maxsize=None)
def _cartan_inverse(cartan):
    from .linalg import inverse
    return tuple(tuple(r) for r in inverse(cartan))


def root_name(rs: RootSystem, root) -> str:
    if rs.spec.family == "G":
        letters = ("a", "b")
        parts = []
        for c, l in zip(root, letters):
            if c:
                parts.append(l if c == 1 else f"{c}{l}")
        return "+".join(parts)
    parts = []
    for i, c in enumerate(root):
        if c:
            parts.append(f"a{i + 1}" if c == 1 else f"{c}a{i + 1}")
    return "+".join(parts)


def parse_root(rs: RootSystem, name: str) -> tuple:
    """Inverse of root_name; accepts e.g. ``a1+a2``, ``2a1+a2``, ``3a+2b``."""
    coords = [0] * rs.rank
    text = name.strip().replace(" ", "")
    if not text:
        raise ValueError("empty root name")
    for part in text.split("+"):
        k = 0
        while k < len(part) and part[k].isdigit():
            k += 1
        c = int(part[:k]) if k else 1
        sym = part[k:]
        if rs.spec.family == "G" and sym in ("a", "b"):
            idx = "ab".index(sym)
        elif sym.startswith("a") and sym[1:].isdigit():
            idx = int(sym[1:]) - 1
        else:
            raise ValueError(f"cannot parse root name {name!r}")
        if not 0 <= idx < rs.rank:
            raise ValueError(f"simple root index out of range in {name!r}")
        coords[idx] += c
    root = tuple(coords)
    if not rs.is_root(root):
        raise ValueError(f"{name!r} is not a positive root of {rs.spec}")
    return root


def build_root_system(spec: RootSystemSpec | str) -> RootSystem:
    if isinstance(spec, str):
        spec = RootSystemSpec.parse(spec)
    return _build(spec)


@lru_cache(maxsize=None)
def _build(spec: RootSystemSpec) -> RootSystem:
    A = cartan_matrix(spec)
    roots = tuple(_positive_roots(A))
    cartan = tuple(tuple(r) for r in A)
    chev, mixed = _chevalley_from_adjoint(cartan, roots)
    return RootSystem(
        spec=spec,
        cartan=cartan,
        positive_roots=roots,
        heights=tuple(sum(r) for r in roots),
        sym=symmetrizer(A),
        chevalley=chev,
        mixed=mixed,
    )


def chevalley_constants(rs: RootSystem) -> dict:
    """Full table (i, j) -> N_{beta_i, beta_j} over index pairs (0 when the sum is not a root)."""
    return {(i, j): rs.chevalley.get((i, j), 0) for i in range(rs.N) for j in range(rs.N)}


# --- Chevalley basis from the adjoint module ---------------------------------

def _block_operator(V: SimpleIrrep, table, shift):
    """Assemble the weight-block matrices ``table[mu]`` into one square matrix."""
    offs = {}
    tot = 0
    for w in V.weights():
        offs[w] = tot
        tot += V.dims[w]
    M = [[Fraction(0)] * tot for _ in range(tot)]
    for mu, mat in table.items():
        tgt = tuple(a + b for a, b in zip(mu, shift))
        if tgt not in offs:
            continue
        r0, c0 = offs[tgt], offs[mu]
        for r, row in enumerate(mat):
            for c, x in enumerate(row):
                if x:
                    M[r0 + r][c0 + c] = Fraction(x)
    return M


def _commutator(X, Y):
    return mat_sub(mat_mul(X, Y), mat_mul(Y, X))


def _ratio(X, Y):
    """Scalar c with X = c Y (Y nonzero), or None."""
    c = None
    for rx, ry in zip(X, Y):
        for x, y in zip(rx, ry):
            if y:
                q = Fraction(x) / y
                if c is None:
                    c = q
                elif q != c:
                    return None
            elif x:
                return None
    return c


def root_decomposition(roots, xi):
    """(i, eta, p) with xi = alpha_i + eta, i minimal, and p the number of times
    alpha_i can still be subtracted from eta. Every non-simple root vector is
    defined as f_xi = [f_i, f_eta] / (p + 1), in every representation."""
    known = set(roots)
    n = len(xi)
    for i in range(n):
        eta = tuple(x - int(k == i) for k, x in enumerate(xi))
        if eta in known:
            break
    else:
        raise ValueError(f"{xi} is a simple root")
    p = 0
    down = list(eta)
    while True:
        down[i] -= 1
        if tuple(down) not in known:
            break
        p += 1
    return i, eta, p


def _chevalley_from_adjoint(cartan, roots):
    n = len(cartan)
    idx = {r: k for k, r in enumerate(roots)}
    theta = roots[-1]
    theta_w = tuple(sum(cartan[i][j] * theta[j] for j in range(n)) for i in range(n))
    V = SimpleIrrep(cartan, theta_w)
    simple_w = V.simple
    F = {}
    E = {}
    for i in range(n):
        a = tuple(int(i == j) for j in range(n))
        neg = tuple(-x for x in simple_w[i])
        F[a] = _block_operator(V, V.f[i], neg)
        E[a] = _block_operator(V, V.e[i], simple_w[i])
    H = [_commutator(E[tuple(int(i == j) for j in range(n))], F[tuple(int(i == j) for j in range(n))]) for i in range(n)]
    # f_xi = [f_i, f_{xi - alpha_i}] / (p + 1) with i minimal; e_xi = tau(f_xi)
    for xi in roots:
        if xi in F:
            continue
        i, eta, p = root_decomposition(roots, xi)
        a = tuple(int(k == i) for k in range(n))
        F[xi] = [[x / (p + 1) for x in row] for row in _commutator(F[a], F[eta])]
        E[xi] = [[x / (p + 1) for x in row] for row in _commutator(E[eta], E[a])]
    chev = {}
    for s, b in enumerate(roots):
        for t, g in enumerate(roots):
            tot = tuple(x + y for x, y in zip(b, g))
            if tot in idx:
                c = _ratio(_commutator(F[b], F[g]), F[tot])
                if c is None or c.denominator != 1:
                    raise ArithmeticError(f"adjoint construction failed at {b}, {g}")
                chev[(s, t)] = int(c)
    mixed = {}
    for s, b in enumerate(roots):
        for t, g in enumerate(roots):
            X = _commutator(E[b], F[g])
            if b == g:
                coeffs = _solve_cartan(X, H)
                mixed[(s, t)] = ("h", coeffs)
                continue
            d = tuple(y - x for x, y in zip(b, g))
            if d in idx:
                mixed[(s, t)] = ("f", idx[d], _int(_ratio(X, F[d])))
            elif tuple(-x for x in d) in idx:
                e = tuple(-x for x in d)
                mixed[(s, t)] = ("e", idx[e], _int(_ratio(X, E[e])))
            elif any(any(x for x in row) for row in X):
                raise ArithmeticError(f"unexpected bracket [e_{b}, f_{g}]")
    return chev, mixed


def _int(c):
    if c is None or c.denominator != 1:
        raise ArithmeticError("non-integral Chevalley constant")
    return int(c)


def _solve_cartan(X, H):
    """Coordinates of X in the span of the simple coroots H (integers)."""
    from .linalg import solve
    flat_h = [[x for row in h for x in row] for h in H]
    cols = [list(c) for c in zip(*flat_h)]
    sol = solve(cols, [x for row in X for x in row])
    if sol is None:
        raise ArithmeticError("[e_b, f_b] is not in the Cartan subalgebra")
    return tuple(_int(x) for x in sol)


# --- Weyl group and reduced words --------------------------------------------

def reflect(rs: RootSystem, i: int, beta) -> tuple:
    """s_i(beta) for a root-lattice element beta (0-based i)."""
    c = sum(rs.cartan[i][j] * beta[j] for j in range(rs.rank))
    return tuple(b - c * int(k == i) for k, b in enumerate(beta))


def is_reduced(rs: RootSystem, word: Sequence[int]) -> bool:
    try:
        roots_from_reduced_word(rs, word)
    except ValueError:
        return False
    return True


def roots_from_reduced_word(rs: RootSystem, word: Sequence[int]) -> list[tuple]:
    """beta_k = s_{i1} ... s_{i(k-1)}(alpha_{ik}); letters are 1-based."""
    out = []
    for k, letter in enumerate(word):
        if not 1 <= letter <= rs.rank:
            raise ValueError(f"letter {letter} out of range 1..{rs.rank}")
        beta = rs.simple_root(letter - 1)
        for prev in reversed(word[:k]):
            beta = reflect(rs, prev - 1, beta)
        if not all(x >= 0 for x in beta):
            raise ValueError(f"word {tuple(word)} is not reduced (fails at position {k + 1})")
        out.append(beta)
    return out


def longest_word(rs: RootSystem) -> list[int]:
    """A reduced word for w0: for type A the word 1, 21, 321, ...; otherwise a greedy descent."""
    n = rs.rank
    if rs.spec.family == "A":
        word = []
        for k in range(1, n + 1):
            word.extend(range(k, 0, -1))
        return word
    # build w0 by repeatedly appending letters that keep the word reduced
    word: list[int] = []
    while len(word) < rs.N:
        for i in range(1, n + 1):
            if is_reduced(rs, word + [i]):
                word.append(i)
                break
    return word


# --- dimension oracles ---------------------------------------------------------

def weyl_dim(rs: RootSystem, lam) -> int:
    lam = tuple(lam)
    if len(lam) != rs.rank or min(lam) < 0:
        raise ValueError(f"not a dominant weight for {rs.spec}: {lam}")
    num = Fraction(1)
    for beta in rs.positive_roots:
        lr = tuple(x + 1 for x in lam)
        num *= rs.pair(lr, beta) / rs.pair(rs.rho, beta)
    assert num.denominator == 1
    return int(num)


def _form(rs: RootSystem, mu, nu) -> Fraction:
    """(mu, nu) for weights in fundamental coordinates; (alpha_i, alpha_i) = 2 d_i."""
    x = rs.weight_to_roots(mu)
    # (alpha_i, nu) = d_i <nu, alpha_i^vee> = d_i nu_i
    return sum((xi * d * v for xi, d, v in zip(x, rs.sym, nu)), Fraction(0))


def freudenthal_multiplicity(rs: RootSystem, lam, mu) -> int:
    return _freudenthal_table(rs, tuple(lam)).get(tuple(mu), 0)


def weight_multiplicities(rs: RootSystem, lam) -> dict:
    """All weights of V(lambda) with multiplicities (Freudenthal recursion)."""
    return dict(_freudenthal_table(rs, tuple(lam)))


@lru_cache(maxsize=64)
def _freudenthal_table(rs: RootSystem, lam) -> dict:
    n = rs.rank
    rho = rs.rho
    lr = tuple(a + b for a, b in zip(lam, rho))
    norm_lr = _form(rs, lr, lr)
    root_w = [rs.root_weight(b) for b in rs.positive_roots]
    mult = {lam: 1}
    # weights grouped by depth = height of lambda - mu
    layer = [lam]
    while layer:
        cand = sorted({tuple(m - a for m, a in zip(mu, rs.root_weight(rs.simple_root(i)))) for mu in layer for i in range(n)}, reverse=True)
        nxt = []
        for mu in cand:
            if mu in mult:
                continue
            mr = tuple(a + b for a, b in zip(mu, rho))
            denom = norm_lr - _form(rs, mr, mr)
            if denom <= 0:
                continue
            s = Fraction(0)
            for bw in root_w:
                k = 1
                top = tuple(m + b for m, b in zip(mu, bw))
                while _dominated(rs, lam, top):
                    if top in mult:
                        s += _form(rs, top, bw) * mult[top]
                    k += 1
                    top = tuple(m + k * b for m, b in zip(mu, bw))
            val = 2 * s / denom
            assert val.denominator == 1
            if val:
                mult[mu] = int(val)
                nxt.append(mu)
        layer = nxt
    return mult


def _dominated(rs: RootSystem, lam, mu) -> bool:
    """lam - mu is a non-negative integral combination of simple roots."""
    diff = tuple(a - b for a, b in zip(lam, mu))
    coords = rs.weight_to_roots(diff)
    return all(c >= 0 and c.denominator == 1 for c in coords)
