"""Weight functions and the four Psi-weighted lexicographic orders on N^N.

Every order is realised by an ascending sort key, so ``m < m'`` exactly when
``order.key(m) < order.key(m')``. The variants:

    wlex      (Psi(m), m)                ties broken lexicographically
    wrlex     (Psi(m), reversed(m))      ties broken from the right
    op-wlex   (Psi(m), -m)               lex-smaller wins a tie
    op-wrlex  (Psi(m), -reversed(m))

The opposite variants need Psi(e_i) > 0 for every i.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

VARIANTS = ("wlex", "wrlex", "op-wlex", "op-wrlex")
# names used on the command line
VARIANT_ALIASES = {
    "lex": "wlex",
    "rlex": "wrlex",
    "oplex": "op-wlex",
    "oprlex": "op-wrlex",
    "wlex": "wlex",
    "wrlex": "wrlex",
    "op-wlex": "op-wlex",
    "op-wrlex": "op-wrlex",
    "op-lex": "op-wlex",
    "op-rlex": "op-wrlex",
}
PRESETS = ("zero", "homogeneous", "height", "custom", "admissible")


class Comparison(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class WeightFunction:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if any(c < 0 for c in self.coeffs):
            raise ValueError(f"weight function coefficients must be non-negative: {self.coeffs}")

    def __call__(self, m) -> int:
        return sum(c * x for c, x in zip(self.coeffs, m))

    @property
    def positive(self) -> bool:
        return all(c > 0 for c in self.coeffs)

    def __len__(self):
        return len(self.coeffs)


@dataclass(frozen=True)
class OrderSpec:
    psi: WeightFunction
    variant: str
    label: str = ""

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown order variant {self.variant!r}; expected one of {VARIANTS}")
        if self.variant.startswith("op-") and not self.psi.positive:
            raise ValueError(f"{self.variant} needs a strictly positive weight function, got {self.psi.coeffs}")

    @property
    def N(self) -> int:
        return len(self.psi)

    @property
    def opposite(self) -> bool:
        return self.variant.startswith("op-")

    @property
    def right(self) -> bool:
        return self.variant.endswith("rlex")

    def key(self, m) -> tuple:
        m = tuple(m)
        if len(m) != self.N:
            raise ValueError(f"exponent {m} has length {len(m)}, order expects {self.N}")
        tail = m[::-1] if self.right else m
        if self.opposite:
            tail = tuple(-x for x in tail)
        return (self.psi(m),) + tail

    def compare(self, m, m2) -> Comparison:
        return compare_exponents(self, m, m2)

    def sorted(self, exps):
        return sorted(exps, key=self.key)

    def minimal(self, exps):
        return min(exps, key=self.key)

    def describe(self) -> str:
        return self.label or f"{self.variant}:{','.join(map(str, self.psi.coeffs))}"


def compare_exponents(order: OrderSpec, m, m2) -> Comparison:
    if len(m) != len(m2):
        raise ValueError(f"length mismatch: {len(m)} vs {len(m2)}")
    a, b = order.key(m), order.key(m2)
    return Comparison((a > b) - (a < b))


def make_weight_function(preset: str, rs=None, S=None, custom_coeffs=None, N: int | None = None) -> WeightFunction:
    """Build Psi from a preset name.

    ``S`` is a sequence of roots (tuples in simple-root coordinates); it fixes N
    and is needed for ``height`` and ``admissible``.
    """
    if S is not None:
        N = len(S)
    if preset == "custom":
        if custom_coeffs is None:
            raise ValueError("custom weight function needs coefficients")
        coeffs = tuple(custom_coeffs)
        if N is not None and len(coeffs) != N:
            raise ValueError(f"custom weight function has {len(coeffs)} coefficients, sequence has length {N}")
        return WeightFunction(coeffs)
    if N is None:
        raise ValueError(f"preset {preset!r} needs a sequence or N")
    if preset == "zero":
        return WeightFunction((0,) * N)
    if preset == "homogeneous":
        return WeightFunction((1,) * N)
    if preset == "height":
        if S is None:
            raise ValueError("height preset needs a sequence")
        return WeightFunction(tuple(sum(b) for b in S))
    if preset == "admissible":
        # Psi(e_{i,j}) = (j - i + 1)(n - j + 1) on the root alpha_i + ... + alpha_j of sl_{n+1}
        if S is None or rs is None or rs.spec.family != "A":
            raise ValueError("admissible preset is defined for type A sequences only")
        n = rs.rank
        out = []
        for b in S:
            support = [k for k, x in enumerate(b) if x]
            i, j = support[0] + 1, support[-1] + 1
            out.append((j - i + 1) * (n - j + 1))
        return WeightFunction(tuple(out))
    raise ValueError(f"unknown weight preset {preset!r}; expected one of {PRESETS}")


def parse_order(text: str, rs=None, S=None) -> OrderSpec:
    """``<variant>:<preset>`` as in ``oplex:height``, ``rlex:homogeneous``, ``lex:custom=1,2,1``."""
    if ":" in text:
        var, preset = text.split(":", 1)
    else:
        var, preset = text, "zero"
    var = var.strip().lower()
    if var not in VARIANT_ALIASES:
        raise ValueError(f"unknown order variant {var!r}; expected one of lex, rlex, oplex, oprlex")
    coeffs = None
    if preset.startswith("custom"):
        if "=" not in preset:
            raise ValueError("custom weight function needs values, e.g. lex:custom=1,2,1")
        coeffs = [int(x) for x in preset.split("=", 1)[1].split(",") if x.strip()]
        preset = "custom"
    psi = make_weight_function(preset, rs=rs, S=S, custom_coeffs=coeffs)
    return OrderSpec(psi, VARIANT_ALIASES[var], label=text)


@dataclass
class OrderCheck:
    ok: bool
    samples: int
    witness: tuple | None = None
    reason: str = ""


def validate_monomial_order(order: OrderSpec, sample_count: int = 10000, seed: int = 42,
                            comparator: Callable | None = None, max_entry: int = 4) -> OrderCheck:
    """Randomised check of m > m' => m + m'' > m' + m'' > m' (m'' != 0).

    ``comparator(a, b)`` defaults to the order's own comparison and returns a
    Comparison; pass a different one to test a corrupted order.
    """
    cmp = comparator or (lambda a, b: compare_exponents(order, a, b))
    rng = random.Random(seed)
    N = order.N

    def draw():
        return tuple(rng.randint(0, max_entry) for _ in range(N))

    for t in range(sample_count):
        m, m2, m3 = draw(), draw(), draw()
        if not any(m3):
            continue
        c = cmp(m, m2)
        if c == Comparison.EQUAL:
            if m != m2:
                return OrderCheck(False, t + 1, (m, m2, m3), "distinct exponents compare equal")
            continue
        if c == Comparison.LESS:
            m, m2 = m2, m
        a = tuple(x + y for x, y in zip(m, m3))
        b = tuple(x + y for x, y in zip(m2, m3))
        if cmp(a, b) != Comparison.GREATER or cmp(b, m2) != Comparison.GREATER:
            return OrderCheck(False, t + 1, (m, m2, m3), "translation invariance fails")
    return OrderCheck(True, sample_count)


# --- the special linear form ---------------------------------------------------

def e1_value(rs, lam) -> int:
    """<lam, 2 rho^vee> = sum of <lam, beta^vee> over positive roots."""
    v = sum((rs.pair(lam, b) for b in rs.positive_roots), Fraction(0))
    assert v.denominator == 1
    return int(v)


@dataclass(frozen=True)
class LinearForm:
    """e(lam, m) = A e1(lam) - B Psi(m) + sign * e2(m), e2(m) = sum C^{p_i} m_i."""

    A: int
    B: int
    C: int
    sign: int
    powers: tuple
    psi: WeightFunction
    e1_coeffs: tuple  # e1 on fundamental weights

    def e2(self, m) -> int:
        return sum(self.C ** p * x for p, x in zip(self.powers, m))

    def __call__(self, lam, m) -> int:
        e1 = sum(c * x for c, x in zip(self.e1_coeffs, lam))
        return self.A * e1 - self.B * self.psi(m) + self.sign * self.e2(m)

    def coefficients(self) -> dict:
        """Integer coefficients on (lambda coordinates, m coordinates)."""
        lam = [self.A * c for c in self.e1_coeffs]
        m = [-self.B * p + self.sign * self.C ** q for p, q in zip(self.psi.coeffs, self.powers)]
        return {"lambda": lam, "m": m}


def dominates(rs, lam, mu) -> bool:
    """lam - mu is a nonzero non-negative integral combination of simple roots."""
    if tuple(lam) == tuple(mu):
        return False
    diff = tuple(a - b for a, b in zip(lam, mu))
    coords = rs.weight_to_roots(diff)
    return all(c >= 0 and c.denominator == 1 for c in coords)


def alg_greater(rs, order: OrderSpec, a, b) -> bool:
    """(lam, m) >_alg (mu, m'): lam > mu in dominance, or lam = mu and m < m'."""
    (lam, m), (mu, m2) = a, b
    if dominates(rs, lam, mu):
        return True
    return tuple(lam) == tuple(mu) and order.key(m) < order.key(m2)


def special_linear_form(rs, generators: Sequence, M: Sequence, order: OrderSpec) -> LinearForm:
    """Constructive linear form taking positive integral values on the generators
    and strictly reversing >_alg on the finite set M."""
    gens = [(tuple(l), tuple(m)) for l, m in generators]
    pts = [(tuple(l), tuple(m)) for l, m in M]
    for lam, m in gens:
        if not any(lam) and any(m):
            raise ValueError(f"exceptional character among generators: {(lam, m)}")
    N = order.N
    maxc = max([x for _, m in gens + pts for x in m], default=0)
    C = maxc + 1
    powers = tuple(i for i in range(N)) if order.right else tuple(N - 1 - i for i in range(N))
    sign = 1 if order.opposite else -1
    e1c = tuple(e1_value(rs, tuple(int(i == j) for j in range(rs.rank))) for i in range(rs.rank))

    pairs = [(a, b) for a in pts for b in pts if alg_greater(rs, order, a, b)]

    def form(A, B):
        return LinearForm(A, B, C, sign, powers, order.psi, e1c)

    def ok_ties(B):
        f = form(0, B)
        return all(f(*a) > f(*b) for a, b in pairs if a[0] == b[0])

    B = 1
    while not ok_ties(B):
        B *= 2
    f0 = form(0, B)
    A0 = max([f0.e2(c) + B * order.psi(c) for _, c in gens], default=0) + 1
    A = A0
    while True:
        f = form(A, B)
        good = all(f(*a) > f(*b) for a, b in pairs)
        good = good and all(f(l, m) >= 1 for l, m in gens if any(l))
        if good:
            return f
        A *= 2
