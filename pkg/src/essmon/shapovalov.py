"""The contravariant form on the Verma module M(lambda).

Vectors f^(m) v_lambda are paired by letting tau(f^(m)) = e_{beta_N}^(m_N) ... e_{beta_1}^(m_1)
act on f^(n) v_lambda inside M(lambda) and reading off the coefficient of
v_lambda. M(lambda) is modelled as U(n^-) itself (PBW basis), and e_beta is
pushed through one root vector at a time with the mixed Chevalley table:

    e_beta f_gamma X v = f_gamma e_beta X v + [e_beta, f_gamma] X v,

where an h-term evaluates to <lambda - wt(X), beta^vee>. No matrices of V(lambda) are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import IncrementalEchelon
from .pbw import BirationalSequence, PBWAlgebra, PBWElement
from .rootsys import RootSystem


class VermaModule:
    def __init__(self, rs: RootSystem, lam: Sequence[int]):
        self.rs = rs
        self.lam = tuple(lam)
        self.alg = PBWAlgebra(rs)
        self._e_cache: dict = {}
        self._mono_cache: dict = {}

    def e_on_mono(self, b: int, m: tuple) -> PBWElement:
        """e_{beta_b} f^(m) v_lambda as an element of U(n^-) (times v_lambda)."""
        key = (b, m)
        hit = self._e_cache.get(key)
        if hit is not None:
            return hit
        first = next((k for k, x in enumerate(m) if x), None)
        res = PBWElement()
        if first is not None:
            a = m[first]
            rest = list(m)
            rest[first] -= 1
            rest = tuple(rest)
            # f^(m) = (1/a) f_q f^(m - e_q) since q is the leftmost position
            q_root = self.alg.order[first]
            inner = self.e_on_mono(b, rest)
            if inner:
                res.iadd(self.alg.letter_times(first, inner), Fraction(1, a))
            br = self.rs.mixed.get((b, q_root))
            if br is not None:
                kind = br[0]
                if kind == "h":
                    val = self._h_coroot(br[1], rest)
                    if val:
                        res.add_term(rest, val / a)
                elif kind == "f":
                    _, k, c = br
                    res.iadd(self.alg.letter_times(self.alg.pos_of_root[k], {rest: Fraction(1)}), Fraction(c, a))
                else:
                    _, k, c = br
                    res.iadd(self.e_on_mono(k, rest), Fraction(c, a))
        self._e_cache[key] = res
        return res

    def _h_coroot(self, coroot, m) -> Fraction:
        rs = self.rs
        wt = self.alg.weight(m)
        mu = tuple(l - w for l, w in zip(self.lam, rs.root_weight(wt)))
        return sum((Fraction(c) * x for c, x in zip(coroot, mu)), Fraction(0))

    def e_on(self, b: int, X: dict) -> PBWElement:
        out = PBWElement()
        for m, c in X.items():
            out.iadd(self.e_on_mono(b, m), c)
        return out

    def e_divpow_on(self, b: int, k: int, X: dict) -> PBWElement:
        cur = PBWElement(X)
        for _ in range(k):
            cur = self.e_on(b, cur)
            if not cur:
                break
        return cur.scaled(Fraction(1, math.factorial(k)))

    def monomial(self, S: BirationalSequence, m) -> PBWElement:
        key = (S.roots, tuple(m))
        hit = self._mono_cache.get(key)
        if hit is None:
            hit = self.alg.root_word((self.rs.index(b), k) for b, k in zip(S.roots, m) if k)
            self._mono_cache[key] = hit
        return hit


def shapovalov_pairing(rs: RootSystem, lam, m, n, S: BirationalSequence, verma: VermaModule | None = None) -> Fraction:
    """<f^(m) v_lambda, f^(n) v_lambda> with <v_lambda, v_lambda> = 1."""
    if S.weight(m) != S.weight(n):
        return Fraction(0)
    V = verma or VermaModule(rs, lam)
    cur = V.monomial(S, n)
    for b, k in zip(S.roots, m):
        if k:
            cur = V.e_divpow_on(rs.index(b), k, cur)
            if not cur:
                return Fraction(0)
    return Fraction(cur.get((0,) * rs.N, 0))


@dataclass
class GramBlock:
    lam: tuple
    nu: tuple
    monomials: list
    gram: list

    def to_json(self) -> dict:
        from .linalg import fstr
        return {
            "lambda": list(self.lam),
            "nu": list(self.nu),
            "monomials": [list(m) for m in self.monomials],
            "gram": [[fstr(x) for x in row] for row in self.gram],
        }


def gram_block(rs: RootSystem, lam, block: Sequence, S: BirationalSequence, verma: VermaModule | None = None) -> GramBlock:
    V = verma or VermaModule(rs, lam)
    block = [tuple(m) for m in block]
    k = len(block)
    G = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            G[i][j] = G[j][i] = shapovalov_pairing(rs, lam, block[i], block[j], S, V)
    nu = S.weight(block[0]) if block else ()
    return GramBlock(tuple(lam), nu, block, G)


def gram_rank_pivots(rs: RootSystem, lam, block: Sequence, S: BirationalSequence, order,
                     verma: VermaModule | None = None) -> tuple[int, list]:
    """Rank and pivot rows of the Gram matrix of a weight block sorted ascending.

    A row is a pivot when it is independent of the rows before it; on V(lambda)
    the form is nondegenerate, so these are exactly the vectors f^(m) v_lambda
    not in the span of the smaller ones.
    """
    block = [tuple(m) for m in block]
    keys = [order.key(m) for m in block]
    if any(a >= b for a, b in zip(keys, keys[1:])):
        raise ValueError("block must be sorted strictly ascending under the order")
    if len({S.weight(m) for m in block}) > 1:
        raise ValueError("block mixes different weights")
    gb = gram_block(rs, lam, block, S, verma)
    ech = IncrementalEchelon(len(block))
    piv = [m for m, row in zip(block, gb.gram) if ech.add(row)[0]]
    return ech.size, piv
