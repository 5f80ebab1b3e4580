"""Exact linear algebra over the rationals.

Everything here works on plain Python lists of ``Fraction`` (or ``int``).
Nothing is pivoted by magnitude: elimination order is always the order in
which rows are supplied, which is what the essential-set computations rely on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = list
Matrix = list


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def mat_vec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v) if a and x) for row in A]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col) if a and b) for col in cols] for row in A]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[c * a for a in row] for row in A]


def zeros(r: int, c: int) -> list:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


class IncrementalEchelon:
    """Row echelon form built one vector at a time.

    ``add`` reports whether a vector is independent of everything accepted so
    far and, if it is not, its coordinates with respect to the accepted
    vectors (in acceptance order).
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[tuple[int, list, list]] = []  # (pivot col, reduced row, combination)
        self.size = 0

    def reduce(self, v: Sequence) -> tuple[list, list]:
        w = [Fraction(x) for x in v]
        if len(w) != self.dim:
            raise ValueError(f"expected vector of length {self.dim}, got {len(w)}")
        mult = [Fraction(0)] * self.size
        for piv, row, combo in self._rows:
            c = w[piv]
            if c:
                for k in range(piv, self.dim):
                    if row[k]:
                        w[k] -= c * row[k]
                for k, g in enumerate(combo):
                    if g:
                        mult[k] += c * g
        return w, mult

    def add(self, v: Sequence) -> tuple[bool, list]:
        """Insert ``v``. Returns ``(True, [])`` if it was accepted, otherwise
        ``(False, coords)`` with ``v == sum(coords[k] * accepted[k])``."""
        w, mult = self.reduce(v)
        piv = next((k for k, x in enumerate(w) if x), None)
        if piv is None:
            return False, mult
        inv = 1 / w[piv]
        row = [x * inv for x in w]
        combo = [-m * inv for m in mult] + [inv]
        self._rows = [(p, r, c + [Fraction(0)]) for p, r, c in self._rows]
        self._rows.append((piv, row, combo))
        self._rows.sort(key=lambda t: t[0])
        self.size += 1
        return True, []

    def coords(self, v: Sequence) -> list | None:
        """Coordinates of ``v`` in the accepted vectors, or None if outside the span."""
        w, mult = self.reduce(v)
        if not is_zero(w):
            return None
        return mult


def rank(rows: Iterable[Sequence]) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ech = IncrementalEchelon(len(rows[0]))
    for r in rows:
        ech.add(r)
    return ech.size


def pivot_rows(rows: Sequence[Sequence]) -> list[int]:
    """Indices of rows that are independent of all earlier rows."""
    if not rows:
        return []
    ech = IncrementalEchelon(len(rows[0]))
    return [i for i, r in enumerate(rows) if ech.add(r)[0]]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    M = [list(map(int, r)) for r in rows]
    if not M:
        return 0
    m, n = len(M), len(M[0])
    r = 0
    prev = 1
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                M[i][j] = (M[r][c] * M[i][j] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == m:
            break
    return r


def solve(A: Sequence[Sequence], b: Sequence) -> list | None:
    """A particular solution of ``A x = b`` (None if inconsistent)."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][n] for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


def inverse(A: Sequence[Sequence]) -> list:
    n = len(A)
    aug = [[Fraction(x) for x in A[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def nullspace(A: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of ``{x : A x = 0}``."""
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if m else 0)
    M = [[Fraction(x) for x in row] for row in A]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * n
        x[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -M[i][fc]
        basis.append(x)
    return basis


def fstr(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
