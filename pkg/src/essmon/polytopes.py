"""Explicit cones and polytopes, lattice points, and exact convex hulls.

An ``HPolyhedron`` is a list of rows a.x <= b with rational entries. Lattice
points are enumerated coordinate by coordinate with interval bounds. The
convex hull of a finite point set is computed by the double description
method on the cone of valid inequalities, in exact arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import IncrementalEchelon, inverse, nullspace, rank


class UnboundedError(ValueError):
    def __init__(self, ray):
        self.ray = tuple(ray)
        super().__init__(f"polyhedron is unbounded along the ray {self.ray}")


@dataclass
class HPolyhedron:
    dim: int
    rows: list = field(default_factory=list)  # (a tuple, b)
    labels: list = field(default_factory=list)

    def add(self, a, b, label: str = "") -> "HPolyhedron":
        a = tuple(Fraction(x) for x in a)
        if len(a) != self.dim:
            raise ValueError(f"row of length {len(a)} in a polyhedron of dimension {self.dim}")
        self.rows.append((a, Fraction(b)))
        self.labels.append(label)
        return self

    def add_nonnegativity(self) -> "HPolyhedron":
        for k in range(self.dim):
            self.add([-int(j == k) for j in range(self.dim)], 0, f"nonneg:{k + 1}")
        return self

    def copy(self) -> "HPolyhedron":
        return HPolyhedron(self.dim, list(self.rows), list(self.labels))

    def intersect(self, other: "HPolyhedron") -> "HPolyhedron":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return HPolyhedron(self.dim, self.rows + other.rows, self.labels + other.labels)

    def contains(self, x) -> bool:
        return all(sum(a * v for a, v in zip(row, x)) <= b for row, b in self.rows)

    def violated(self, x) -> list[str]:
        return [lab for (row, b), lab in zip(self.rows, self.labels) if sum(a * v for a, v in zip(row, x)) > b]

    def permuted(self, perm: Sequence[int]) -> "HPolyhedron":
        """Polyhedron in new coordinates y with y[perm[k]] = x[k]."""
        out = HPolyhedron(self.dim)
        for (a, b), lab in zip(self.rows, self.labels):
            na = [Fraction(0)] * self.dim
            for k, c in enumerate(a):
                na[perm[k]] = c
            out.add(na, b, lab)
        return out

    def to_json(self) -> dict:
        from .linalg import fstr
        return {
            "dim": self.dim,
            "inequalities": [{"a": [fstr(x) for x in a], "b": fstr(b), "label": lab}
                             for (a, b), lab in zip(self.rows, self.labels)],
        }


# --- Dyck paths ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DyckPath:
    """A path of positive roots; ``cells`` are the (row, column) labels alpha_{p,q}."""

    cells: tuple
    roots: tuple
    rhs: tuple  # simple-root indices (0-based) whose x-coordinates bound the path

    def label(self) -> str:
        return "dyck:" + "->".join(f"{p},{q}" for p, q in self.cells)


def _type_a_root(n, p, q):
    return tuple(int(p <= k + 1 <= q) for k in range(n))


def dyck_paths_type_a(n: int) -> list[DyckPath]:
    """All Dyck paths for sl_{n+1}: from alpha_{i,i} to alpha_{j,j}, steps (p,q) -> (p+1,q) | (p,q+1)."""
    out = []

    def rec(path):
        p, q = path[-1]
        if p == q:
            i = path[0][0]
            out.append(DyckPath(tuple(path), tuple(_type_a_root(n, a, b) for a, b in path), tuple(range(i - 1, q))))
        for np_, nq in ((p + 1, q), (p, q + 1)):
            if np_ <= nq <= n:
                rec(path + [(np_, nq)])

    for i in range(1, n + 1):
        rec([(i, i)])
    return sorted(set(out), key=lambda d: (d.cells[0], len(d.cells), d.cells))


def _type_c_root(n, r, q):
    """alpha_{r,q} for the alphabet 1..n, n-1bar..1bar encoded as 1..2n-1."""
    if q <= n:
        return tuple(int(r <= k + 1 <= q) for k in range(n))
    j = 2 * n - q
    return tuple(int(r <= k + 1 <= n) + int(j <= k + 1 <= n - 1) for k in range(n))


def dyck_paths_type_c(n: int) -> list[DyckPath]:
    """Symplectic Dyck paths: start at a simple root, end at a simple root alpha_j
    (bound x_i + ... + x_j) or at alpha_{j, jbar} (bound x_i + ... + x_n)."""
    out = []

    def valid(r, q):
        return 1 <= r <= n and r <= q <= 2 * n - r

    def rec(path):
        r, q = path[-1]
        i = path[0][0]
        roots = tuple(_type_c_root(n, a, b) for a, b in path)
        if r == q:
            out.append(DyckPath(tuple(path), roots, tuple(range(i - 1, r))))
        if q == 2 * n - r and q != r:
            out.append(DyckPath(tuple(path), roots, tuple(range(i - 1, n))))
        for nr, nq in ((r, q + 1), (r + 1, q)):
            if valid(nr, nq):
                rec(path + [(nr, nq)])

    for i in range(1, n + 1):
        rec([(i, i)])
    return sorted(set(out), key=lambda d: (d.cells[0], len(d.cells), d.cells, d.rhs))


def fflv_polytope(rs, lam, S=None) -> HPolyhedron:
    """The Dyck-path polytope at lambda, coordinates indexed by the positions of S
    (default: the good ordering)."""
    from .pbw import good_ordering
    fam, n = rs.spec.family, rs.rank
    if fam == "A":
        paths = dyck_paths_type_a(n)
    elif fam == "C":
        paths = dyck_paths_type_c(n)
    else:
        raise ValueError(f"Dyck-path polytopes are defined for types A and C, not {rs.spec}")
    S = S or good_ordering(rs)
    pos = {b: k for k, b in enumerate(S.roots)}
    N = S.N
    P = HPolyhedron(N)
    for d in paths:
        a = [0] * N
        for b in d.roots:
            a[pos[b]] += 1
        P.add(a, sum(lam[k] for k in d.rhs), d.label())
    P.add_nonnegativity()
    return P


def gt_cone(n: int) -> HPolyhedron:
    """Chain cone for sl_{n+1} on (p11, p22, p21, ..., pnn, ..., pn1): p_kk >= ... >= p_k1 >= 0."""
    N = n * (n + 1) // 2
    P = HPolyhedron(N)
    coords = [(k, j) for k in range(1, n + 1) for j in range(k, 0, -1)]
    where = {c: t for t, c in enumerate(coords)}
    for k in range(1, n + 1):
        for j in range(k, 1, -1):
            a = [0] * N
            a[where[(k, j)]] = -1
            a[where[(k, j - 1)]] = 1
            P.add(a, 0, f"chain:p{k}{j}>=p{k}{j - 1}")
    P.add_nonnegativity()
    return P


def gt_word(n: int) -> list[int]:
    """The reduced word 1, 21, 321, ..., n...1 for sl_{n+1}."""
    return [j for k in range(1, n + 1) for j in range(k, 0, -1)]


def string_weight_truncation(cone: HPolyhedron, rs, word: Sequence[int], lam) -> HPolyhedron:
    """Append m_k <= <lam, alpha_{i_k}^vee> - sum_{l > k} <alpha_{i_l}, alpha_{i_k}^vee> m_l."""
    N = len(word)
    if N != rs.N:
        raise ValueError(f"word has length {N}, expected {rs.N}")
    if cone.dim != N:
        raise ValueError("cone dimension does not match the word")
    P = cone.copy()
    for k, ik in enumerate(word):
        a = [0] * N
        a[k] = 1
        for l in range(k + 1, N):
            a[l] = rs.cartan[ik - 1][word[l] - 1]
        P.add(a, lam[ik - 1], f"weight:k={k + 1}")
    return P


def sp4_polytope(l1: int, l2: int) -> HPolyhedron:
    P = HPolyhedron(4)
    P.add_nonnegativity()
    P.add([1, 0, 0, 0], l1, "x1<=l1")
    P.add([0, 0, 0, 1], l2, "x4<=l2")
    P.add([2, 1, 2, 2], 2 * (l1 + l2), "2x1+x2+2x3+2x4<=2(l1+l2)")
    P.add([1, 1, 1, 2], l1 + 2 * l2, "x1+x2+x3+2x4<=l1+2l2")
    return P


# --- lattice points ------------------------------------------------------------------------

def _propagate_bounds(P: HPolyhedron):
    d = P.dim
    lo: list = [None] * d
    hi: list = [None] * d
    changed = True
    rounds = 0
    while changed and rounds < 4 * d + 4:
        changed = False
        rounds += 1
        for a, b in P.rows:
            for k in range(d):
                if not a[k]:
                    continue
                rest = Fraction(0)
                ok = True
                for j in range(d):
                    if j == k or not a[j]:
                        continue
                    bound = lo[j] if a[j] > 0 else hi[j]
                    if bound is None:
                        ok = False
                        break
                    rest += a[j] * bound
                if not ok:
                    continue
                val = (b - rest) / a[k]
                if a[k] > 0:
                    v = math.floor(val)
                    if hi[k] is None or v < hi[k]:
                        hi[k] = v
                        changed = True
                else:
                    v = math.ceil(val)
                    if lo[k] is None or v > lo[k]:
                        lo[k] = v
                        changed = True
    return lo, hi


def _fm_bounds(P: HPolyhedron, k: int):
    """Exact bounds on x_k by Fourier-Motzkin elimination of all other coordinates."""
    rows = [(list(a), b) for a, b in P.rows]
    for j in range(P.dim):
        if j == k:
            continue
        pos = [(a, b) for a, b in rows if a[j] > 0]
        neg = [(a, b) for a, b in rows if a[j] < 0]
        new = [(a, b) for a, b in rows if a[j] == 0]
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = ap[j], -an[j]
                a = [cn * x + cp * y for x, y in zip(ap, an)]
                new.append((a, cn * bp + cp * bn))
        rows = _dedupe(new)
    lo = hi = None
    for a, b in rows:
        if a[k] > 0:
            v = math.floor(b / a[k])
            hi = v if hi is None else min(hi, v)
        elif a[k] < 0:
            v = math.ceil(b / a[k])
            lo = v if lo is None else max(lo, v)
        elif b < 0:
            return 1, 0  # infeasible
    return lo, hi


def _dedupe(rows):
    seen = {}
    for a, b in rows:
        g = 0
        for x in list(a) + [b]:
            g = math.gcd(g, Fraction(x).numerator)
        if g == 0:
            key = (tuple(a), b)
        else:
            key = (tuple(Fraction(x) / g for x in a), Fraction(b) / g)
        seen[key] = None
    return [(list(a), b) for a, b in seen]


def bounding_box(P: HPolyhedron) -> list[tuple[int, int]]:
    lo, hi = _propagate_bounds(P)
    for k in range(P.dim):
        if lo[k] is None or hi[k] is None:
            ray = [int(j == k) for j in range(P.dim)] if hi[k] is None else [-int(j == k) for j in range(P.dim)]
            if all(sum(a * r for a, r in zip(row, ray)) <= 0 for row, _ in P.rows):
                raise UnboundedError(ray)
            flo, fhi = _fm_bounds(P, k)
            lo[k] = flo if lo[k] is None else lo[k]
            hi[k] = fhi if hi[k] is None else hi[k]
            if lo[k] is None or hi[k] is None:
                raise UnboundedError(ray)
    return list(zip(lo, hi))


def lattice_points(P: HPolyhedron, box: Sequence[tuple[int, int]] | None = None) -> list[tuple]:
    """All integer points of P, sorted lexicographically."""
    d = P.dim
    if box is None:
        box = bounding_box(P)
    box = [(int(a), int(b)) for a, b in box]
    if any(a > b for a, b in box):
        return []
    out = []
    x = [0] * d
    rows = P.rows

    def rec(k):
        if k == d:
            if P.contains(x):
                out.append(tuple(x))
            return
        lo, hi = box[k]
        for a, b in rows:
            if not a[k]:
                continue
            rest = b
            for j in range(k):
                if a[j]:
                    rest -= a[j] * x[j]
            for j in range(k + 1, d):
                if a[j] > 0:
                    rest -= a[j] * box[j][0]
                elif a[j] < 0:
                    rest -= a[j] * box[j][1]
            v = rest / a[k]
            if a[k] > 0:
                hi = min(hi, math.floor(v))
            else:
                lo = max(lo, math.ceil(v))
        for v in range(lo, hi + 1):
            x[k] = v
            rec(k + 1)
        x[k] = 0

    rec(0)
    return sorted(out)


# --- exact convex hull ----------------------------------------------------------------------

@dataclass
class Hull:
    dim: int  # ambient dimension
    affine_dim: int
    polyhedron: HPolyhedron  # facets plus affine-hull equalities, in ambient coordinates
    vertices: list


def convex_hull(points: Iterable[Sequence[int]]) -> Hull:
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise ValueError("convex hull of the empty set")
    D = len(pts[0])
    p0 = pts[0]
    diffs = [[Fraction(a - b) for a, b in zip(p, p0)] for p in pts[1:]]
    P = HPolyhedron(D)
    # affine hull equalities
    normals = nullspace(diffs, D) if diffs else [[Fraction(int(i == j)) for j in range(D)] for i in range(D)]
    for nrm in normals:
        c = sum(a * b for a, b in zip(nrm, p0))
        P.add(nrm, c, "affine")
        P.add([-x for x in nrm], -c, "affine")
    # coordinates that parametrise the affine hull
    ech = IncrementalEchelon(len(pts) - 1 if diffs else 0)
    cols = []
    if diffs:
        for j in range(D):
            col = [row[j] for row in diffs]
            if ech.add(col)[0]:
                cols.append(j)
    d = len(cols)
    if d == 0:
        return Hull(D, 0, P, [p0])
    proj = [tuple(p[j] for j in cols) for p in pts]
    # drop obvious non-vertices: p is the midpoint of q and 2p - q
    pset = set(proj)
    cand = [p for p in proj if not any(q != p and tuple(2 * a - b for a, b in zip(p, q)) in pset for q in proj)]
    facets = _dd_facets(cand, d)
    lift = _lift_map(pts, cols, D)
    for a, b in facets:
        # a . y <= b on projected coordinates y = x[cols]; rewrite in x (the equalities make this exact)
        full = [Fraction(0)] * D
        for t, j in enumerate(cols):
            full[j] = a[t]
        P.add(full, b, "facet")
    verts = sorted(lift[v] for v in cand if _is_vertex(v, facets))
    return Hull(D, d, P, verts)


def _lift_map(pts, cols, D):
    return {tuple(p[j] for j in cols): p for p in pts}


def _is_vertex(v, facets) -> bool:
    tight = [a for a, b in facets if sum(x * y for x, y in zip(a, v)) == b]
    return rank(tight) == len(v) if tight else False


def _dd_facets(points, d):
    """Facets a.y <= b of conv(points) (full-dimensional in R^d) by double description.

    Valid inequalities b - a.y >= 0 are the cone {(b, -a) : (1, p).(b, -a) >= 0};
    its extreme rays are the facets.
    """
    M = [[Fraction(1)] + [Fraction(x) for x in p] for p in points]
    # initial simplex of constraints
    ech = IncrementalEchelon(d + 1)
    init = []
    for i, row in enumerate(M):
        if ech.add(row)[0]:
            init.append(i)
        if len(init) == d + 1:
            break
    if len(init) < d + 1:
        raise ValueError("points are not full-dimensional in the chosen coordinates")
    B = inverse([M[i] for i in init])
    rays = [[B[r][c] for r in range(d + 1)] for c in range(d + 1)]  # columns: M0 y = e_c
    active = list(init)
    for i in range(len(M)):
        if i in init:
            continue
        row = M[i]
        vals = [sum(a * y for a, y in zip(row, r)) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        if not neg:
            active.append(i)
            continue
        zsets = [frozenset(j for j in active if sum(a * y for a, y in zip(M[j], r)) == 0) for r in rays]
        new = []
        for p in pos:
            for n in neg:
                common = zsets[p] & zsets[n]
                if len(common) < d - 1:
                    continue
                if rank([M[j] for j in common]) != d - 1:
                    continue
                # combinatorial adjacency: no other ray has a superset of zeros
                if any(k not in (p, n) and common <= zsets[k] for k in range(len(rays))):
                    continue
                vp, vn = vals[p], vals[n]
                r = [vp * y2 - vn * y1 for y1, y2 in zip(rays[p], rays[n])]
                new.append(_normalise(r))
        rays = [rays[k] for k in pos + zer] + new
        active.append(i)
    out = []
    for r in rays:
        r = _normalise(r)
        b, a = r[0], [-x for x in r[1:]]
        out.append((tuple(a), b))
    return sorted(set(out))


def _normalise(r):
    """Scale a ray to a primitive integer vector."""
    den = 1
    for x in r:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in r]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [Fraction(x // g) for x in ints] if g else [Fraction(x) for x in ints]


@dataclass
class HullReport:
    points: int
    hull_points: int
    difference: list
    facets: int
    affine_dim: int

    @property
    def saturated(self) -> bool:
        return not self.difference

    def to_json(self) -> dict:
        return {"points": self.points, "hull_points": self.hull_points, "difference": [list(x) for x in self.difference],
                "facets": self.facets, "affine_dim": self.affine_dim}


def empirical_hull_report(es_or_points) -> HullReport:
    """Lattice points of conv(es(lambda)) that are not in es(lambda)."""
    pts = set(es_or_points.as_set() if hasattr(es_or_points, "as_set") else (tuple(p) for p in es_or_points))
    H = convex_hull(pts)
    box = [(min(p[k] for p in pts), max(p[k] for p in pts)) for k in range(H.dim)]
    inside = lattice_points(H.polyhedron, box)
    diff = sorted(set(inside) - pts)
    nf = sum(1 for lab in H.polyhedron.labels if lab == "facet")
    return HullReport(len(pts), len(inside), diff, nf, H.affine_dim)


# --- set comparison ---------------------------------------------------------------------------

@dataclass
class SetComparison:
    only_a: list
    only_b: list

    @property
    def equal(self) -> bool:
        return not self.only_a and not self.only_b

    def to_json(self) -> dict:
        return {"equal": self.equal, "only_a": [list(x) for x in self.only_a], "only_b": [list(x) for x in self.only_b]}


def compare_sets(A, B) -> SetComparison:
    A = {tuple(x) for x in A}
    B = {tuple(x) for x in B}
    dims = {len(x) for x in A | B}
    if len(dims) > 1:
        raise ValueError(f"sets live in different dimensions: {sorted(dims)}")
    return SetComparison(sorted(A - B), sorted(B - A))


def find_permutation(A, B) -> tuple | None:
    """A coordinate permutation perm with {x permuted : x in A} = B, x -> y, y[perm[k]] = x[k]."""
    A = [tuple(x) for x in A]
    B = {tuple(x) for x in B}
    if len(A) != len(B):
        return None
    d = len(A[0]) if A else 0
    for perm in itertools.permutations(range(d)):
        img = set()
        for x in A:
            y = [0] * d
            for k, v in enumerate(x):
                y[perm[k]] = v
            img.add(tuple(y))
        if img == B:
            return perm
    return None
