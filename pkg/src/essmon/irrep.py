"""Irreducible highest-weight modules built weight space by weight space.

A vector of weight mu != lambda in V(lambda) is determined by its images
under the raising operators e_1..e_n (a nonzero vector killed by every e_i
would be a second highest weight vector). So each weight space is realised
inside the direct sum of the weight spaces one step above it, and the basis
is picked greedily from the vectors f_i b, b running over the basis one step
above. Only the Cartan matrix is needed.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import IncrementalEchelon

Weight = tuple


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class SimpleIrrep:
    """Matrices of the Chevalley generators e_i, f_i on V(highest).

    Weights are integer tuples in fundamental-weight coordinates; ``cartan[i][j]``
    is <alpha_j, alpha_i^vee>. ``f[i][mu]`` maps the mu weight space to the
    ``mu - alpha_i`` weight space (a list of rows), ``e[i][mu]`` maps it to
    ``mu + alpha_i``.
    """

    def __init__(self, cartan, highest):
        self.cartan = [list(r) for r in cartan]
        self.rank = n = len(cartan)
        self.highest = tuple(int(x) for x in highest)
        if len(self.highest) != n or min(self.highest, default=0) < 0:
            raise ValueError(f"not a dominant weight: {highest}")
        self.simple = [tuple(self.cartan[j][i] for j in range(n)) for i in range(n)]
        self.dims: dict[Weight, int] = {self.highest: 1}
        self.depth: dict[Weight, int] = {self.highest: 0}
        self.e = [dict() for _ in range(n)]
        self.f = [dict() for _ in range(n)]
        self.layers: list[list[Weight]] = [[self.highest]]
        self._build()

    def _build(self):
        n = self.rank
        prev = [self.highest]
        d = 0
        while prev:
            d += 1
            cand_weights = sorted({_sub(nu, self.simple[i]) for nu in prev for i in range(n)}, reverse=True)
            layer = []
            for mu in cand_weights:
                ups = [j for j in range(n) if _add(mu, self.simple[j]) in self.dims]
                offsets = {}
                total = 0
                for j in ups:
                    offsets[j] = total
                    total += self.dims[_add(mu, self.simple[j])]
                ech = IncrementalEchelon(total)
                accepted = []  # (i, b)
                placements = []  # (i, b, accepted?, coords or index)
                for i in ups:
                    nu = _add(mu, self.simple[i])
                    for b in range(self.dims[nu]):
                        rep = self._e_image_of_f(i, nu, b, mu, ups, offsets, total)
                        ok, coords = ech.add(rep)
                        if ok:
                            accepted.append((i, b, rep))
                            placements.append((i, b, True, len(accepted) - 1))
                        else:
                            placements.append((i, b, False, coords))
                dim = len(accepted)
                if dim == 0:
                    continue
                self.dims[mu] = dim
                self.depth[mu] = d
                layer.append(mu)
                # raising operators out of mu: read off the e-images of the basis
                for j in ups:
                    up = _add(mu, self.simple[j])
                    dj = self.dims[up]
                    off = offsets[j]
                    mat = [[accepted[k][2][off + r] for k in range(dim)] for r in range(dj)]
                    self.e[j][mu] = mat
                # lowering operators into mu
                for i in ups:
                    nu = _add(mu, self.simple[i])
                    self.f[i][nu] = [[Fraction(0)] * self.dims[nu] for _ in range(dim)]
                for i, b, ok, c in placements:
                    nu = _add(mu, self.simple[i])
                    col = self.f[i][nu]
                    if ok:
                        col[c][b] = Fraction(1)
                    else:
                        # coords only cover the vectors accepted before this one
                        for k, x in enumerate(c):
                            col[k][b] = x
            if layer:
                self.layers.append(layer)
            prev = layer
        for i in range(n):
            for mu in self.dims:
                if _sub(mu, self.simple[i]) not in self.dims:
                    self.f[i].pop(mu, None)

    def _e_image_of_f(self, i, nu, b, mu, ups, offsets, total):
        """Concatenated vector (e_j f_i b)_j for b the b-th basis vector of V_nu."""
        rep = [Fraction(0)] * total
        for j in ups:
            off = offsets[j]
            # e_j f_i b = f_i e_j b + delta_ij <nu, alpha_i^vee> b
            top = _add(nu, self.simple[j])
            if top in self.dims:
                ej = self.e[j][nu]
                fi = self.f[i].get(top)
                if fi is not None:
                    col = [row[b] for row in ej]
                    for r, frow in enumerate(fi):
                        s = sum(a * x for a, x in zip(frow, col) if a and x)
                        if s:
                            rep[off + r] += s
            if i == j and nu[i]:
                rep[off + b] += nu[i]
        return rep

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def weights(self) -> list[Weight]:
        return [w for layer in self.layers for w in layer]

    def apply_f(self, i: int, mu: Weight, vec):
        """f_i applied to a vector of weight mu; returns (new weight, vector)."""
        target = _sub(mu, self.simple[i])
        mat = self.f[i].get(mu)
        if mat is None or target not in self.dims:
            return target, None
        return target, [sum(a * x for a, x in zip(row, vec) if a and x) for row in mat]

    def apply_e(self, i: int, mu: Weight, vec):
        target = _add(mu, self.simple[i])
        mat = self.e[i].get(mu)
        if mat is None:
            return target, None
        return target, [sum(a * x for a, x in zip(row, vec) if a and x) for row in mat]
