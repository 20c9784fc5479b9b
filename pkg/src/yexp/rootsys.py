"""Root-system data for the classical families A/B/C/D.

Inner products are normalized so that long roots have squared length 2.
Coordinates are exact: every vector is a tuple of Fractions in the
epsilon basis, and for type C the whole system carries a global scale
factor 1/sqrt(2) that enters pairings only through its square, so all
pairings stay rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

Vector = Tuple[Fraction, ...]

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}


@dataclass(frozen=True, order=True)
class DynkinType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _MIN_RANK:
            raise ValueError(f"unknown family {self.family!r}: expected one of A, B, C, D")
        lo = _MIN_RANK[self.family]
        if not isinstance(self.rank, int) or self.rank < lo:
            raise ValueError(f"rank {self.rank!r} invalid for family {self.family}: need an integer >= {lo}")

    def __str__(self):
        return f"{self.family}{self.rank}"


def pairing(v: Vector, w: Vector):
    """Euclidean pairing in epsilon coordinates, <e_i, e_j> = delta_ij."""
    if len(v) != len(w):
        raise ValueError(f"dimension mismatch: {len(v)} vs {len(w)}")
    return sum(a * b for a, b in zip(v, w))


@dataclass(frozen=True)
class Root:
    vec: Vector
    long: bool
    positive: bool


@dataclass(frozen=True)
class RootSystem:
    type: DynkinType
    dim: int
    roots: Tuple[Root, ...]
    simple_roots: Tuple[Vector, ...]
    rho: Vector
    fundamental_weights: Tuple[Vector, ...]
    cartan: Tuple[Tuple[int, ...], ...]
    t_i: Tuple[int, ...]
    t_group: int
    h_dual: int
    scale2: Fraction  # actual pairing = coordinate dot product * scale2

    def pairing(self, v: Vector, w: Vector) -> Fraction:
        return pairing(v, w) * self.scale2

    @property
    def positive_roots(self):
        return tuple(r for r in self.roots if r.positive)

    @property
    def long_roots(self):
        return tuple(r for r in self.roots if r.long)

    @property
    def short_roots(self):
        return tuple(r for r in self.roots if not r.long)


def _unit(dim, i, c=Fraction(1)):
    v = [Fraction(0)] * dim
    v[i] = c
    return tuple(v)


def _add(v, w):
    return tuple(a + b for a, b in zip(v, w))


def _neg(v):
    return tuple(-a for a in v)


def _scale(c, v):
    return tuple(c * a for a in v)


def _positive_roots(dt: DynkinType):
    """(vector, long) pairs for the positive roots, in coordinate units."""
    n = dt.rank
    out = []
    if dt.family == "A":
        dim = n + 1
        for i in range(dim):
            for j in range(i + 1, dim):
                out.append((_add(_unit(dim, i), _neg(_unit(dim, j))), True))
    elif dt.family == "B":
        for i in range(n):
            for j in range(i + 1, n):
                out.append((_add(_unit(n, i), _neg(_unit(n, j))), True))
                out.append((_add(_unit(n, i), _unit(n, j)), True))
        for i in range(n):
            out.append((_unit(n, i), False))
    elif dt.family == "C":
        # coordinate units carry a global 1/sqrt(2); long roots are +-sqrt(2) e_i = 2 e_i in units
        for i in range(n):
            for j in range(i + 1, n):
                out.append((_add(_unit(n, i), _neg(_unit(n, j))), False))
                out.append((_add(_unit(n, i), _unit(n, j)), False))
        for i in range(n):
            out.append((_unit(n, i, Fraction(2)), True))
    else:  # D
        for i in range(n):
            for j in range(i + 1, n):
                out.append((_add(_unit(n, i), _neg(_unit(n, j))), True))
                out.append((_add(_unit(n, i), _unit(n, j)), True))
    return out


def _simple_roots(dt: DynkinType):
    n = dt.rank
    if dt.family == "A":
        dim = n + 1
        return tuple(_add(_unit(dim, i), _neg(_unit(dim, i + 1))) for i in range(n))
    if dt.family == "B":
        alphas = [_add(_unit(n, i), _neg(_unit(n, i + 1))) for i in range(n - 1)]
        alphas.append(_unit(n, n - 1))
        return tuple(alphas)
    if dt.family == "C":
        alphas = [_add(_unit(n, i), _neg(_unit(n, i + 1))) for i in range(n - 1)]
        alphas.append(_unit(n, n - 1, Fraction(2)))
        return tuple(alphas)
    alphas = [_add(_unit(n, i), _neg(_unit(n, i + 1))) for i in range(n - 1)]
    alphas.append(_add(_unit(n, n - 2), _unit(n, n - 1)))
    return tuple(alphas)


def _solve_exact(mat, rhs_cols):
    """Gaussian elimination over Fractions; returns matrix X with mat @ X = rhs_cols."""
    n = len(mat)
    aug = [list(row) + list(rhs) for row, rhs in zip(mat, rhs_cols)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def build_root_system(dt: DynkinType) -> RootSystem:
    """Construct the full root system with exact Cartan data."""
    scale2 = Fraction(1, 2) if dt.family == "C" else Fraction(1)
    pos = _positive_roots(dt)
    roots = tuple(
        [Root(v, lng, True) for v, lng in pos] + [Root(_neg(v), lng, False) for v, lng in pos]
    )
    simple = _simple_roots(dt)
    n = dt.rank
    dim = len(simple[0])

    def pair(v, w):
        return pairing(v, w) * scale2

    for v, lng in pos:
        sq = pair(v, v)
        assert sq == (2 if lng else 1), (dt, v, sq)

    cartan = tuple(
        tuple(int(2 * pair(a, b) / pair(a, a)) for b in simple) for a in simple
    )
    t_i = tuple(int(2 / pair(a, a)) for a in simple)
    t_group = 2 if dt.family in ("B", "C") else 1

    rho = tuple(sum(v[k] for v, _ in pos) / 2 for k in range(dim))

    # fundamental weights: varpi_i = sum_k (C^-1)_{k,i} alpha_k
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    cfrac = [[Fraction(c) for c in row] for row in cartan]
    cinv = _solve_exact(cfrac, ident)
    weights = []
    for i in range(n):
        w = tuple(sum(cinv[k][i] * simple[k][d] for k in range(n)) for d in range(dim))
        weights.append(w)

    theta = max((v for v, lng in pos if lng), key=lambda v: pair(rho, v))
    h_dual = int(pair(rho, theta)) + 1

    return RootSystem(
        type=dt,
        dim=dim,
        roots=roots,
        simple_roots=simple,
        rho=rho,
        fundamental_weights=tuple(weights),
        cartan=cartan,
        t_i=t_i,
        t_group=t_group,
        h_dual=h_dual,
        scale2=scale2,
    )


def group_constants(dt: DynkinType, level: int = 2):
    """Return (t, h_dual, period) with period = t * (level + h_dual)."""
    if level < 2:
        raise ValueError(f"level {level} not supported: need level >= 2")
    rs = build_root_system(dt)
    return rs.t_group, rs.h_dual, rs.t_group * (level + rs.h_dual)
