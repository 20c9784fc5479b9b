"""Y-seed mutation, cluster transformations of mutation loops, and their Jacobians.

Derivatives are propagated forward through each elementary mutation with
closed-form partials, so the loop Jacobian is analytic up to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import MutationDomainError
from .quiver import MutationLoop, Quiver, mutate_quiver


@dataclass(frozen=True)
class YSeed:
    quiver: Quiver
    values: Tuple


@dataclass(frozen=True)
class LoopJacobian:
    """Loop Jacobian at a point, with its per-phase factors.

    phase_factors = (J_plus at y, J_minus at mu_+(y), permutation matrix of nu);
    their product equals `matrix`.
    """

    point: Tuple
    matrix: np.ndarray
    phase_factors: Tuple[np.ndarray, np.ndarray, np.ndarray]


def _mutate_values(arrows: np.ndarray, y: np.ndarray, k: int, jac: Optional[np.ndarray]):
    """Apply the Y-seed value rule at k in place of y; update jac rows if given."""
    yk = y[k]
    if yk == 0:
        raise MutationDomainError(k)
    out = y.copy()
    out[k] = 1.0 / yk
    row_k = jac[k, :].copy() if jac is not None else None
    if jac is not None:
        jac[k, :] = (-1.0 / yk ** 2) * row_k
    n = y.shape[0]
    for i in range(n):
        if i == k:
            continue
        a = arrows[k, i]
        b = arrows[i, k]
        if a > 0:
            base = 1.0 / yk + 1.0
            if base == 0:
                raise MutationDomainError(k)
            f = base ** (-a)
            out[i] = y[i] * f
            if jac is not None:
                dfk = a * y[i] * base ** (-a - 1) / yk ** 2
                jac[i, :] = f * jac[i, :] + dfk * row_k
        elif b > 0:
            f = (yk + 1.0) ** b
            out[i] = y[i] * f
            if jac is not None:
                dfk = b * y[i] * (yk + 1.0) ** (b - 1)
                jac[i, :] = f * jac[i, :] + dfk * row_k
    if not np.isfinite(out).all():
        raise MutationDomainError(k, f"mutation at vertex {k} produced a non-finite value")
    return out


def mutate_yseed(seed: YSeed, k: int) -> YSeed:
    """Single Y-seed mutation at vertex k."""
    y = np.asarray(seed.values, dtype=complex if any(isinstance(v, complex) for v in seed.values) else float)
    out = _mutate_values(seed.quiver.arrows, y, k, None)
    return YSeed(mutate_quiver(seed.quiver, k), tuple(out))


def _run_phases(loop: MutationLoop, y: np.ndarray, want_jac: bool):
    n = loop.n_vertices
    arrows = loop.start.quiver.arrows
    jp = np.eye(n, dtype=y.dtype) if want_jac else None
    for k in loop.plus_set:
        y = _mutate_values(arrows, y, k, jp)
        arrows = mutate_quiver(Quiver(arrows), k).arrows
    jm = np.eye(n, dtype=y.dtype) if want_jac else None
    for k in loop.minus_set:
        y = _mutate_values(arrows, y, k, jm)
        arrows = mutate_quiver(Quiver(arrows), k).arrows
    return y, jp, jm


def permutation_matrix(nu, dtype=float) -> np.ndarray:
    n = len(nu)
    p = np.zeros((n, n), dtype=dtype)
    for j in range(n):
        p[nu[j], j] = 1.0
    return p


def cluster_transform(loop: MutationLoop, y) -> np.ndarray:
    """Composite transformation nu . mu_- . mu_+ applied to the value tuple."""
    y = np.asarray(y, dtype=complex if np.iscomplexobj(y) else float)
    if y.shape != (loop.n_vertices,):
        raise ValueError(f"expected {loop.n_vertices} values, got shape {y.shape}")
    out, _, _ = _run_phases(loop, y, want_jac=False)
    permuted = np.empty_like(out)
    for j, v in enumerate(out):
        permuted[loop.nu[j]] = v
    return permuted


def check_periodicity(loop: MutationLoop, y, period: int) -> float:
    """Max relative residual of mu_gamma^period against the identity."""
    y0 = np.asarray(y, dtype=float)
    z = y0.copy()
    for _ in range(period):
        z = cluster_transform(loop, z)
    return float(np.max(np.abs(z - y0) / np.abs(y0)))


def loop_jacobian(loop: MutationLoop, y) -> LoopJacobian:
    """Analytic Jacobian of the cluster transformation at y, with phase factors."""
    y = np.asarray(y, dtype=complex if np.iscomplexobj(y) else float)
    _, jp, jm = _run_phases(loop, y, want_jac=True)
    pmat = permutation_matrix(loop.nu, dtype=y.dtype)
    return LoopJacobian(tuple(y), pmat @ jm @ jp, (jp, jm, pmat))


def finite_difference_jacobian(loop: MutationLoop, y, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of the cluster transformation (test oracle)."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    jac = np.zeros((n, n))
    for j in range(n):
        up, dn = y.copy(), y.copy()
        up[j] += h
        dn[j] -= h
        jac[:, j] = (cluster_transform(loop, up) - cluster_transform(loop, dn)) / (2 * h)
    return jac
