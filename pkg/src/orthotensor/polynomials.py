"""Evaluation of the tensor polynomials of orders 0..4.

Each order-N component is the unique symmetric combination of products of
vector components and Kronecker deltas whose radial prefactors (f2, f3, f4,
g4, polynomials in xi^2) carry the weight-dependent coefficients. Evaluation
is vectorized over trailing-axis-D arrays of points; the same components are
exportable as exact multivariate polynomials for the reduction integrator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .coefficients import CoefficientSet, build_coefficients
from .errors import DomainError
from .moments import MomentTable, WeightSpec, build_moment_table
from .tensor_algebra import (MultivarPoly, SymTensor, canonical_index,
                             delta_full, iter_multi_indices)

__all__ = ["PolynomialFamily", "make_family", "eval_component", "eval_tensor",
           "as_multivar_poly", "project_1d"]


@dataclass(frozen=True)
class PolynomialFamily:
    """A weight, its moment table and the coefficient set, bundled."""

    weight: WeightSpec
    D: int
    table: MomentTable
    coeffs: CoefficientSet

    def radial_density(self, xi_points) -> np.ndarray:
        """Weight value at each point (points on the trailing axis)."""
        pts = np.asarray(xi_points, dtype=float)
        r = np.sqrt(np.sum(pts * pts, axis=-1))
        return self.weight.radial(r, self.D)


def make_family(weight: WeightSpec, D: int, *, rel_tol: float = 1e-10,
                force_quadrature: bool = False) -> PolynomialFamily:
    table = build_moment_table(weight, D, 4, rel_tol, force_quadrature)
    coeffs = build_coefficients(table, D)
    return PolynomialFamily(weight=weight, D=D, table=table, coeffs=coeffs)


def _check_index(idx: tuple[int, ...], N: int, D: int) -> None:
    if len(idx) != N:
        raise DomainError(f"index {idx} does not have rank {N}")
    if not all(1 <= i <= D for i in idx):
        raise DomainError(f"index {idx} out of range 1..{D}")


def eval_component(fam: PolynomialFamily, N: int, idx, xi) -> float | np.ndarray:
    """Component of the order-N polynomial at xi (vectorized over points)."""
    if not 0 <= N <= 4:
        raise DomainError("polynomial order must be 0..4")
    idx = tuple(idx)
    _check_index(idx, N, fam.D)
    pts = np.asarray(xi, dtype=float)
    scalar_input = pts.ndim == 1
    if pts.shape[-1] != fam.D:
        raise DomainError(f"xi must have {fam.D} components")
    cs = fam.coeffs
    s = np.sum(pts * pts, axis=-1)

    def comp(k: int):
        return pts[..., idx[k] - 1]

    if N == 0:
        out = np.full(s.shape, cs.c[0])
    elif N == 1:
        out = cs.c[1] * comp(0)
    elif N == 2:
        f2 = cs.c_bar_k(2) * s + cs.c_prime_k(2)
        out = cs.c[2] * comp(0) * comp(1) + f2 * (idx[0] == idx[1])
    elif N == 3:
        f3 = cs.c_bar_k(3) * s + cs.c_prime_k(3)
        out = cs.c[3] * comp(0) * comp(1) * comp(2)
        out = out + f3 * ((idx[1] == idx[2]) * comp(0)
                          + (idx[0] == idx[2]) * comp(1)
                          + (idx[0] == idx[1]) * comp(2))
    else:
        f4 = cs.c_bar_k(4) * s + cs.c_prime_k(4)
        g4 = (cs.d4_bar * s + cs.d4_prime) * s + cs.d4
        out = cs.c[4] * comp(0) * comp(1) * comp(2) * comp(3)
        pair_sum = 0.0
        for (a, b), (c, d) in _PAIR_SPLITS:
            pair_sum = pair_sum + (idx[c] == idx[d]) * comp(a) * comp(b)
        out = out + f4 * pair_sum + g4 * delta_full(idx)
    return float(out) if scalar_input and np.ndim(out) == 0 else out


# the six ways to pick which two of four slots carry vector components
_PAIR_SPLITS = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)),
                ((1, 2), (0, 3)), ((1, 3), (0, 2)), ((2, 3), (0, 1))]


def eval_tensor(fam: PolynomialFamily, N: int, xi) -> SymTensor:
    """All canonical components of the order-N polynomial at one point."""
    return SymTensor.from_function(
        fam.D, N, lambda idx: eval_component(fam, N, idx, xi))


def as_multivar_poly(fam: PolynomialFamily, N: int, idx) -> MultivarPoly:
    """Exact polynomial in xi_1..xi_D equal to eval_component everywhere."""
    if not 0 <= N <= 4:
        raise DomainError("polynomial order must be 0..4")
    idx = tuple(idx)
    _check_index(idx, N, fam.D)
    D, cs = fam.D, fam.coeffs
    s = MultivarPoly.radius_squared(D)
    one = MultivarPoly.constant(D, 1.0)

    def mono(*ks: int) -> MultivarPoly:
        p = one
        for k in ks:
            p = p * MultivarPoly.variable(D, k)
        return p

    if N == 0:
        return MultivarPoly.constant(D, cs.c[0])
    if N == 1:
        return cs.c[1] * mono(idx[0])
    if N == 2:
        poly = cs.c[2] * mono(idx[0], idx[1])
        if idx[0] == idx[1]:
            poly = poly + cs.c_bar_k(2) * s + MultivarPoly.constant(D, cs.c_prime_k(2))
        return poly
    if N == 3:
        f3 = cs.c_bar_k(3) * s + MultivarPoly.constant(D, cs.c_prime_k(3))
        poly = cs.c[3] * mono(idx[0], idx[1], idx[2])
        for (a, bc) in [(0, (1, 2)), (1, (0, 2)), (2, (0, 1))]:
            if idx[bc[0]] == idx[bc[1]]:
                poly = poly + f3 * mono(idx[a])
        return poly
    f4 = cs.c_bar_k(4) * s + MultivarPoly.constant(D, cs.c_prime_k(4))
    g4 = cs.d4_bar * (s * s) + cs.d4_prime * s + MultivarPoly.constant(D, cs.d4)
    poly = cs.c[4] * mono(idx[0], idx[1], idx[2], idx[3])
    for (a, b), (c, d) in _PAIR_SPLITS:
        if idx[c] == idx[d]:
            poly = poly + f4 * mono(idx[a], idx[b])
    kron = delta_full(idx)
    if kron:
        poly = poly + float(kron) * g4
    return poly


def project_1d(fam: PolynomialFamily) -> list[np.ndarray]:
    """Univariate coefficient arrays of the five polynomials for D = 1.

    Dropping the vector index turns every Kronecker delta into 1, so each
    order collapses to a single scalar polynomial.
    """
    if fam.D != 1:
        raise DomainError("projection is defined for families built with D = 1")
    out = []
    for N in range(5):
        poly = as_multivar_poly(fam, N, (1,) * N)
        coeffs = np.zeros(N + 1)
        for expo, c in poly.terms.items():
            coeffs[expo[0]] = c
        out.append(coeffs)
    return out
