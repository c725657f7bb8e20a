"""Shifted-argument expansion and orthonormal multipoles.

A function f equal to the weight expands as
f(xi - u) = f(xi) * sum_N (1/N!) A_N(u) . P_N(xi); the coefficient tensors
A_N have closed forms in the moments, and a discrete charge distribution
turns them into multipole tensors Q_N = sum_k q_k A_N(u_k).
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConsistencyError, DomainError
from .polynomials import PolynomialFamily, as_multivar_poly, eval_component
from .tensor_algebra import (SymTensor, delta_full, index_multiplicity,
                             integrate_poly, iter_multi_indices)

__all__ = ["ExpansionCoefficients", "ChargeDistribution",
           "expansion_coefficients", "expansion_coefficients_projection",
           "ContractionPair", "contract_AP", "reconstruct",
           "completeness_residual", "multipoles", "potential_series"]

_CONTRACT_TOL = 1e-9


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Coefficient tensors A_0..A_4 for one displacement u."""

    u: tuple[float, ...]
    tensors: tuple[SymTensor, ...]

    def order(self, N: int) -> SymTensor:
        return self.tensors[N]


def _as_vector(u, D: int) -> np.ndarray:
    v = np.asarray(u, dtype=float).reshape(-1)
    if v.shape != (D,):
        raise DomainError(f"expected a length-{D} vector, got shape {v.shape}")
    return v


def expansion_coefficients(fam: PolynomialFamily, u) -> ExpansionCoefficients:
    """Closed-form coefficient tensors of the shifted-weight expansion."""
    D, cs, table = fam.D, fam.coeffs, fam.table
    uv = _as_vector(u, D)
    u2 = float(uv @ uv)
    I0, I2 = table.i2n(0), table.i2n(2)
    j2, j4 = cs.j[0], cs.j[1]

    def ui(i: int) -> float:
        return uv[i - 1]

    t0 = SymTensor(D, 0, {(): I0 * cs.c[0]})
    t1 = SymTensor.from_function(D, 1, lambda idx: I0 * cs.c[1] * ui(idx[0]))

    def a2(idx):
        return I0 * (cs.c[2] * ui(idx[0]) * ui(idx[1])
                     + cs.c_bar_k(2) * u2 * (idx[0] == idx[1]))

    b3 = cs.c_prime_k(3) * (1.0 - j2)

    def a3(idx):
        i1, i2, i3 = idx
        trace = (b3 + cs.c_bar_k(3) * u2) * (
            ui(i1) * (i2 == i3) + ui(i2) * (i1 == i3) + ui(i3) * (i1 == i2))
        return I0 * (cs.c[3] * ui(i1) * ui(i2) * ui(i3) + trace)

    b4 = (1.0 - j2 * j4) * cs.c_prime_k(4)
    g4u = (2.0 * (I2 / I0) * (cs.c_bar_k(4) + (D + 2) * cs.d4_bar)
           + cs.d4_prime) * u2 + cs.d4_bar * u2 * u2

    def a4(idx):
        i1, i2, i3, i4 = idx
        pair = (b4 + cs.c_bar_k(4) * u2) * (
            ui(i1) * ui(i2) * (i3 == i4) + ui(i1) * ui(i3) * (i2 == i4)
            + ui(i1) * ui(i4) * (i2 == i3) + ui(i2) * ui(i3) * (i1 == i4)
            + ui(i2) * ui(i4) * (i1 == i3) + ui(i3) * ui(i4) * (i1 == i2))
        return I0 * (cs.c[4] * ui(i1) * ui(i2) * ui(i3) * ui(i4) + pair
                     + g4u * delta_full(idx))

    return ExpansionCoefficients(
        u=tuple(uv),
        tensors=(t0, t1,
                 SymTensor.from_function(D, 2, a2),
                 SymTensor.from_function(D, 3, a3),
                 SymTensor.from_function(D, 4, a4)))


def expansion_coefficients_projection(fam: PolynomialFamily, u) -> ExpansionCoefficients:
    """The same tensors by projection: A_N(u) = integral of the weight against
    the polynomial shifted by u, evaluated with the exact integrator."""
    uv = _as_vector(u, fam.D)
    tensors = []
    for N in range(5):
        vals = {}
        for idx in iter_multi_indices(fam.D, N):
            shifted = as_multivar_poly(fam, N, idx).shift(uv)
            vals[idx] = integrate_poly(fam.table, shifted)
        tensors.append(SymTensor(fam.D, N, vals))
    return ExpansionCoefficients(u=tuple(uv), tensors=tuple(tensors))


def contract_sym(a: SymTensor, b: SymTensor) -> float:
    """Full contraction of two symmetric tensors of equal rank."""
    if a.rank != b.rank or a.D != b.D:
        raise DomainError("contraction needs equal rank and dimension")
    return math.fsum(index_multiplicity(idx) * val * b[idx]
                     for idx, val in a.components())


class ContractionPair(NamedTuple):
    closed_form: float
    brute_force: float


def _closed_form_contractions(fam: PolynomialFamily, uv, xiv) -> list[float]:
    """Scalar A_N . P_N through order 4 in the invariants s = xi^2, t = u^2,
    p = xi.u (sign and leading-power transcription slips in the source
    material corrected against the brute-force oracle)."""
    D, cs, table = fam.D, fam.coeffs, fam.table
    I = [table.i2n(2 * n) for n in range(5)]
    s = float(xiv @ xiv)
    t = float(uv @ uv)
    p = float(xiv @ uv)
    j2, j4 = cs.j[0], cs.j[1]
    d2, d4c = cs.delta_cap[0], cs.delta_cap[1]

    out = [1.0, (I[0] / I[1]) * p]

    out.append((I[0] / I[2]) * p * p
               + (I[0] * (d2 ** 2 - 1.0) / (I[2] * D)) * t * s
               - (I[1] / I[2]) * d2 ** 2 * t)

    out.append(I[0] * p * (
        3.0 * (1.0 - j2) * (j4 / I[1]) * (D + 2) * d4c ** 2
        - 3.0 * (j4 / I[2]) * d4c ** 2 * t
        - 3.0 * (1.0 - j2) * (j4 / I[2]) * d4c ** 2 * s
        + 3.0 * (d4c ** 2 - 1.0) / (I[3] * (D + 2)) * s * t
        + (1.0 / I[3]) * p * p))

    c4, cp4, cb4 = cs.c[4], cs.c_prime[2], cs.c_bar[2]
    d4, dp4, db4 = cs.d4, cs.d4_prime, cs.d4_bar
    B = (1.0 - j2 * j4) * cp4 + cb4 * t
    F = cb4 * s + cp4
    g4 = db4 * s * s + dp4 * s + d4
    G = ((2.0 * (I[1] / I[0]) * (cb4 + (D + 2) * db4) + dp4) * t
         + db4 * t * t)
    out.append(I[0] * (
        c4 ** 2 * p ** 4
        + 6.0 * c4 * F * p * p * t
        + 3.0 * c4 * g4 * t * t
        + 6.0 * c4 * B * p * p * s
        + 6.0 * B * F * ((D + 4) * p * p + t * s)
        + 6.0 * (D + 2) * B * g4 * t
        + 3.0 * G * c4 * s * s
        + 6.0 * (D + 2) * G * F * s
        + 3.0 * D * (D + 2) * G * g4))
    return out


def _brute_force_contractions(fam: PolynomialFamily, coeffs: ExpansionCoefficients,
                              xiv) -> list[float]:
    out = []
    for N in range(5):
        a = coeffs.order(N)
        total = 0.0
        for idx in itertools.product(range(1, fam.D + 1), repeat=N):
            total += a[idx] * float(eval_component(fam, N, idx, xiv))
        out.append(total)
    return out


def contract_AP(fam: PolynomialFamily, u, xi) -> list[ContractionPair]:
    """Per-order scalar contractions A_N . P_N, by the closed forms and by
    the brute-force sum over all index tuples; the two must agree."""
    uv = _as_vector(u, fam.D)
    xiv = _as_vector(xi, fam.D)
    closed = _closed_form_contractions(fam, uv, xiv)
    brute = _brute_force_contractions(fam, expansion_coefficients(fam, uv), xiv)
    pairs = [ContractionPair(c, b) for c, b in zip(closed, brute)]
    for N, pair in enumerate(pairs):
        if abs(pair.closed_form - pair.brute_force) > _CONTRACT_TOL * (1.0 + abs(pair.brute_force)):
            raise ConsistencyError(
                f"order-{N} contraction mismatch: closed form "
                f"{pair.closed_form!r} vs brute force {pair.brute_force!r}")
    return pairs


def reconstruct(fam: PolynomialFamily, u, xi, n_max: int = 4) -> float:
    """Truncated reconstruction f(xi) * sum_{N<=n_max} A_N . P_N / N!."""
    if not 0 <= n_max <= 4:
        raise DomainError("n_max must be 0..4")
    uv = _as_vector(u, fam.D)
    xiv = _as_vector(xi, fam.D)
    coeffs = expansion_coefficients(fam, uv)
    total = 0.0
    for N in range(n_max + 1):
        a = coeffs.order(N)
        pt = contract_sym(a, SymTensor.from_function(
            fam.D, N, lambda idx: float(eval_component(fam, N, idx, xiv))))
        total += pt / math.factorial(N)
    f_xi = float(fam.weight.radial(float(np.linalg.norm(xiv)), fam.D))
    return f_xi * total


def completeness_residual(fam: PolynomialFamily, u, xi_grid: Sequence,
                          n_max: int = 4, coefficients: str = "closed_form") -> float:
    """Worst truncated-reconstruction error over a grid, relative to the
    largest weight value on the grid.

    This exercises the N <= n_max truncation of the completeness relation,
    not the full distributional identity. The coefficient tensors can come
    from the closed forms or from the projection integrals.
    """
    uv = _as_vector(u, fam.D)
    if coefficients == "projection":
        coeffs = expansion_coefficients_projection(fam, uv)
    elif coefficients == "closed_form":
        coeffs = expansion_coefficients(fam, uv)
    else:
        raise DomainError("coefficients must be 'closed_form' or 'projection'")
    worst = 0.0
    fmax = 0.0
    for xi in xi_grid:
        xiv = _as_vector(xi, fam.D)
        total = 0.0
        for N in range(n_max + 1):
            pt = contract_sym(coeffs.order(N), SymTensor.from_function(
                fam.D, N, lambda idx: float(eval_component(fam, N, idx, xiv))))
            total += pt / math.factorial(N)
        f_xi = float(fam.weight.radial(float(np.linalg.norm(xiv)), fam.D))
        shifted = float(fam.weight.radial(
            float(np.linalg.norm(xiv - uv)), fam.D))
        worst = max(worst, abs(shifted - f_xi * total))
        fmax = max(fmax, abs(shifted))
    return worst / fmax if fmax > 0 else worst


@dataclass(frozen=True)
class ChargeDistribution:
    """Point charges: (position, charge) pairs."""

    positions: tuple[tuple[float, ...], ...]
    charges: tuple[float, ...]

    def __post_init__(self):
        if len(self.positions) != len(self.charges):
            raise DomainError("positions and charges must pair up")
        for pos in self.positions:
            if not all(math.isfinite(x) for x in pos):
                raise DomainError("charge positions must be finite")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[Sequence[float], float]]) -> "ChargeDistribution":
        return cls(positions=tuple(tuple(float(x) for x in p) for p, _ in pairs),
                   charges=tuple(float(q) for _, q in pairs))

    @classmethod
    def from_csv(cls, path: str, D: int) -> "ChargeDistribution":
        """One line per charge: D position columns then the charge."""
        positions, charges = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                if len(row) != D + 1:
                    raise DomainError(
                        f"expected {D + 1} columns (position then charge), "
                        f"got {len(row)}: {row}")
                positions.append(tuple(float(x) for x in row[:D]))
                charges.append(float(row[D]))
        return cls(positions=tuple(positions), charges=tuple(charges))


def multipoles(fam: PolynomialFamily, rho: ChargeDistribution) -> list[SymTensor]:
    """Charge-weighted sums of the coefficient tensors, Q_N = sum q_k A_N(u_k)."""
    totals = [dict() for _ in range(5)]
    for pos, q in zip(rho.positions, rho.charges):
        coeffs = expansion_coefficients(fam, pos)
        for N in range(5):
            for idx, val in coeffs.order(N).components():
                totals[N][idx] = totals[N].get(idx, 0.0) + q * val
    return [SymTensor(fam.D, N, totals[N]) for N in range(5)]


def potential_series(fam: PolynomialFamily, rho: ChargeDistribution, xi,
                     n_max: int = 4) -> float:
    """Truncated multipole potential f(xi) * sum_N Q_N . P_N(xi) / N!."""
    if not 0 <= n_max <= 4:
        raise DomainError("n_max must be 0..4")
    xiv = _as_vector(xi, fam.D)
    qs = multipoles(fam, rho)
    total = 0.0
    for N in range(n_max + 1):
        pt = contract_sym(qs[N], SymTensor.from_function(
            fam.D, N, lambda idx: float(eval_component(fam, N, idx, xiv))))
        total += pt / math.factorial(N)
    f_xi = float(fam.weight.radial(float(np.linalg.norm(xiv)), fam.D))
    return f_xi * total
