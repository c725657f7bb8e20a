"""Numerical proof of orthonormality and of the moment-contraction identities.

The primary integrator is exact reduction: polynomial products are expanded
to monomials and every monomial integral collapses onto the stored moments,
so Gram deviations measure only the coefficient algebra and the moment
accuracy. Monte Carlo sampling of the actual weight provides the independent
stochastic cross-check.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .coefficients import build_coefficients
from .errors import DomainError
from .moments import Family, MomentTable, WeightSpec, gamma_fn, moment_analytic
from .polynomials import PolynomialFamily, as_multivar_poly, eval_component
from .tensor_algebra import (MultivarPoly, delta_full, delta_ortho,
                             integrate_poly, iter_multi_indices)

__all__ = ["GramReport", "inner_product_exact", "gram_matrix",
           "check_appendix_identities", "monte_carlo_inner",
           "verify_printed_weight_coefficients"]


@dataclass(frozen=True)
class GramReport:
    """Worst deviation from the orthonormality target per (M, N) block."""

    D: int
    weight: dict
    block_deviation: dict[tuple[int, int], float]
    max_deviation: float
    wall_time: float
    source: str

    def to_json_obj(self) -> dict:
        return {
            "D": self.D,
            "weight": self.weight,
            "blocks": [
                {"M": m, "N": n, "max_abs_deviation": dev}
                for (m, n), dev in sorted(self.block_deviation.items())
            ],
            "max_deviation": self.max_deviation,
            "wall_time_seconds": self.wall_time,
            "integrator_source": self.source,
        }


def inner_product_exact(fam: PolynomialFamily, M: int, idxM, N: int, idxN) -> float:
    """Weighted inner product of two components by exact moment reduction."""
    if M + N > 8:
        raise DomainError("inner products need moments through I_8 only (M+N <= 8)")
    pM = as_multivar_poly(fam, M, tuple(idxM))
    pN = as_multivar_poly(fam, N, tuple(idxN))
    return integrate_poly(fam.table, pM * pN)


def gram_matrix(fam: PolynomialFamily) -> GramReport:
    """Every canonical component pair of every block 0 <= M <= N <= 4,
    compared against the combinatorial orthonormality target."""
    start = time.perf_counter()
    polys = {
        N: {idx: as_multivar_poly(fam, N, idx)
            for idx in iter_multi_indices(fam.D, N)}
        for N in range(5)
    }
    blocks: dict[tuple[int, int], float] = {}
    for M in range(5):
        for N in range(M, 5):
            worst = 0.0
            for idxM, pM in polys[M].items():
                for idxN, pN in polys[N].items():
                    val = integrate_poly(fam.table, pM * pN)
                    target = float(delta_ortho(idxM, idxN)) if M == N else 0.0
                    worst = max(worst, abs(val - target))
            blocks[(M, N)] = worst
    return GramReport(
        D=fam.D,
        weight=fam.weight.describe(),
        block_deviation=blocks,
        max_deviation=max(blocks.values()),
        wall_time=time.perf_counter() - start,
        source=fam.table.source,
    )


def check_appendix_identities(table: MomentTable, D: int) -> float:
    """Contraction identities: integrating k vector components against an
    extra xi^{2m} power equals (D+2(k+m)-2)...(D+2k) I_{2(k+m)} delta.

    Every identity with 2k + 2m <= 8 is exercised on explicit component
    choices; the worst relative error is returned.
    """
    if D != table.D:
        raise DomainError(f"dimension {D} does not match table (D={table.D})")
    s = MultivarPoly.radius_squared(D)
    worst = 0.0
    for k in range(0, 5):
        for m in range(0, 5 - k):
            factor = math.prod(D + 2 * j for j in range(k, k + m))
            rhs_scale = factor * table.i2n(2 * (k + m))
            for idx in _identity_index_choices(D, 2 * k):
                poly = MultivarPoly.constant(D, 1.0)
                for i in idx:
                    poly = poly * MultivarPoly.variable(D, i)
                for _ in range(m):
                    poly = poly * s
                lhs = integrate_poly(table, poly)
                rhs = rhs_scale * delta_full(idx) if k else rhs_scale
                err = abs(lhs - rhs) / max(abs(rhs), rhs_scale)
                worst = max(worst, err)
    return worst


def _identity_index_choices(D: int, slots: int) -> list[tuple[int, ...]]:
    """A spread of concrete index tuples: all equal, paired, and mixed."""
    if slots == 0:
        return [()]
    choices = {(1,) * slots}
    if D >= 2:
        choices.add(tuple(1 if i % 2 == 0 else 2 for i in range(slots)))
        choices.add((1,) * (slots - 1) + (2,))
        half = slots // 2
        choices.add((1,) * half + (2,) * (slots - half))
    if D >= 3 and slots >= 3:
        base = [1, 2, 3] * (slots // 3 + 1)
        choices.add(tuple(sorted(base[:slots])))
    return sorted(choices)


# ---------------------------------------------------------------------------
# Monte Carlo cross-check
# ---------------------------------------------------------------------------

_CDF_GRID_POINTS = 4096


def _radial_sampler(w: WeightSpec, D: int):
    """Inverse-CDF sampler of the normalized radial density w(r) r^{D-1}."""
    scale_map = {
        Family.FERMI_DIRAC: math.sqrt(2.0 * w.theta * (1.0 + max(math.log(w.z), 0.0))) if w.z else 1.0,
        Family.BOSE_EINSTEIN: math.sqrt(2.0 * w.theta),
        Family.GRAPHENE: w.theta * (1.0 + max(math.log(w.z or 1.0), 0.0)),
        Family.YUKAWA: 1.0 / (w.mu or 1.0),
    }
    scale = scale_map.get(w.family, 1.0)
    rmax = scale
    dens = lambda r: w.radial(r, D) * r ** (D - 1)
    peak = max(float(np.max(dens(np.linspace(1e-9, rmax, 257)))), 1e-300)
    while float(dens(np.array(rmax))) > 1e-17 * peak and rmax < 1e6 * scale:
        rmax *= 1.5
    grid = np.linspace(0.0, rmax, _CDF_GRID_POINTS)
    pdf = np.concatenate([[0.0], dens(grid[1:])])
    cdf = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) * np.diff(grid) / 2.0)])
    cdf /= cdf[-1]
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    inv = PchipInterpolator(cdf[keep], grid[keep])

    def draw(rng: np.random.Generator, n: int) -> np.ndarray:
        return inv(rng.random(n))

    return draw


def _sample_points(w: WeightSpec, D: int, n: int,
                   rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Points plus per-point importance weights so that
    integral(w * h) == I0-free estimator: mean(weights * h(points))."""
    fam = w.family
    if fam is Family.GAUSSIAN:
        # density equals the normalized weight itself
        return rng.standard_normal((n, D)), None
    if fam in (Family.LEGENDRE, Family.CHEBYSHEV1, Family.CHEBYSHEV2):
        # uniform in the unit ball, importance weight w(xi) * V_ball
        dirs = rng.standard_normal((n, D))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        radii = rng.random(n) ** (1.0 / D)
        pts = dirs * radii[:, None]
        vol = math.pi ** (D / 2.0) / gamma_fn(D / 2.0 + 1.0)
        r = np.linalg.norm(pts, axis=1)
        return pts, vol * np.asarray(w.radial(r, D))
    if fam in (Family.FERMI_DIRAC, Family.BOSE_EINSTEIN, Family.GRAPHENE,
               Family.YUKAWA):
        draw = _radial_sampler(w, D)
        radii = draw(rng, n)
        dirs = rng.standard_normal((n, D))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        # radial CDF is normalized, so the point density is w(xi)/I_0
        return dirs * radii[:, None], None
    raise DomainError(f"no Monte Carlo sampler for family {fam.value}")


def monte_carlo_inner(fam: PolynomialFamily, M: int, idxM, N: int, idxN,
                      samples: int, seed: int) -> tuple[float, float]:
    """Unbiased stochastic estimate of an inner product with its standard
    error; deterministic for a fixed seed."""
    rng = np.random.Generator(np.random.PCG64(seed))
    w, D = fam.weight, fam.D
    pts, imp = _sample_points(w, D, samples, rng)
    vals = np.asarray(eval_component(fam, M, tuple(idxM), pts)) \
        * np.asarray(eval_component(fam, N, tuple(idxN), pts))
    if imp is None:
        vals = vals * fam.table.i2n(0)  # points carry density w / I_0
    else:
        vals = vals * imp
    est = float(np.mean(vals))
    sem = float(np.std(vals, ddof=1) / math.sqrt(samples))
    return est, sem


# ---------------------------------------------------------------------------
# printed closed forms for the bounded-support families
# ---------------------------------------------------------------------------

def verify_printed_weight_coefficients(family: Family, D: int) -> float:
    """Direct Gamma-function closed forms for the bounded-support families
    against the moment-based construction; returns the worst relative error."""
    family = Family(family)
    if family not in (Family.LEGENDRE, Family.CHEBYSHEV1, Family.CHEBYSHEV2):
        raise DomainError("direct closed forms exist for the bounded families only")
    w = WeightSpec(family=family)
    table = MomentTable(D=D, values=tuple(moment_analytic(w, D, N)
                                          for N in range(5)), source="analytic")
    cs = build_coefficients(table, D)
    ref = _direct_gamma_forms(family, D)
    worst = 0.0
    pairs = [
        (cs.c[0], ref["c0"]), (cs.c[1], ref["c1"]), (cs.c[2], ref["c2"]),
        (cs.c[3], ref["c3"]), (cs.c[4], ref["c4"]),
        (cs.c_bar[0], ref["c_bar2"]), (cs.c_bar[1], ref["c_bar3"]),
        (cs.c_bar[2], ref["c_bar4"]),
        (cs.c_prime[0], ref["c_prime2"]), (cs.c_prime[1], ref["c_prime3"]),
        (cs.c_prime[2], ref["c_prime4"]),
        (cs.d4, ref["d4"]), (cs.d4_prime, ref["d4_prime"]),
        (cs.d4_bar, ref["d4_bar"]),
    ]
    for built, direct in pairs:
        scale = max(abs(built), abs(direct), 1e-300)
        worst = max(worst, abs(built - direct) / scale)
    return worst


def _direct_gamma_forms(family: Family, D: float) -> dict[str, float]:
    g = math.gamma
    sq = math.sqrt
    pi = math.pi
    if family is Family.LEGENDRE:
        c = {f"c{N}": 1.0 / sq(2.0 ** (-N) * pi ** (D / 2) / g(1 + D / 2 + N))
             for N in range(5)}
        c["c_bar2"] = (-2 + sq(2 * (2 + D))) / (D * sq(pi ** (D / 2) / g(3 + D / 2)))
        c["c_bar3"] = (-2 * sq(2) + 2 * sq(4 + D)) / ((2 + D) * sq(pi ** (D / 2) / g(4 + D / 2)))
        c["c_bar4"] = (-4 + 2 * sq(2 * (6 + D))) / ((4 + D) * sq(pi ** (D / 2) / g(5 + D / 2)))
        c["c_prime2"] = -sq(2.0 / ((2 + D) * pi ** (D / 2) / g(3 + D / 2)))
        c["c_prime3"] = -sq(4.0 / ((4 + D) * pi ** (D / 2) / g(4 + D / 2)))
        c["c_prime4"] = -sq(8.0 / ((6 + D) * pi ** (D / 2) / g(5 + D / 2)))
        num = 16 * (6 + D) * pi ** (3 * D / 2) / ((4 + D) * g(3 + D / 2) * g(4 + D / 2) ** 2)
        den = pi ** (2 * D) * (
            (2 + D) * (96 + D * (8 + D) * (24 + D * (8 + D)))
            / ((8 + D) * g(3 + D / 2) ** 4)
            - 2 * (4 + D) * (4 + D * (8 + D)) / (g(2 + D / 2) ** 3 * g(5 + D / 2)))
        c["d4"] = sq(num) / sq(den)
        d4, c4 = c["d4"], c["c4"]
        c["d4_prime"] = (
            (2 * D * (6 + D) ** 1.5 * g(1 + D / 2) * g(3 + D / 2) ** 2
             - 8 * sq(6 + D) * g(3 + D / 2) ** 3) * d4
            + (8 * sq(2) * g(3 + D / 2) ** 3 / (D + 2)
               - 4 * sq(2) * g(2 + D / 2) ** 2 * g(4 + D / 2)) * c4
        ) / (D * (4 + D) * sq(6 + D)
             * (-(6 + D) * g(2 + D / 2) ** 3 + 2 * g(1 + D / 2) * g(3 + D / 2) ** 2))
        c["d4_bar"] = (c4 * (D - 2 * sq(2 * (6 + D)) - D * sq(2 * (6 + D)))
                       + (4 + D) ** 2 * (6 + D) * d4) / (D * (2 + D) * (4 + D))
        return c
    if family is Family.CHEBYSHEV1:
        c = {f"c{N}": 1.0 / sq(2.0 ** (-N) * pi ** ((1 + D) / 2) / g((1 + D) / 2 + N))
             for N in range(5)}
        c["c_bar2"] = 2 * (-1 + sq(1 + D)) / (D * sq(pi ** ((1 + D) / 2) / g((5 + D) / 2)))
        c["c_bar3"] = 2 * sq(2) * (-1 + sq(3 + D)) / ((2 + D) * sq(pi ** ((1 + D) / 2) / g((7 + D) / 2)))
        c["c_bar4"] = 4 * (-1 + sq(5 + D)) / ((4 + D) * sq(pi ** ((1 + D) / 2) / g((9 + D) / 2)))
        c["c_prime2"] = -2.0 / sq((1 + D) * pi ** ((1 + D) / 2) / g((5 + D) / 2))
        c["c_prime3"] = -2 * sq(2) / sq((3 + D) * pi ** ((1 + D) / 2) / g((7 + D) / 2))
        c["c_prime4"] = -4.0 / sq((5 + D) * pi ** ((1 + D) / 2) / g((9 + D) / 2))
        num = 8 * sq(pi ** (3 * (1 + D) / 2) / ((3 + D) * (5 + D) ** 2 * g((5 + D) / 2) ** 3))
        den = sq(pi ** (2 + 2 * D) * (
            -D * (2 + D) ** 2 / g((5 + D) / 2) ** 4
            + (4 + D) * (7 + D) * (4 + D * (7 + D) * (8 + D * (7 + D)))
            / (4 * (3 + D) * g((3 + D) / 2) ** 2 * g((9 + D) / 2) ** 2)))
        c["d4"] = num / den
        d4, c4 = c["d4"], c["c4"]
        c["d4_prime"] = (2 * (c4 * sq(5 + D) - d4 * (3 + D) * (5 + D))
                         * g((3 + D) / 2) * g((5 + D) / 2) ** 2) / (
            D * (4 + D) * (5 + D) * g((5 + D) / 2) ** 3
            - 2 * D * (2 + D) * g((3 + D) / 2) * g((7 + D) / 2) ** 2)
        c["d4_bar"] = (1.0 / (4 * (2 + D))) * (
            4 * c4 * (D - 4 * sq(5 + D) - 2 * D * sq(5 + D)) / (D * (4 + D))
            + 8 * d4 * (5 + D) * g((5 + D) / 2) ** 2 / (
                D * (4 + D) * g((5 + D) / 2) ** 2
                - D * (2 + D) * g((3 + D) / 2) * g((7 + D) / 2)))
        return c
    c = {f"c{N}": 1.0 / sq(2.0 ** (-1 - N) * pi ** ((1 + D) / 2) / g((3 + D) / 2 + N))
         for N in range(5)}
    c["c_bar2"] = 2 * sq(2) * (-3 + sq(3 * (3 + D))) / (3 * D * sq(pi ** ((1 + D) / 2) / g((7 + D) / 2)))
    c["c_bar3"] = (-4 + 4 * sq(5 + D) / sq(3)) / ((2 + D) * sq(pi ** ((1 + D) / 2) / g((9 + D) / 2)))
    c["c_bar4"] = 4 * sq(2) * (-3 + sq(3 * (7 + D))) / (3 * (4 + D) * sq(pi ** ((1 + D) / 2) / g((11 + D) / 2)))
    c["c_prime2"] = -sq(8.0 / (3 * (3 + D) * pi ** ((1 + D) / 2) / g((7 + D) / 2)))
    c["c_prime3"] = -sq(16.0 / (3 * (5 + D) * pi ** ((1 + D) / 2) / g((9 + D) / 2)))
    c["c_prime4"] = -sq(32.0 / (3 * (7 + D) * pi ** ((1 + D) / 2) / g((11 + D) / 2)))
    num = 4 * sq(3 * (7 + D) * pi ** (3 * (1 + D) / 2) / ((5 + D) * g((9 + D) / 2) ** 3))
    den = sq(pi ** (2 + 2 * D) * (
        -D * (2 + D) ** 2 / g((7 + D) / 2) ** 4
        + (4 + D) * (9 + D) * (36 + D * (1 + D) * (8 + D) * (9 + D))
        / (4 * (5 + D) * g((5 + D) / 2) ** 2 * g((11 + D) / 2) ** 2)))
    c["d4"] = num / den
    d4, c4 = c["d4"], c["c4"]
    c["d4_prime"] = (2 * (c4 * sq(3 * (7 + D)) - 3 * d4 * (5 + D) * (7 + D))
                     * g((5 + D) / 2) * g((7 + D) / 2) ** 2) / (
        D * (4 + D) * (7 + D) * g((7 + D) / 2) ** 3
        - 2 * D * (2 + D) * g((5 + D) / 2) * g((9 + D) / 2) ** 2)
    c["d4_bar"] = (1.0 / (4 * (2 + D))) * (
        -4 * c4 * (4 * sq(3 * (7 + D)) + D * (-3 + 2 * sq(3 * (7 + D)))) / (3 * D * (4 + D))
        + 24 * d4 * (7 + D) * g((7 + D) / 2) ** 2 / (
            D * (4 + D) * g((7 + D) / 2) ** 2
            - D * (2 + D) * g((5 + D) / 2) * g((9 + D) / 2)))
    return c
