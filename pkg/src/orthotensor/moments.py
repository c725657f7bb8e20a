"""Weight families and the radial moment integrals that drive everything else.

A weight is a positive radial function on (0, xi_max). The moments stored in
a MomentTable are the spherical-volume integrals

    I_{2N} = pi^{D/2} / (2^{N-1} Gamma(N + D/2)) * int_0^{xi_max} w(xi) xi^{2N+D-1} dxi,

computed either from per-family closed forms or by adaptive quadrature.
Odd-order moments vanish by symmetry and are not stored.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError

__all__ = [
    "Family",
    "WeightSpec",
    "MomentTable",
    "gamma_fn",
    "riemann_zeta",
    "dirichlet_eta",
    "fermi_integral_g",
    "sommerfeld_g",
    "bose_integral_h",
    "moment_analytic",
    "moment_quadrature",
    "build_moment_table",
    "graphene_series_i2n",
]

DEFAULT_REL_TOL = 1e-10
QUAD_LIMIT = 500  # subintervals per quad call; ~10^4 evaluations, well under budget
GRAPHENE_Z_MAX = 1.05
BOSE_ALPHA_TERMS = 20


class Family(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LEGENDRE = "legendre"
    CHEBYSHEV1 = "chebyshev1"
    CHEBYSHEV2 = "chebyshev2"
    FERMI_DIRAC = "fermi_dirac"
    BOSE_EINSTEIN = "bose_einstein"
    GRAPHENE = "graphene"
    YUKAWA = "yukawa"
    CUSTOM = "custom"


_BOUNDED = {Family.LEGENDRE, Family.CHEBYSHEV1, Family.CHEBYSHEV2}


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def gamma_fn(x: float) -> float:
    """Gamma function restricted to positive arguments."""
    if x <= 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def riemann_zeta(s: float) -> float:
    """Riemann zeta, analytically continued; s = 1 is a pole."""
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    return float(mpmath.zeta(s))


def dirichlet_eta(s: float) -> float:
    """Alternating zeta (1 - 2^{1-s}) zeta(s); entire, eta(1) = ln 2."""
    if s == 1:
        return math.log(2.0)
    return (1.0 - 2.0 ** (1.0 - s)) * riemann_zeta(s)


def _quad_fermi_like(nu: float, z: float, sign: float) -> float:
    """int_0^inf x^{nu-1} / (z^{-1} e^x + sign) dx by adaptive quadrature.

    Substitutes x = t^k (k = ceil(1/nu) when nu < 1) so the integrand is
    bounded at the origin, and splits at the degeneracy scale x ~ ln z.
    """
    k = 1 if nu >= 1 else max(2, math.ceil(1.0 / nu))
    zinv = 1.0 / z

    def f(t: float) -> float:
        x = t ** k
        expo = min(x, 700.0)
        return k * t ** (k * nu - 1.0) / (zinv * math.exp(expo) + sign)

    breaks = []
    if z > math.e:  # degenerate regime: integrand is ~t^{k nu - 1} out to x = ln z
        breaks.append((math.log(z)) ** (1.0 / k))
    pieces = []
    lo = 0.0
    for b in breaks:
        pieces.append(integrate.quad(f, lo, b, epsabs=0.0, epsrel=1e-12,
                                     limit=QUAD_LIMIT))
        lo = b
    pieces.append(integrate.quad(f, lo, np.inf, epsabs=0.0, epsrel=1e-12,
                                 limit=QUAD_LIMIT))
    value = math.fsum(p[0] for p in pieces)
    err = math.fsum(p[1] for p in pieces)
    if value != 0.0 and err / abs(value) > 1e-8:
        raise ConvergenceError("fermi/bose integral did not converge",
                               achieved=err / abs(value))
    return value


def fermi_integral_g(nu: float, z: float) -> float:
    """g_nu(z) = int_0^inf x^{nu-1} / (z^{-1} e^x + 1) dx.

    For z <= 0.5 the alternating series Gamma(nu) * sum (-1)^{k+1} z^k / k^nu
    is summed to machine tolerance; otherwise the defining integral is
    evaluated by adaptive quadrature.
    """
    if nu <= 0:
        raise DomainError(f"fermi_integral_g requires nu > 0, got {nu}")
    if z <= 0:
        raise DomainError(f"fermi_integral_g requires z > 0, got {z}")
    if z <= 0.5:
        total, k, term = 0.0, 1, z
        while True:
            contrib = term / k ** nu
            total += contrib
            if abs(contrib) < 1e-17 * abs(total) or k > 200:
                break
            k += 1
            term = -term * z
        return math.gamma(nu) * total
    return _quad_fermi_like(nu, z, +1.0)


def sommerfeld_g(nu: float, ln_z: float) -> float:
    """Degenerate-limit asymptotic series for g_nu, truncated at (ln z)^{-4}."""
    if ln_z <= 0:
        raise DomainError(f"sommerfeld_g requires ln z > 0, got {ln_z}")
    lead = math.gamma(nu) / math.gamma(nu + 1.0) * ln_z ** nu
    corr2 = nu * (nu - 1.0) * (math.pi ** 2 / 6.0) / ln_z ** 2
    corr4 = (nu * (nu - 1.0) * (nu - 2.0) * (nu - 3.0)
             * (7.0 * math.pi ** 4 / 360.0) / ln_z ** 4)
    return lead * (1.0 + corr2 + corr4)


def _bose_alpha_expansion(nu: float, alpha: float) -> float:
    """h_nu(e^{-alpha}) from the zeta expansion around alpha = 0.

    Integer and non-integer orders take different forms (the integer one
    carries the harmonic-sum/log term); both are scaled by Gamma(nu).
    """
    if abs(nu - round(nu)) < 1e-9:
        m = int(round(nu))
        harmonic = math.fsum(1.0 / i for i in range(1, m))
        total = ((-1.0) ** (m - 1) / math.gamma(m)
                 * (harmonic - math.log(alpha)) * alpha ** (m - 1))
        for i in range(0, BOSE_ALPHA_TERMS + 1):
            if i == m - 1:
                continue
            total += (-1.0) ** i / math.gamma(i + 1.0) * riemann_zeta(m - i) * alpha ** i
    else:
        total = math.gamma(1.0 - nu) * alpha ** (nu - 1.0)
        for i in range(0, BOSE_ALPHA_TERMS + 1):
            total += (-1.0) ** i / math.gamma(i + 1.0) * riemann_zeta(nu - i) * alpha ** i
    return math.gamma(nu) * total


def bose_integral_h(nu: float, z: float) -> float:
    """h_nu(z) = int_0^inf x^{nu-1} / (z^{-1} e^x - 1) dx for 0 < z < 1.

    Small z uses the power series Gamma(nu) * sum z^k / k^nu; z > 0.5 uses
    the expansion in alpha = -ln z around the z -> 1 limit.
    """
    if nu <= 0:
        raise DomainError(f"bose_integral_h requires nu > 0, got {nu}")
    if not 0.0 < z < 1.0:
        raise DomainError(f"bose_integral_h requires 0 < z < 1, got {z}")
    if z <= 0.5:
        total, k = 0.0, 1
        term = z
        while True:
            contrib = term / k ** nu
            total += contrib
            if abs(contrib) < 1e-17 * abs(total) or k > 400:
                break
            k += 1
            term *= z
        return math.gamma(nu) * total
    return _bose_alpha_expansion(nu, -math.log(z))


# ---------------------------------------------------------------------------
# weight specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSpec:
    """A radial weight family with parameters and integration cutoff."""

    family: Family
    theta: float = 1.0
    z: float | None = None
    mu: float | None = None
    xi_max: float = field(default=math.inf)
    custom_radial: Callable[[float], float] | None = None
    decays_superpolynomially: bool = False

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if fam in _BOUNDED:
            object.__setattr__(self, "xi_max", 1.0)
        elif fam is not Family.CUSTOM:
            object.__setattr__(self, "xi_max", math.inf)
        if fam in (Family.FERMI_DIRAC, Family.BOSE_EINSTEIN, Family.GRAPHENE):
            if self.theta <= 0:
                raise DomainError("theta must be positive")
            if self.z is None:
                raise DomainError(f"{fam.value} weight needs a fugacity z")
            if fam is Family.FERMI_DIRAC and self.z <= 0:
                raise DomainError("fermi_dirac requires z > 0")
            if fam is Family.BOSE_EINSTEIN and not 0.0 < self.z < 1.0:
                raise DomainError("bose_einstein requires 0 < z < 1")
            if fam is Family.GRAPHENE and not 0.0 < self.z <= GRAPHENE_Z_MAX:
                raise DomainError(
                    f"graphene requires 0 < z <= {GRAPHENE_Z_MAX}")
        if fam is Family.YUKAWA:
            if self.mu is None or self.mu <= 0:
                raise DomainError("yukawa requires mu > 0")
        if fam is Family.CUSTOM:
            if self.custom_radial is None:
                raise DomainError("custom weight needs custom_radial")
            if math.isinf(self.xi_max) and not self.decays_superpolynomially:
                raise DomainError(
                    "custom weight on an infinite domain must assert "
                    "super-polynomial decay (decays_superpolynomially=True)")

    def validate_dimension(self, D: int) -> None:
        if D < 1:
            raise DomainError("dimension must be >= 1")
        if self.family is Family.YUKAWA and D < 2:
            raise DomainError("yukawa moments require D >= 2 (I_0 diverges at D=1)")

    def radial(self, xi, D: int):
        """Weight value at radius xi (vectorized over numpy arrays)."""
        xi = np.asarray(xi, dtype=float)
        fam = self.family
        if fam is Family.GAUSSIAN:
            return (2.0 * math.pi) ** (-D / 2.0) * np.exp(-xi ** 2 / 2.0)
        if fam is Family.LEGENDRE:
            return np.ones_like(xi)
        if fam is Family.CHEBYSHEV1:
            return 1.0 / np.sqrt(1.0 - xi ** 2)
        if fam is Family.CHEBYSHEV2:
            return np.sqrt(np.maximum(1.0 - xi ** 2, 0.0))
        if fam is Family.FERMI_DIRAC:
            e = np.exp(np.minimum(xi ** 2 / (2.0 * self.theta), 700.0))
            return 1.0 / (e / self.z + 1.0)
        if fam is Family.BOSE_EINSTEIN:
            e = np.exp(np.minimum(xi ** 2 / (2.0 * self.theta), 700.0))
            return 1.0 / (e / self.z - 1.0)
        if fam is Family.GRAPHENE:
            e = np.exp(np.minimum(xi / self.theta, 700.0))
            return 1.0 / (e / self.z + 1.0)
        if fam is Family.YUKAWA:
            return np.exp(-self.mu * xi) / xi
        return np.vectorize(self.custom_radial, otypes=[float])(xi)

    def describe(self) -> dict:
        out = {"family": self.family.value}
        if self.family in (Family.FERMI_DIRAC, Family.BOSE_EINSTEIN, Family.GRAPHENE):
            out["theta"] = self.theta
            out["z"] = self.z
        if self.family is Family.YUKAWA:
            out["mu"] = self.mu
        if self.family is Family.CUSTOM:
            out["xi_max"] = self.xi_max
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "WeightSpec":
        try:
            fam = Family(obj["family"])
        except (KeyError, ValueError) as exc:
            raise DomainError(f"unknown weight family in {obj!r}") from exc
        return cls(family=fam, theta=obj.get("theta", 1.0),
                   z=obj.get("z"), mu=obj.get("mu"))


# ---------------------------------------------------------------------------
# moment table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentTable:
    """The values I_0, I_2, ..., I_{2 N_max} for one (weight, D) pair."""

    D: int
    values: tuple[float, ...]
    source: str  # "analytic" | "quadrature"

    def __post_init__(self):
        if any(v <= 0 for v in self.values):
            raise DomainError("all stored moments must be strictly positive")

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def i2n(self, order: int) -> float:
        """Moment of the given even order (I_0, I_2, ...)."""
        if order % 2 != 0:
            return 0.0
        n = order // 2
        if n < 0 or n > self.n_max:
            raise DomainError(
                f"moment order {order} outside table range 0..{2 * self.n_max}")
        return self.values[n]

    def to_json_obj(self) -> dict:
        return {"D": self.D, "values": list(self.values), "source": self.source}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MomentTable":
        return cls(D=int(obj["D"]), values=tuple(float(v) for v in obj["values"]),
                   source=str(obj["source"]))


def _prefactor(D: int, N: int) -> float:
    return math.pi ** (D / 2.0) / (2.0 ** (N - 1) * math.gamma(N + D / 2.0))


def moment_analytic(w: WeightSpec, D: int, N: int) -> float:
    """Closed-form I_{2N} for the built-in families."""
    w.validate_dimension(D)
    if N < 0:
        raise DomainError("N must be >= 0")
    fam = w.family
    if fam is Family.GAUSSIAN:
        return 1.0
    if fam is Family.LEGENDRE:
        return (2.0 ** (1 - N) * math.pi ** (D / 2.0)
                / ((D + 2 * N) * math.gamma((D + 2 * N) / 2.0)))
    if fam is Family.CHEBYSHEV1:
        return (2.0 ** (-N) * math.pi ** ((1 + D) / 2.0)
                / math.gamma((1 + D + 2 * N) / 2.0))
    if fam is Family.CHEBYSHEV2:
        return (2.0 ** (-1 - N) * math.pi ** ((1 + D) / 2.0)
                / math.gamma((3 + D + 2 * N) / 2.0))
    if fam is Family.FERMI_DIRAC:
        nu = N + D / 2.0
        return ((2.0 * math.pi) ** (D / 2.0) * w.theta ** nu
                * fermi_integral_g(nu, w.z) / math.gamma(nu))
    if fam is Family.BOSE_EINSTEIN:
        nu = N + D / 2.0
        return ((2.0 * math.pi) ** (D / 2.0) * w.theta ** nu
                * bose_integral_h(nu, w.z) / math.gamma(nu))
    if fam is Family.GRAPHENE:
        m = D + 2 * N
        return (2.0 ** (D + N) * math.pi ** ((D - 1) / 2.0)
                * w.theta ** m * math.gamma((1 + D) / 2.0 + N)
                * fermi_integral_g(float(m), w.z) / math.gamma(m))
    if fam is Family.YUKAWA:
        return (math.pi ** (D / 2.0) / 2.0 ** (N - 1)
                * math.gamma(2 * N + D - 1) / math.gamma(N + D / 2.0)
                / w.mu ** (2 * N + D - 1))
    raise DomainError("no closed form for a custom weight; use moment_quadrature")


def _quadrature_scale(w: WeightSpec) -> float | None:
    """Interval split point for unbounded weights with interior structure."""
    fam = w.family
    if fam in (Family.FERMI_DIRAC, Family.BOSE_EINSTEIN):
        lnz = max(math.log(w.z), 0.0) if w.z else 0.0
        return math.sqrt(2.0 * w.theta * (1.0 + lnz))
    if fam is Family.GRAPHENE:
        return w.theta * (1.0 + max(math.log(w.z), 0.0))
    if fam is Family.YUKAWA:
        return 1.0 / w.mu
    if fam is Family.GAUSSIAN:
        return 1.0
    return None


def moment_quadrature(w: WeightSpec, D: int, N: int,
                      rel_tol: float = DEFAULT_REL_TOL) -> float:
    """I_{2N} by adaptive radial quadrature of the defining integral.

    Bounded supports are mapped through xi = xi_max sin t, which absorbs the
    inverse-square-root endpoint behaviour of the Chebyshev weights; infinite
    domains go through QUADPACK's semi-infinite transformation with a split
    at the family's interior scale.
    """
    w.validate_dimension(D)
    pref = _prefactor(D, N)
    power = 2 * N + D - 1

    if math.isfinite(w.xi_max):
        R = w.xi_max

        def g(t: float) -> float:
            x = R * math.sin(t)
            return float(w.radial(x, D)) * x ** power * R * math.cos(t)

        val, err = integrate.quad(g, 0.0, math.pi / 2.0, epsabs=0.0,
                                  epsrel=max(rel_tol / 10.0, 1e-13),
                                  limit=QUAD_LIMIT)
        results = [(val, err)]
    else:
        def f(x: float) -> float:
            return float(w.radial(x, D)) * x ** power

        split = _quadrature_scale(w)
        results = []
        lo = 0.0
        if split is not None:
            results.append(integrate.quad(f, lo, 4.0 * split, epsabs=0.0,
                                          epsrel=max(rel_tol / 10.0, 1e-13),
                                          limit=QUAD_LIMIT))
            lo = 4.0 * split
        results.append(integrate.quad(f, lo, np.inf, epsabs=0.0,
                                      epsrel=max(rel_tol / 10.0, 1e-13),
                                      limit=QUAD_LIMIT))

    value = math.fsum(r[0] for r in results)
    err = math.fsum(r[1] for r in results)
    if value <= 0.0:
        raise ConvergenceError("quadrature produced a non-positive moment",
                               achieved=math.inf)
    achieved = err / abs(value)
    if achieved > rel_tol:
        raise ConvergenceError(
            f"moment quadrature missed rel_tol={rel_tol:g}", achieved=achieved)
    return pref * value


def build_moment_table(w: WeightSpec, D: int, N_max: int = 4,
                       rel_tol: float = DEFAULT_REL_TOL,
                       force_quadrature: bool = False) -> MomentTable:
    """I_0..I_{2 N_max} via the closed forms when available, else quadrature."""
    w.validate_dimension(D)
    use_quad = force_quadrature or w.family is Family.CUSTOM
    if use_quad:
        vals = tuple(moment_quadrature(w, D, N, rel_tol) for N in range(N_max + 1))
        return MomentTable(D=D, values=vals, source="quadrature")
    vals = tuple(moment_analytic(w, D, N) for N in range(N_max + 1))
    return MomentTable(D=D, values=vals, source="analytic")


def graphene_series_i2n(D: int, N: int, theta: float, z: float) -> float:
    """Low-doping (z -> 1) series for the graphene I_{2N}, through (z-1)^2.

    Written in terms of the Dirichlet eta function, which keeps the
    coefficients finite at the orders where the raw zeta factors would hit
    the s = 1 pole (their prefactors vanish there at exactly the same rate).
    """
    m = D + 2 * N
    pref = (2.0 ** (D + N) * math.pi ** ((D - 1) / 2.0)
            * theta ** m * math.gamma((1 + D) / 2.0 + N))
    c0 = dirichlet_eta(m)
    c1 = dirichlet_eta(m - 1)
    c2 = 0.5 * (dirichlet_eta(m - 2) - dirichlet_eta(m - 1))
    dz = z - 1.0
    return pref * (c0 + c1 * dz + c2 * dz * dz)
