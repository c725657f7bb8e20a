"""Closed-form solution of the orthonormalization system for orders 0..4.

Fourteen coefficients define the five polynomials; they follow from the
stored moments through the ratio J_{2K} = I_{2K}^2 / (I_{2K+2} I_{2K-2}), the
gap factor Delta_{2K} = sqrt(2 / ((D+2K) - J_{2K} (D+2K-2))) and the minor
determinants delta_{2K} = I_{2K-2} I_{2K+2} (D+2K) - I_{2K}^2 (D+2K-2).

The positive square roots are taken throughout; the negative branch (every
sign flipped) is exposed behind `negative_roots` but is not the tested
convention. The order-4 scalar coefficients from the closed forms are gated
on the primitive orthonormality equations at build time; if they ever missed,
the primitive system itself is solved numerically (root continuous with the
unit-moment limit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError, DomainError, ExistenceError
from .moments import MomentTable

__all__ = ["CoefficientSet", "j_ratio", "delta_cap", "build_coefficients",
           "residual_check", "residual_breakdown"]

_D4_GATE = 1e-8


@dataclass(frozen=True)
class CoefficientSet:
    """The 14 coefficients of the order-0..4 polynomials plus intermediates."""

    D: int
    c: tuple[float, float, float, float, float]          # c_0..c_4
    c_prime: tuple[float, float, float]                  # c'_2..c'_4
    c_bar: tuple[float, float, float]                    # cbar_2..cbar_4
    d4: float
    d4_prime: float
    d4_bar: float
    j: tuple[float, float, float]                        # J_2, J_4, J_6
    delta_cap: tuple[float, float, float]                # Delta_2, Delta_4, Delta_6
    delta_small: tuple[float, float, float]              # delta_2, delta_4, delta_6

    def c_prime_k(self, K: int) -> float:
        return self.c_prime[K - 2]

    def c_bar_k(self, K: int) -> float:
        return self.c_bar[K - 2]

    def to_json_obj(self) -> dict:
        return {
            "D": self.D,
            "c0": self.c[0], "c1": self.c[1], "c2": self.c[2],
            "c3": self.c[3], "c4": self.c[4],
            "c_prime2": self.c_prime[0], "c_prime3": self.c_prime[1],
            "c_prime4": self.c_prime[2],
            "c_bar2": self.c_bar[0], "c_bar3": self.c_bar[1],
            "c_bar4": self.c_bar[2],
            "d4": self.d4, "d4_prime": self.d4_prime, "d4_bar": self.d4_bar,
            "intermediates": {
                "J2": self.j[0], "J4": self.j[1], "J6": self.j[2],
                "Delta2": self.delta_cap[0], "Delta4": self.delta_cap[1],
                "Delta6": self.delta_cap[2],
                "delta2": self.delta_small[0], "delta4": self.delta_small[1],
                "delta6": self.delta_small[2],
            },
        }


def j_ratio(table: MomentTable, K: int) -> float:
    """J_{2K} = I_{2K}^2 / (I_{2K+2} I_{2K-2})."""
    if not 1 <= K <= 3:
        raise DomainError("j_ratio is defined for K in 1..3")
    return table.i2n(2 * K) ** 2 / (table.i2n(2 * K + 2) * table.i2n(2 * K - 2))


def delta_cap(table: MomentTable, D: int, K: int) -> float:
    """Delta_{2K}; raises ExistenceError when the radicand is not positive."""
    if D != table.D:
        raise DomainError(f"dimension {D} does not match table (D={table.D})")
    radicand = (D + 2 * K) - j_ratio(table, K) * (D + 2 * K - 2)
    if radicand <= 0.0:
        raise ExistenceError(
            f"Delta_{2 * K} does not exist: (D+{2 * K}) - J_{2 * K}*(D+{2 * K - 2}) "
            f"= {radicand:.6g} <= 0")
    return math.sqrt(2.0 / radicand)


def _delta_small(table: MomentTable, D: int, K: int) -> float:
    return (table.i2n(2 * K - 2) * table.i2n(2 * K + 2) * (D + 2 * K)
            - table.i2n(2 * K) ** 2 * (D + 2 * K - 2))


def build_coefficients(table: MomentTable, D: int | None = None, *,
                       negative_roots: bool = False) -> CoefficientSet:
    """Solve for all 14 coefficients from a populated moment table."""
    if D is None:
        D = table.D
    if D != table.D:
        raise DomainError(f"dimension {D} does not match table (D={table.D})")
    if table.n_max < 4:
        raise DomainError("coefficient construction needs moments through I_8")
    sign = -1.0 if negative_roots else 1.0

    I = [table.i2n(2 * n) for n in range(5)]
    c = tuple(sign / math.sqrt(I[K]) for K in range(5))
    js = tuple(j_ratio(table, K) for K in (1, 2, 3))
    caps = tuple(sign * delta_cap(table, D, K) for K in (1, 2, 3))
    smalls = tuple(_delta_small(table, D, K) for K in (1, 2, 3))

    c_bar = tuple(c[K] * (-1.0 + caps[K - 2]) / (D + 2 * K - 4) for K in (2, 3, 4))
    c_prime = tuple(-c[K] * (I[K - 1] / I[K - 2]) * caps[K - 2] for K in (2, 3, 4))

    d2, d4s, d6 = smalls
    radicand = d2 * d6 * (D + 4) - d4s ** 2 * D
    if radicand <= 0.0:
        raise ExistenceError(
            f"d4 does not exist: delta_2*delta_6*(D+4) - delta_4^2*D "
            f"= {radicand:.6g} <= 0")
    d4 = sign * math.sqrt(8.0 * d4s ** 2 * I[2] / d2) / math.sqrt(radicand)
    d4_bar = (d2 / (d4s * D * (D + 2)) * d4
              + c[4] * (D - 2.0 * (D + 2) * caps[2]) / (D * (D + 2) * (D + 4)))
    d4_prime = (-d4 / D * (I[0] / I[1] + I[2] / I[1] * d2 / d4s)
                + 2.0 * I[3] * caps[2] * c[4] / (I[2] * D))

    cs = CoefficientSet(D=D, c=c, c_prime=c_prime, c_bar=c_bar,
                        d4=d4, d4_prime=d4_prime, d4_bar=d4_bar,
                        j=js, delta_cap=caps, delta_small=smalls)

    gate = max(abs(r) for name, r in residual_breakdown(cs, table).items()
               if name.startswith("order4"))
    if gate > _D4_GATE:
        d4, d4_prime, d4_bar = _solve_order4_scalars(table, D, cs)
        cs = CoefficientSet(D=D, c=c, c_prime=c_prime, c_bar=c_bar,
                            d4=d4, d4_prime=d4_prime, d4_bar=d4_bar,
                            j=js, delta_cap=caps, delta_small=smalls)
        gate = max(abs(r) for name, r in residual_breakdown(cs, table).items()
                   if name.startswith("order4"))
        if gate > _D4_GATE:
            raise ConsistencyError(
                f"order-4 scalar coefficients violate the primitive equations "
                f"(residual {gate:.3e}) even after the numeric solve")
    return cs


def _solve_order4_scalars(table: MomentTable, D: int,
                          cs: CoefficientSet) -> tuple[float, float, float]:
    """Solve the primitive order-4 system for (d4, d4', d4bar).

    The two cross-orthogonality equations are linear in the three unknowns;
    expressing d4' and d4bar affinely in d4 reduces the normalization to a
    quadratic in d4, whose positive root matches the chosen sign convention.
    """
    I = [table.i2n(2 * n) for n in range(5)]
    c2, cp2, cb2 = cs.c[2], cs.c_prime[0], cs.c_bar[0]
    c4, cp4, cb4 = cs.c[4], cs.c_prime[2], cs.c_bar[2]

    # a*d4 + b*d4' + e*d4bar = r, from the order-0 and order-2 conditions
    a1, b1, e1 = I[0], I[1] * D, I[2] * (D + 2) * D
    r1 = -(c4 * I[2] + 2.0 * (cp4 * I[1] + cb4 * I[2] * (D + 2)))

    a2 = c2 * I[1] + (cp2 * I[0] + cb2 * I[1] * D)
    b2 = c2 * I[2] * (D + 2) + (cp2 * I[1] + cb2 * I[2] * (D + 2)) * D
    e2 = c2 * I[3] * (D + 4) * (D + 2) + (cp2 * I[2] + cb2 * I[3] * (D + 4)) * (D + 2) * D
    r2 = -(c4 * c2 * I[3]
           + c4 * (cp2 * I[2] + cb2 * I[3] * (D + 4))
           + 2.0 * c2 * (cp4 * I[2] + cb4 * I[3] * (D + 4))
           + 2.0 * (cp4 * cp2 * I[1]
                    + (cb4 * cp2 + cp4 * cb2) * I[2] * (D + 2)
                    + cb4 * cb2 * I[3] * (D + 4) * (D + 2)))

    det = b1 * e2 - b2 * e1
    if det == 0.0:
        raise ConsistencyError("degenerate linear system for the order-4 scalars")
    # d4' = p1 + q1*d4, d4bar = p2 + q2*d4
    p1 = (r1 * e2 - r2 * e1) / det
    q1 = -(a1 * e2 - a2 * e1) / det
    p2 = (b1 * r2 - b2 * r1) / det
    q2 = -(b1 * a2 - b2 * a1) / det

    def norm_residual(d4: float) -> float:
        dp = p1 + q1 * d4
        db = p2 + q2 * d4
        return _order4_norm_equation(I, D, c4, cp4, cb4, d4, dp, db)

    # quadratic A t^2 + B t + C through three evaluations
    f0 = norm_residual(0.0)
    f1 = norm_residual(1.0)
    fm1 = norm_residual(-1.0)
    A = 0.5 * (f1 + fm1) - f0
    B = 0.5 * (f1 - fm1)
    C = f0
    disc = B * B - 4.0 * A * C
    if disc < 0.0 or A == 0.0:
        raise ExistenceError("order-4 primitive system has no real solution")
    roots = ((-B + math.sqrt(disc)) / (2.0 * A), (-B - math.sqrt(disc)) / (2.0 * A))
    d4 = max(roots)  # positive-root convention (unit-moment limit gives +1)
    return d4, p1 + q1 * d4, p2 + q2 * d4


def _order4_norm_equation(I, D, c4, cp4, cb4, d4, dp4, db4) -> float:
    return (I[4] * c4 ** 2
            + 4.0 * c4 * (cp4 * I[3] + cb4 * I[4] * (D + 6))
            + 2.0 * c4 * (d4 * I[2] + dp4 * I[3] * (D + 4)
                          + db4 * I[4] * (D + 6) * (D + 4))
            + 4.0 * (cp4 * d4 * I[1]
                     + (cp4 * dp4 + cb4 * d4) * I[2] * (D + 2)
                     + (cb4 * dp4 + cp4 * db4) * I[3] * (D + 4) * (D + 2)
                     + cb4 * db4 * I[4] * (D + 6) * (D + 4) * (D + 2))
            + 4.0 * (cp4 ** 2 * I[2] + 2.0 * cp4 * cb4 * I[3] * (D + 4)
                     + cb4 ** 2 * I[4] * (D + 6) * (D + 4))
            + (d4 ** 2 * I[0] + 2.0 * d4 * dp4 * I[1] * D
               + (dp4 ** 2 + 2.0 * d4 * db4) * I[2] * (D + 2) * D
               + 2.0 * dp4 * db4 * I[3] * (D + 4) * (D + 2) * D
               + db4 ** 2 * I[4] * (D + 6) * (D + 4) * (D + 2) * D))


def residual_breakdown(cs: CoefficientSet, table: MomentTable) -> dict[str, float]:
    """Residual of every primitive orthonormalization equation, each
    normalized by the magnitude of its largest contributing term."""
    D = cs.D
    I = [table.i2n(2 * n) for n in range(5)]
    c0, c1, c2, c3, c4 = cs.c
    cp2, cp3, cp4 = cs.c_prime
    cb2, cb3, cb4 = cs.c_bar
    d4, dp4, db4 = cs.d4, cs.d4_prime, cs.d4_bar

    def norm(terms: list[float], target: float = 0.0) -> float:
        scale = max(max(abs(t) for t in terms), abs(target), 1e-300)
        return (math.fsum(terms) - target) / scale

    eqs = {
        "norm0": norm([c0 ** 2 * I[0]], 1.0),
        "norm1": norm([c1 ** 2 * I[1]], 1.0),
        "cross02": norm([I[1] * c2, D * I[1] * cb2, I[0] * cp2]),
        "norm2_lead": norm([c2 ** 2 * I[2]], 1.0),
        "norm2_trace": norm([c2 ** 2 * I[2], 2.0 * (D + 2) * I[2] * c2 * cb2,
                             2.0 * I[1] * c2 * cp2, cb2 ** 2 * D * (D + 2) * I[2],
                             2.0 * D * I[1] * cb2 * cp2, cp2 ** 2 * I[0]]),
        "cross13": norm([c3 * I[2], cb3 * I[2] * (D + 2), cp3 * I[1]]),
        "norm3_lead": norm([c3 ** 2 * I[3]], 1.0),
        "norm3_trace": norm([c3 ** 2 * I[3], 2.0 * I[3] * (D + 4) * c3 * cb3,
                             2.0 * I[2] * c3 * cp3, I[1] * cp3 ** 2,
                             2.0 * I[2] * (D + 2) * cb3 * cp3,
                             I[3] * (D + 2) * (D + 4) * cb3 ** 2]),
        "order4_cross0": norm([c4 * I[2], 2.0 * cp4 * I[1],
                               2.0 * cb4 * I[2] * (D + 2), d4 * I[0],
                               dp4 * I[1] * D, db4 * I[2] * (D + 2) * D]),
        "order4_cross2_lead": norm([c4 * I[3], cp4 * I[2], cb4 * I[3] * (D + 4)]),
        "order4_cross2_trace": norm([
            c4 * c2 * I[3],
            c4 * cp2 * I[2], c4 * cb2 * I[3] * (D + 4),
            2.0 * c2 * cp4 * I[2], 2.0 * c2 * cb4 * I[3] * (D + 4),
            2.0 * cp4 * cp2 * I[1],
            2.0 * (cb4 * cp2 + cp4 * cb2) * I[2] * (D + 2),
            2.0 * cb4 * cb2 * I[3] * (D + 4) * (D + 2),
            c2 * d4 * I[1], c2 * dp4 * I[2] * (D + 2),
            c2 * db4 * I[3] * (D + 4) * (D + 2),
            d4 * cp2 * I[0], (d4 * cb2 + dp4 * cp2) * I[1] * D,
            (dp4 * cb2 + db4 * cp2) * I[2] * (D + 2) * D,
            db4 * cb2 * I[3] * (D + 4) * (D + 2) * D]),
        "order4_norm_lead": norm([I[4] * c4 ** 2], 1.0),
        "order4_norm_pair": norm([I[4] * c4 ** 2,
                                  2.0 * c4 * cp4 * I[3],
                                  2.0 * c4 * cb4 * I[4] * (D + 6),
                                  cp4 ** 2 * I[2],
                                  2.0 * cp4 * cb4 * I[3] * (D + 4),
                                  cb4 ** 2 * I[4] * (D + 6) * (D + 4)]),
        "order4_norm_trace": norm([
            I[4] * c4 ** 2,
            4.0 * c4 * cp4 * I[3], 4.0 * c4 * cb4 * I[4] * (D + 6),
            2.0 * c4 * d4 * I[2], 2.0 * c4 * dp4 * I[3] * (D + 4),
            2.0 * c4 * db4 * I[4] * (D + 6) * (D + 4),
            4.0 * cp4 * d4 * I[1],
            4.0 * (cp4 * dp4 + cb4 * d4) * I[2] * (D + 2),
            4.0 * (cb4 * dp4 + cp4 * db4) * I[3] * (D + 4) * (D + 2),
            4.0 * cb4 * db4 * I[4] * (D + 6) * (D + 4) * (D + 2),
            4.0 * cp4 ** 2 * I[2], 8.0 * cp4 * cb4 * I[3] * (D + 4),
            4.0 * cb4 ** 2 * I[4] * (D + 6) * (D + 4),
            d4 ** 2 * I[0], 2.0 * d4 * dp4 * I[1] * D,
            (dp4 ** 2 + 2.0 * d4 * db4) * I[2] * (D + 2) * D,
            2.0 * dp4 * db4 * I[3] * (D + 4) * (D + 2) * D,
            db4 ** 2 * I[4] * (D + 6) * (D + 4) * (D + 2) * D]),
    }
    return eqs


def residual_check(cs: CoefficientSet, table: MomentTable) -> float:
    """Maximum absolute normalized residual over all primitive equations."""
    return max(abs(v) for v in residual_breakdown(cs, table).values())
