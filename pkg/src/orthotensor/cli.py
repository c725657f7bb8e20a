"""Command-line front end: batch commands with JSON output.

Exit codes: 0 pass, 1 verification failure, 2 domain error, 3 convergence
error. All output is a single JSON object; failures emit a machine-readable
error object on stdout before the non-zero exit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .coefficients import build_coefficients, residual_check
from .errors import ConvergenceError, DomainError
from .expansion import ChargeDistribution, potential_series, reconstruct
from .moments import (DEFAULT_REL_TOL, Family, WeightSpec, build_moment_table,
                      moment_analytic, moment_quadrature)
from .polynomials import eval_tensor, make_family, project_1d
from .verification import check_appendix_identities, gram_matrix

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3


@dataclass
class RunConfig:
    command: str
    weight: WeightSpec
    D: int
    order: int
    tolerance: float
    seed: int
    xi: tuple[float, ...] | None
    u: tuple[float, ...] | None
    charges_path: str | None
    out: str | None


def _weight_from_args(args) -> WeightSpec:
    try:
        fam = Family(args.weight)
    except ValueError:
        raise DomainError(f"unknown weight family {args.weight!r}") from None
    return WeightSpec(family=fam, theta=args.theta, z=args.z, mu=args.mu)


def _parse_vector(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise DomainError(f"could not parse vector {text!r}") from None


def _config(args) -> RunConfig:
    if args.tol <= 0:
        raise DomainError("tolerance must be positive")
    if args.dim < 1:
        raise DomainError("dimension must be >= 1")
    return RunConfig(
        command=args.command,
        weight=_weight_from_args(args),
        D=args.dim,
        order=args.order,
        tolerance=args.tol,
        seed=args.seed,
        xi=_parse_vector(args.xi) if args.xi else None,
        u=_parse_vector(args.u) if args.u else None,
        charges_path=args.charges,
        out=args.out,
    )


def cmd_moments(cfg: RunConfig) -> tuple[dict, int]:
    table = build_moment_table(cfg.weight, cfg.D)
    obj = table.to_json_obj()
    obj["weight"] = cfg.weight.describe()
    return obj, EXIT_OK


def cmd_coeffs(cfg: RunConfig) -> tuple[dict, int]:
    table = build_moment_table(cfg.weight, cfg.D)
    obj = build_coefficients(table, cfg.D).to_json_obj()
    obj["weight"] = cfg.weight.describe()
    return obj, EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    fam = make_family(cfg.weight, cfg.D, rel_tol=min(cfg.tolerance, DEFAULT_REL_TOL))
    report = gram_matrix(fam)
    residual = residual_check(fam.coeffs, fam.table)
    appendix = check_appendix_identities(fam.table, cfg.D)
    cross = 0.0
    if fam.table.source == "analytic":
        for N in range(5):
            analytic = moment_analytic(cfg.weight, cfg.D, N)
            quad = moment_quadrature(cfg.weight, cfg.D, N, DEFAULT_REL_TOL)
            cross = max(cross, abs(analytic - quad) / abs(analytic))
    achieved = max(report.max_deviation, residual, appendix, cross)
    obj = report.to_json_obj()
    obj["primitive_equation_residual"] = residual
    obj["contraction_identity_error"] = appendix
    obj["moment_cross_check_error"] = cross
    obj["achieved"] = achieved
    obj["tolerance"] = cfg.tolerance
    obj["pass"] = bool(achieved <= cfg.tolerance)
    return obj, EXIT_OK if achieved <= cfg.tolerance else EXIT_VERIFY_FAIL


def cmd_eval(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.xi is None:
        raise DomainError("eval needs --xi")
    fam = make_family(cfg.weight, cfg.D)
    tensor = eval_tensor(fam, cfg.order, np.asarray(cfg.xi))
    obj = tensor.to_json_obj()
    obj["weight"] = cfg.weight.describe()
    obj["xi"] = list(cfg.xi)
    return obj, EXIT_OK


def cmd_project1d(cfg: RunConfig) -> tuple[dict, int]:
    fam = make_family(cfg.weight, 1)
    arrays = project_1d(fam)
    return {
        "weight": cfg.weight.describe(),
        "coefficients_ascending_degree": [list(a) for a in arrays],
    }, EXIT_OK


def cmd_expand(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.xi is None or cfg.u is None:
        raise DomainError("expand needs --xi and --u")
    fam = make_family(cfg.weight, cfg.D)
    xiv = np.asarray(cfg.xi)
    uv = np.asarray(cfg.u)
    approx = reconstruct(fam, uv, xiv, cfg.order)
    direct = float(fam.weight.radial(float(np.linalg.norm(xiv - uv)), cfg.D))
    return {
        "weight": cfg.weight.describe(),
        "xi": list(cfg.xi), "u": list(cfg.u), "order": cfg.order,
        "reconstructed": approx,
        "direct": direct,
        "abs_error": abs(approx - direct),
    }, EXIT_OK


def cmd_multipole(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.xi is None or cfg.charges_path is None:
        raise DomainError("multipole needs --xi and --charges")
    fam = make_family(cfg.weight, cfg.D)
    rho = ChargeDistribution.from_csv(cfg.charges_path, cfg.D)
    xiv = np.asarray(cfg.xi)
    series = potential_series(fam, rho, xiv, cfg.order)
    direct = 0.0
    for pos, q in zip(rho.positions, rho.charges):
        direct += q * float(fam.weight.radial(
            float(np.linalg.norm(xiv - np.asarray(pos))), cfg.D))
    return {
        "weight": cfg.weight.describe(),
        "xi": list(cfg.xi), "order": cfg.order,
        "n_charges": len(rho.charges),
        "series": series,
        "direct_sum": direct,
        "abs_error": abs(series - direct),
    }, EXIT_OK


_COMMANDS = {
    "moments": cmd_moments,
    "coeffs": cmd_coeffs,
    "verify": cmd_verify,
    "gram": cmd_verify,
    "eval": cmd_eval,
    "project1d": cmd_project1d,
    "expand": cmd_expand,
    "multipole": cmd_multipole,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthotensor",
        description="Orthonormal tensor polynomials under a radial weight.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("moments", "coeffs", "verify", "gram", "eval", "project1d",
                 "expand", "multipole"):
        p = sub.add_parser(name)
        p.add_argument("--weight", required=True,
                       help="family: gaussian, legendre, chebyshev1, chebyshev2, "
                            "fermi_dirac, bose_einstein, graphene, yukawa")
        p.add_argument("--dim", type=int, default=1)
        p.add_argument("--order", type=int, default=4)
        p.add_argument("--theta", type=float, default=1.0)
        p.add_argument("--z", type=float, default=None)
        p.add_argument("--mu", type=float, default=None)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--xi", type=str, default=None,
                       help="comma-separated point, e.g. 0.3,0.4")
        p.add_argument("--u", type=str, default=None,
                       help="comma-separated displacement")
        p.add_argument("--charges", type=str, default=None,
                       help="CSV path: D position columns then the charge")
        p.add_argument("--out", type=str, default=None)
    return parser


def _emit(obj: dict, out_path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        obj, code = _COMMANDS[args.command](cfg)
    except DomainError as exc:
        _emit({"error": {"type": "domain", "message": str(exc)}}, args.out)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        _emit({"error": {"type": "convergence", "message": str(exc),
                         "achieved": exc.achieved}}, args.out)
        return EXIT_CONVERGENCE
    _emit(obj, cfg.out)
    return code


def entrypoint() -> None:
    raise SystemExit(main())
