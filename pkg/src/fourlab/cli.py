"""Command-line front end.

Subcommands:

    verify   residuals of the five defining identities for one operator
    explore  full observational battery (commutator, translation,
             uncertainty, kernel flatness), with required checks for the
             canonical transform
    pauli    conjugate-pair experiment across a family of transforms
    kernel   kernel flatness scan, optional full kernel export
    plan     generate or validate regrouping plans

Exit codes: 0 all good, 1 a required check failed (or a plan failed
validation), 2 usage or configuration error.  Runs are deterministic for a
fixed config except for the ``generated_at`` metadata field.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis, reports
from .basis import BasisSpec, basis_matrix
from .errors import ConfigError, FourlabError, PlanError
from .operators import (
    RegroupingPlan,
    fourier_operator,
    k_operator,
    kernel_matrix,
    make_regrouping_plan,
)
from .states import pauli_pair

_CONFIG_KEYS = {
    "dim", "quad_order", "seed", "plan", "window", "phi", "a",
    "interior", "states", "tolerances", "plan_seeds",
}


@dataclass(frozen=True)
class RunConfig:
    dim: int = 128
    quad_order: int = 256
    seed: int = 7
    plan: str = "fourier"
    window: float = 3.0
    phi: float = math.pi / 2
    a: float = 0.1
    interior: int | None = None
    states: int = 100
    tolerances: dict = field(default_factory=dict)
    plan_seeds: tuple = (1, 2, 3)

    def __post_init__(self):
        BasisSpec(self.dim, self.quad_order)  # reuse its dimension validation
        if self.window <= 0:
            raise ConfigError(f"window must be positive, got {self.window}")
        if self.states < 1:
            raise ConfigError(f"states must be >= 1, got {self.states}")
        for name, val in self.tolerances.items():
            if not (isinstance(val, (int, float)) and val > 0):
                raise ConfigError(f"tolerance {name!r} must be a positive number, got {val!r}")

    def spec(self) -> BasisSpec:
        return BasisSpec(self.dim, self.quad_order)


def _parse_tol(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(val)
        except ValueError:
            raise ConfigError(f"tolerance {name!r} has non-numeric value {val!r}") from None
    return out


def build_config(args) -> RunConfig:
    """Config file first, then flags on top (flags win)."""
    data = {}
    if getattr(args, "config", None):
        raw = reports.read_json(args.config)
        if not isinstance(raw, dict):
            raise ConfigError(f"config {args.config} must hold a JSON object")
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data.update(raw)
    for key in ("dim", "quad_order", "seed", "plan", "window", "phi", "a",
                "interior", "states"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    cli_tol = _parse_tol(getattr(args, "tol", None))
    if cli_tol:
        data["tolerances"] = {**data.get("tolerances", {}), **cli_tol}
    if getattr(args, "plan_seeds", None):
        data["plan_seeds"] = tuple(int(s) for s in args.plan_seeds.split(","))
    if "tolerances" in data and not isinstance(data["tolerances"], dict):
        raise ConfigError("tolerances must be an object of name -> value")
    try:
        return RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _load_plan(ref: str, dim: int) -> RegroupingPlan | None:
    """None means the canonical transform; otherwise a plan file or seed:<n>."""
    if ref == "fourier":
        return None
    if ref.startswith("seed:"):
        return make_regrouping_plan(dim, int(ref[5:]))
    plan = RegroupingPlan.from_dict(reports.read_json(ref))
    if plan.dim != dim:
        raise ConfigError(f"plan dim {plan.dim} does not match configured dim {dim}")
    return plan


def _build_operator(cfg: RunConfig):
    plan = _load_plan(cfg.plan, cfg.dim)
    if plan is None:
        return fourier_operator(cfg.dim), None
    return k_operator(plan), plan


def _print_rows(rows):
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        print(f"  {r.name:<24} residual={r.residual:.6e}  tol={r.tolerance:.1e}  {status}")


def _meta(cfg: RunConfig, plan) -> dict:
    return {
        "generated_at": reports.timestamp(),
        "config": {
            "dim": cfg.dim,
            "quad_order": cfg.quad_order,
            "seed": cfg.seed,
            "plan": cfg.plan if plan is None else plan.as_dict(),
            "window": cfg.window,
        },
    }


def cmd_verify(args) -> int:
    cfg = build_config(args)
    op, plan = _build_operator(cfg)
    report = analysis.verify_symmetry(op, tolerances=cfg.tolerances or None)
    print(f"operator {report.operator} (dim {report.dim})")
    _print_rows(report.rows)
    print("result:", "PASS" if report.passed else "FAIL")
    if args.out:
        payload = report.as_dict()
        payload["meta"] = _meta(cfg, plan)
        reports.write_json(payload, args.out)
    return 0 if report.passed else 1


def cmd_explore(args) -> int:
    cfg = build_config(args)
    op, plan = _build_operator(cfg)
    basis = basis_matrix(cfg.spec())
    report = analysis.explore(
        op,
        basis,
        seed=cfg.seed,
        state_count=cfg.states,
        window=cfg.window,
        a=cfg.a,
        interior=cfg.interior,
        tolerances=cfg.tolerances or None,
    )
    print(f"operator {report.operator} (dim {report.dim})")
    comm = report.sections["commutator"]
    trans = report.sections["translation"]
    unc = report.sections["uncertainty"]
    kern = report.sections["kernel"]
    print(f"  commutator interior residual  {comm['residual_interior']:.6e} (full {comm['residual_full']:.3e})")
    print(f"  translation interior residual {trans['residual_interior']:.6e} (a={trans['a']}, guard {trans['guard_band']})")
    print(f"  uncertainty min product       {unc['min_product']:.6f} (min margin {unc['min_margin']:.3e})")
    print(f"  kernel max deviation          {kern['max_dev']:.6e} (window {kern['window']})")
    if "ratio_vs_fourier" in kern:
        print(f"  kernel deviation ratio vs canonical  {kern['ratio_vs_fourier']:.3f}")
    if report.checks:
        _print_rows(report.checks)
    print("result:", "PASS" if report.passed else "FAIL")
    if args.out:
        payload = report.as_dict()
        payload["meta"] = _meta(cfg, plan)
        reports.write_json(payload, args.out)
    return 0 if report.passed else 1


def cmd_pauli(args) -> int:
    cfg = build_config(args)
    basis = basis_matrix(cfg.spec())
    f, fbar = pauli_pair(cfg.phi, cfg.dim)
    transforms = [fourier_operator(cfg.dim)]
    transforms += [k_operator(make_regrouping_plan(cfg.dim, s)) for s in cfg.plan_seeds]
    report = analysis.pauli_report(f, fbar, transforms, basis, cfg.phi)
    print(f"pair overlap |<f, fbar>| = {abs(report.overlap):.6e}")
    print(f"state distance            = {report.state_distance:.6f}")
    print(f"position weight distance  = {report.position_distance:.6e}")
    for row in report.rows:
        print(f"  {row.transform:<24} weight distance {row.weight_distance:.6e}")
    if args.out:
        payload = report.as_dict()
        payload["meta"] = _meta(cfg, None)
        reports.write_json(payload, args.out)
    return 0


def cmd_kernel(args) -> int:
    cfg = build_config(args)
    op, plan = _build_operator(cfg)
    basis = basis_matrix(cfg.spec())
    scan = analysis.unbiasedness_scan(op, basis, cfg.window)
    print(f"operator {scan.operator} (dim {scan.dim})")
    print(f"  window {scan.window} covers {scan.node_count} nodes")
    print(f"  max relative modulus deviation {scan.max_dev:.6e}")
    print(f"  rms relative modulus deviation {scan.rms_dev:.6e}")
    if args.out:
        payload = scan.as_dict()
        payload["meta"] = _meta(cfg, plan)
        reports.write_json(payload, args.out)
    if args.matrix_out:
        kappa = kernel_matrix(op, basis)
        reports.write_kernel_csv(basis.grid, kappa, args.matrix_out)
    return 0


def cmd_plan(args) -> int:
    if args.plan_cmd == "generate":
        plan = make_regrouping_plan(args.dim, args.seed)
        reports.write_json(plan.as_dict(), args.out)
        tag = "canonical" if plan.is_fourier() else "alternative"
        print(f"wrote {tag} plan (dim {plan.dim}, seed {plan.seed}) to {args.out}")
        return 0
    # validate
    try:
        plan = RegroupingPlan.from_dict(reports.read_json(args.plan_file))
    except (PlanError, KeyError, ValueError) as exc:
        print(f"invalid plan: {exc}")
        return 1
    tag = "canonical" if plan.is_fourier() else "alternative"
    sizes = ", ".join(str(len(getattr(plan, h))) for h in ("h0", "h1", "h2", "h3"))
    print(f"valid {tag} plan: dim {plan.dim}, class sizes {sizes}")
    return 0


def _add_common(p: argparse.ArgumentParser, with_plan=True):
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--dim", type=int)
    p.add_argument("--quad-order", dest="quad_order", type=int)
    p.add_argument("--seed", type=int)
    if with_plan:
        p.add_argument("--plan", help="'fourier', 'seed:<n>', or a plan JSON file")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                   help="override a check tolerance (repeatable)")
    p.add_argument("--out", help="write a JSON report here")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fourlab",
                                 description="Fourier-like operators on a truncated Hermite basis")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="check the defining identities")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("explore", help="run the full observational battery")
    _add_common(p)
    p.add_argument("--window", type=float)
    p.add_argument("--states", type=int)
    p.add_argument("--a", type=float, help="translation step")
    p.add_argument("--interior", type=int)
    p.set_defaults(fn=cmd_explore)

    p = sub.add_parser("pauli", help="conjugate-pair experiment")
    _add_common(p, with_plan=False)
    p.add_argument("--phi", type=float)
    p.add_argument("--plan-seeds", help="comma-separated seeds for alternative transforms")
    p.set_defaults(fn=cmd_pauli)

    p = sub.add_parser("kernel", help="kernel flatness scan")
    _add_common(p)
    p.add_argument("--window", type=float)
    p.add_argument("--matrix-out", help="also export the full kernel as CSV")
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("plan", help="generate or validate regrouping plans")
    plan_sub = p.add_subparsers(dest="plan_cmd", required=True)
    g = plan_sub.add_parser("generate")
    g.add_argument("--dim", type=int, default=128)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    v = plan_sub.add_parser("validate")
    v.add_argument("plan_file")
    p.set_defaults(fn=cmd_plan)

    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FourlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: unknown name {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
