"""Command-line front end.

Built-in scenarios pin the reference parameter sets:

* ex1: a = 2, beta = 3/10 (simply connected, closed-form checks)
* ex2: lambda = 4i/5, a = 5/13, c = 12/13, L = i (one-connected)
* ex3: the 3x3 symbol with three boundary components

Outputs are deterministic for a fixed configuration: sorted JSON keys,
repr-form floats, fixed row order in CSV. Commands exit nonzero when an
acceptance-relevant check fails, unless --report-only is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import domains, io, subnormal
from .curves import GridSpec, trace_branches, verify_generates_domain
from .errors import QdsymError
from .polys import CRatFun, CPoly
from .sections import self_commutator_rank
from .symbols import classify_symbol


@dataclass
class RunConfig:
    command: str
    input: str
    samples: int = 512
    grid: tuple = (512, 512)
    tol_root: float = 1e-9
    tol_rank: float = 1e-8
    backend: str = "float"
    output_dir: str = "qdsym-out"
    seed: int = 42
    report_only: bool = False
    actions: list = field(default_factory=list)
    deg_z: int | None = None
    deg_w: int | None = None


def _build_scenario(name: str):
    if name == "ex1":
        return domains.example1_build(2, Fraction(3, 10))
    if name == "ex2":
        return domains.example2_build(complex(Fraction(4, 5)) * 1j,
                                      Fraction(5, 13), Fraction(12, 13), 1j)
    if name == "ex3":
        return domains.example3_build()
    raise KeyError(name)


def _load_symbol(cfg: RunConfig):
    if cfg.input in ("ex1", "ex2", "ex3"):
        scn = _build_scenario(cfg.input)
        if cfg.input == "ex3":
            return scn, None
        return scn.F, scn
    with open(cfg.input) as fh:
        data = json.load(fh)
    F, _, _ = io.symbol_from_json(data)
    return F, None


def _out(cfg: RunConfig, name: str) -> Path:
    d = Path(cfg.output_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d / name


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    failures: list[str] = []
    try:
        if cfg.command == "symbol-build":
            F, _ = _load_symbol(cfg)
            flags = classify_symbol(F, seed=cfg.seed)
            with open(_out(cfg, "symbol.json"), "w") as fh:
                io.write_json(io.symbol_to_json(F), fh)
            with open(_out(cfg, "classify.json"), "w") as fh:
                io.write_json({
                    "normal": flags.normal,
                    "analytic_closed_disc": flags.analytic_closed_disc,
                    "nondegenerate": flags.nondegenerate,
                    "ndarn_member": flags.ndarn_member,
                }, fh)
            if flags.ndarn_member is not True:
                failures.append("symbol is not in the analytic normal class")

        elif cfg.command == "curve-trace":
            F, _ = _load_symbol(cfg)
            classify_symbol(F, seed=cfg.seed)
            trace = trace_branches(F, n_init=cfg.samples)
            with open(_out(cfg, "trace.csv"), "w") as fh:
                io.trace_to_csv(trace, fh)
            with open(_out(cfg, "gamma.svg"), "w") as fh:
                io.emit_svg(trace, fh)
            with open(_out(cfg, "trace.json"), "w") as fh:
                io.write_json({"component_count": trace.component_count,
                               "branches": trace.m,
                               "samples": len(trace.thetas),
                               "closure_perm": list(trace.closure_perm)}, fh)

        elif cfg.command == "domain-verify":
            F, _ = _load_symbol(cfg)
            classify_symbol(F, seed=cfg.seed)
            trace = trace_branches(F, n_init=cfg.samples)
            rep = verify_generates_domain(
                F, GridSpec(nx=cfg.grid[0], ny=cfg.grid[1]), trace=trace)
            with open(_out(cfg, "domain.json"), "w") as fh:
                io.write_json(io.domain_report_to_json(rep), fh)
            with open(_out(cfg, "domain.svg"), "w") as fh:
                io.emit_svg(trace, fh, mask=rep)
            if not rep.passed:
                failures.append(f"winding conditions {rep.conditions}")

        elif cfg.command == "params-compute":
            F, _ = _load_symbol(cfg)
            classify_symbol(F, seed=cfg.seed)
            params = subnormal.matrix_parameters(F)
            with open(_out(cfg, "params.json"), "w") as fh:
                io.write_json(io.params_to_json(params), fh)
            disc = subnormal.discriminant_poly(params)
            with open(_out(cfg, "discriminant.json"), "w") as fh:
                io.write_json({"Q": io.matrix_to_json(disc.Q.float_coeffs()),
                               "symmetry_defect": disc.symmetry_defect}, fh)
            rep = self_commutator_rank(F, N=32, tol=cfg.tol_rank)
            with open(_out(cfg, "commutator.json"), "w") as fh:
                io.write_json(io.section_report_to_json(rep), fh)
            if rep.rank != params.dimM:
                failures.append(
                    f"commutator rank {rep.rank} != dim M {params.dimM}")

        elif cfg.command == "quadrature-check":
            scn = _build_scenario(cfg.input) if cfg.input in ("ex1",) else None
            if scn is None:
                raise QdsymError("quadrature-check supports the ex1 scenario")
            nw = domains.schwartz_nodes_weights(scn)
            fs = [CRatFun(CPoly([1.0])), CRatFun(CPoly([0.0, 1.0])),
                  CRatFun(CPoly([0.0, 0.0, 1.0])),
                  CRatFun(CPoly([1.0]), CPoly([-5.0, 1.0]))]
            res = domains.verify_quadrature_identity(
                scn, fs, GridSpec(nx=cfg.grid[0], ny=cfg.grid[1]), nw=nw)
            with open(_out(cfg, "nodes.json"), "w") as fh:
                io.write_json(io.nodes_to_json(nw), fh)
            with open(_out(cfg, "quadrature.json"), "w") as fh:
                io.write_json({"residuals": res,
                               "functions": ["1", "z", "z^2", "1/(z-5)"]}, fh)
            if max(res) > 1e-3:
                failures.append(f"quadrature residuals {res}")

        elif cfg.command == "defining-eq":
            scn = _build_scenario(cfg.input)
            if cfg.input == "ex3":
                raise QdsymError("defining-eq supports ex1 and ex2")
            eq = domains.defining_equation(scn, deg_z=cfg.deg_z, deg_w=cfg.deg_w,
                                           backend=cfg.backend)
            with open(_out(cfg, "defining_eq.json"), "w") as fh:
                io.write_json({
                    "Q": io.matrix_to_json(eq.Q.float_coeffs()),
                    "symmetry_defect": eq.symmetry_defect,
                    "curve_residual": eq.curve_residual,
                    "spurious_z": [[z.real, z.imag] for z in eq.spurious_z],
                    "spurious_w": [[z.real, z.imag] for z in eq.spurious_w],
                }, fh)

        elif cfg.command == "scenario":
            failures.extend(_run_scenario(cfg))
        else:
            raise QdsymError(f"unknown command {cfg.command}")

    except (QdsymError, OSError, KeyError, json.JSONDecodeError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2

    for f in failures:
        print(f"FAIL {f}")
    if failures and not cfg.report_only:
        return 1
    return 0


def _run_scenario(cfg: RunConfig) -> list[str]:
    failures = []
    scn = _build_scenario(cfg.input)
    F = scn if cfg.input == "ex3" else scn.F
    actions = cfg.actions or ["trace"]

    trace = trace_branches(F, n_init=max(cfg.samples, 512))
    if "trace" in actions:
        with open(_out(cfg, "trace.csv"), "w") as fh:
            io.trace_to_csv(trace, fh)
        with open(_out(cfg, "gamma.svg"), "w") as fh:
            io.emit_svg(trace, fh)
        with open(_out(cfg, "trace.json"), "w") as fh:
            io.write_json({"component_count": trace.component_count,
                           "branches": trace.m,
                           "closure_perm": list(trace.closure_perm)}, fh)
    if "verify" in actions:
        rep = verify_generates_domain(
            F, GridSpec(nx=cfg.grid[0], ny=cfg.grid[1]), trace=trace)
        with open(_out(cfg, "domain.json"), "w") as fh:
            io.write_json(io.domain_report_to_json(rep), fh)
        if not rep.passed:
            failures.append(f"winding conditions {rep.conditions}")
    if "params" in actions:
        params = subnormal.matrix_parameters(F)
        with open(_out(cfg, "params.json"), "w") as fh:
            io.write_json(io.params_to_json(params), fh)
        rep = self_commutator_rank(F, N=32, tol=cfg.tol_rank)
        if rep.rank != params.dimM:
            failures.append(f"commutator rank {rep.rank} != dim M {params.dimM}")
    if "quadrature" in actions:
        if cfg.input != "ex1":
            failures.append("quadrature identity requires ex1")
        else:
            nw = domains.schwartz_nodes_weights(scn)
            fs = [CRatFun(CPoly([1.0])), CRatFun(CPoly([0.0, 1.0])),
                  CRatFun(CPoly([0.0, 0.0, 1.0])),
                  CRatFun(CPoly([1.0]), CPoly([-5.0, 1.0]))]
            res = domains.verify_quadrature_identity(
                scn, fs, GridSpec(nx=2048, ny=2048), nw=nw)
            with open(_out(cfg, "nodes.json"), "w") as fh:
                io.write_json(io.nodes_to_json(nw), fh)
            with open(_out(cfg, "quadrature.json"), "w") as fh:
                io.write_json({"residuals": res}, fh)
            if max(res) > 1e-3:
                failures.append(f"quadrature residuals {res}")
    if "defining-eq" in actions:
        if cfg.input == "ex3":
            failures.append("defining equation requires ex1 or ex2")
        else:
            eq = domains.defining_equation(scn, deg_z=cfg.deg_z, deg_w=cfg.deg_w,
                                           backend=cfg.backend)
            with open(_out(cfg, "defining_eq.json"), "w") as fh:
                io.write_json({"Q": io.matrix_to_json(eq.Q.float_coeffs()),
                               "curve_residual": eq.curve_residual}, fh)
    return failures


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qdsym",
        description="quadrature domains from rational normal matrix symbols")
    ap.add_argument("command", choices=[
        "symbol-build", "curve-trace", "domain-verify", "params-compute",
        "quadrature-check", "defining-eq", "scenario"])
    ap.add_argument("input", help="builtin scenario id (ex1|ex2|ex3) or symbol JSON path")
    ap.add_argument("--samples", type=int, default=512)
    ap.add_argument("--grid", type=int, nargs=2, default=[512, 512], metavar=("W", "H"))
    ap.add_argument("--tol-root", type=float, default=1e-9)
    ap.add_argument("--tol-rank", type=float, default=1e-8)
    ap.add_argument("--backend", choices=["float", "exact"], default="float")
    ap.add_argument("--out", default="qdsym-out")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--report-only", action="store_true")
    ap.add_argument("--deg-z", type=int, default=None)
    ap.add_argument("--deg-w", type=int, default=None)
    for act in ("trace", "verify", "params", "quadrature", "defining-eq"):
        ap.add_argument(f"--{act}", dest="actions", action="append_const",
                        const=act)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.tol_root <= 0 or args.tol_rank <= 0:
        json.dump({"error": "ValueError", "message": "tolerances must be positive"},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2
    cfg = RunConfig(
        command=args.command, input=args.input, samples=args.samples,
        grid=tuple(args.grid), tol_root=args.tol_root, tol_rank=args.tol_rank,
        backend=args.backend, output_dir=args.out, seed=args.seed,
        report_only=args.report_only, actions=args.actions or [],
        deg_z=args.deg_z, deg_w=args.deg_w)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
