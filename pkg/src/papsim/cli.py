"""Command-line entry point: ``papsim {run,validate,vessel,economics}``.

Exit codes: 0 success, 1 invalid input, 2 flowsheet did not converge.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import econ as econ_mod
from . import report
from . import vessel as vessel_mod
from .errors import BlockError, FileUnreadable, ParseError, PapsimError
from .plant import PlantDefinition, load_raw, validate_raw
from .solver import SolveResult, build_flowsheet, mass_closure, solve

log = logging.getLogger("papsim")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_CONVERGED = 2


@dataclass
class RunArtifacts:
    stream_table: str | None = None
    econ_report: econ_mod.EconReport | None = None
    cash_flow: str | None = None
    vessel_reports: dict[str, str] = field(default_factory=dict)
    convergence_log: list[float] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    files: dict[str, str] = field(default_factory=dict)


def _round(x, nd=6):
    return None if x is None else round(float(x), nd)


def _kpis(plant: PlantDefinition, result: SolveResult | None, rep, flowsheet=None):
    out: dict = {"plant": plant.name}
    if result is not None:
        out["converged"] = result.converged
        out["iterations"] = result.iterations
        if plant.product:
            s = result.streams[plant.product["stream"]]
            n = s.flow(plant.product["component"])
            out["product_kmol_h"] = _round(n)
            out["product_purity"] = _round(n / s.total_flow if s.total_flow else 0.0)
        if flowsheet is not None:
            out["mass_closure_rel"] = _round(mass_closure(flowsheet, result, plant.registry)[2], 12)
    if rep is not None:
        out.update(
            payback_years=_round(rep.payback_years),
            payback_raw_years=_round(rep.payback_raw_years),
            roi_percent=_round(rep.roi_stated),
            roi_composed_percent=_round(rep.roi_composed),
            emi_crore=_round(rep.emi),
            revenue_crore=_round(rep.revenue),
            fixed_cost_crore=_round(rep.fixed_cost),
            cumulative_cash_crore=_round(rep.cumulative_final),
        )
    return out


def _cross_check(plant, result):
    e = plant.economics
    if result is None or e is None or not e.material_streams:
        return None
    hours = e.hours_per_year
    quantities = {m.name: m.quantity for m in e.material_items}
    out = {}
    for comp, sid in e.material_streams.items():
        kg = result.streams[sid].flow(comp) * plant.registry[comp].molar_mass * hours
        out[comp] = (kg, quantities.get(comp, 0.0))
    return out


def execute(plant: PlantDefinition, report_dir=None, *, options=None, fx=None,
            skip_flowsheet=False, skip_economics=False, init="zero"):
    """Solve, size vessels and run economics; optionally write the artifact files.

    Returns ``(artifacts, exit_code)``.
    """
    art = RunArtifacts()
    result = flowsheet = None
    code = EXIT_OK
    if not skip_flowsheet:
        flowsheet = build_flowsheet(plant)
        initial = plant.tear_guesses if init == "guess" else None
        result = solve(flowsheet, options or plant.solve_options, plant.registry,
                       initial=initial, raise_on_failure=False)
        art.stream_table = report.streams_csv(result.streams, plant.registry)
        art.convergence_log = list(result.residual_history)
        if not result.converged:
            code = EXIT_NOT_CONVERGED
        for vid, spec in plant.vessels.items():
            art.vessel_reports[vid] = vessel_mod.format_report(vid, spec, vessel_mod.design(spec))
    rep = None
    if not skip_economics and plant.economics is not None:
        e = plant.economics if fx is None else plant.economics.with_fx(fx)
        rep = econ_mod.evaluate(e)
        art.econ_report = rep
        art.cash_flow = report.cashflow_csv(rep)
    art.summary = _kpis(plant, result, rep, flowsheet)

    files = {}
    if art.stream_table is not None:
        files["streams.csv"] = art.stream_table
        files["convergence.csv"] = report.convergence_csv(art.convergence_log)
        for vid, text in art.vessel_reports.items():
            files[f"vessel_{vid}.txt"] = text
    if rep is not None:
        files["cashflow.csv"] = art.cash_flow
        files["economics.txt"] = report.economics_text(rep, _cross_check(plant, result))
    files["summary.json"] = report.summary_json(art.summary)
    art.files = files
    if report_dir is not None:
        out = Path(report_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text, encoding="utf-8")
    return art, code


def _load_valid(path):
    try:
        raw = load_raw(path)
    except (FileUnreadable, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return None
    diags = validate_raw(raw)
    if diags:
        for d in diags:
            print(d, file=sys.stderr)
        return None
    return PlantDefinition.from_raw(raw)


def cmd_validate(args) -> int:
    try:
        raw = load_raw(args.definition)
    except (FileUnreadable, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    diags = validate_raw(raw)
    for d in diags:
        print(d)
    if not diags:
        print(f"{args.definition}: OK")
    return EXIT_INVALID if diags else EXIT_OK


def _solve_options(plant, args):
    opts = plant.solve_options
    changes = {}
    if args.tol is not None:
        changes["tolerance"] = args.tol
    if args.max_iter is not None:
        changes["max_iterations"] = args.max_iter
    if args.accel is not None:
        changes["acceleration"] = args.accel
    return replace(opts, **changes) if changes else opts


def cmd_run(args) -> int:
    plant = _load_valid(args.definition)
    if plant is None:
        return EXIT_INVALID
    try:
        art, code = execute(
            plant, args.report_dir,
            options=_solve_options(plant, args),
            fx=args.fx,
            skip_flowsheet=args.skip_flowsheet,
            skip_economics=args.skip_economics,
            init=args.init,
        )
    except (BlockError, PapsimError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    s = art.summary
    if "iterations" in s:
        state = "converged" if s["converged"] else "NOT converged"
        print(f"flowsheet {state} in {s['iterations']} iterations")
        if "product_kmol_h" in s:
            print(f"product {s['product_kmol_h']:.3f} kmol/h at purity {100 * s['product_purity']:.2f} %")
    if "payback_years" in s:
        print(f"payback {s['payback_years']:.2f} yr, ROI {s['roi_percent']:.2f} %, EMI {s['emi_crore']:.2f} crore")
    print(f"artifacts written to {args.report_dir}")
    return code


def cmd_economics(args) -> int:
    plant = _load_valid(args.definition)
    if plant is None:
        return EXIT_INVALID
    if plant.economics is None:
        print("error: definition has no economics section", file=sys.stderr)
        return EXIT_INVALID
    art, _ = execute(plant, args.report_dir, fx=args.fx, skip_flowsheet=True)
    sys.stdout.write(art.files["economics.txt"])
    return EXIT_OK


def cmd_vessel(args) -> int:
    if args.p_design is None and args.p_gauge is None:
        print("error: give --p-design or --p-gauge", file=sys.stderr)
        return EXIT_INVALID
    try:
        p = args.p_design if args.p_design is not None else vessel_mod.design_pressure(args.p_gauge, args.rule)
        spec = vessel_mod.VesselSpec(
            args.d_inner, args.height, p, args.f_design_stress, args.joint_efficiency,
            args.rho, args.cv, args.g,
        )
        text = vessel_mod.format_report(args.name, spec, vessel_mod.design(spec))
    except (ValueError, PapsimError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="papsim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="solve the flowsheet and write all reports")
    p.add_argument("definition", help="plant-definition JSON, or a bundled name such as pap_plant")
    p.add_argument("--report-dir", default="report")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--accel", choices=["direct", "wegstein"])
    p.add_argument("--fx", type=float, help="one INR/USD rate for every cost section")
    p.add_argument("--init", choices=["zero", "guess"], default="zero",
                   help="start tears from zero flow or from the definition's tear_guesses")
    p.add_argument("--skip-flowsheet", action="store_true")
    p.add_argument("--skip-economics", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="check a plant definition")
    p.add_argument("definition")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("economics", help="economics only")
    p.add_argument("definition")
    p.add_argument("--fx", type=float)
    p.add_argument("--report-dir")
    p.set_defaults(func=cmd_economics)

    p = sub.add_parser("vessel", help="shell thickness, stresses and weight for one vessel")
    p.add_argument("--name", default="vessel")
    p.add_argument("--d-inner", type=float, required=True, help="inner diameter, m")
    p.add_argument("--height", type=float, required=True, help="tangent-to-tangent height, m")
    p.add_argument("--p-design", type=float, help="design pressure, bar")
    p.add_argument("--p-gauge", type=float, help="gauge pressure, barg (converted with --rule)")
    p.add_argument("--rule", choices=list(vessel_mod.PRESSURE_RULES), default="gauge_plus_ambient")
    p.add_argument("--f-design-stress", type=float, default=344.7, help="bar")
    p.add_argument("--joint-efficiency", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=7800.0, help="material density, kg/m3")
    p.add_argument("--cv", type=float, default=1.08)
    p.add_argument("--g", type=float, default=9.81)
    p.add_argument("--out", help="also write the report to this file")
    p.set_defaults(func=cmd_vessel)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
