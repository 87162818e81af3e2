"""Artifact writers: stream table, cash flow, convergence log, text reports."""
from __future__ import annotations

import csv
import io
import json
import re

from .econ import EconReport
from .props import ComponentRegistry, stream_mass_flow

__all__ = [
    "stream_sort_key",
    "streams_csv",
    "cashflow_csv",
    "convergence_csv",
    "economics_text",
    "summary_json",
]


def stream_sort_key(sid: str):
    """Numeric ids first in numeric order, then everything else alphabetically."""
    m = re.fullmatch(r"\d+", sid)
    return (0, int(sid), "") if m else (1, 0, sid)


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def streams_csv(streams, registry: ComponentRegistry) -> str:
    names = list(registry.names)
    rows = [["stream", "phase", "T_C", "P_bar", "mass_kg_h", "total_kmol_h", *names]]
    for sid in sorted(streams, key=stream_sort_key):
        s = streams[sid]
        rows.append([
            sid,
            s.phase,
            f"{s.temperature:.3f}",
            f"{s.pressure:.3f}",
            f"{stream_mass_flow(s, registry):.3f}",
            f"{s.total_flow:.3f}",
            *(f"{s.flow(n):.3f}" for n in names),
        ])
    return _csv(rows)


def cashflow_csv(report: EconReport) -> str:
    rows = [["year", "gross", "depreciation", "taxable", "taxes_paid", "cash_flow", "cumulative"]]
    for r in report.cash_flow:
        rows.append([r.year, *(f"{v:.4f}" for v in (r.gross, r.depreciation, r.taxable,
                                                       r.taxes_paid, r.cash_flow, r.cumulative))])
    return _csv(rows)


def convergence_csv(history) -> str:
    return _csv([["iteration", "max_flow_residual"]] + [[i, f"{r:.6e}"] for i, r in enumerate(history, 1)])


def economics_text(rep: EconReport, cross_check=None) -> str:
    out = []
    add = out.append
    add("Techno-economic summary (INR crore unless noted)")
    add("=" * 52)
    add(f"Hourly capacity                {rep.capacity_kg_h:12.2f} kg/h")
    add(f"  molar equivalent             {rep.capacity_kmol_h:12.2f} kmol/h")
    add("")
    add(f"Purchased equipment            {rep.equipment_cost:12.2f}")
    add(f"Installation                   {rep.installed_cost:12.2f}")
    add(f"Equipment + installation       {rep.equipment_cost + rep.installed_cost:12.2f}")
    add(f"Equipment utility cost / yr    {rep.equipment_utility_cost:12.2f}")
    add(f"Direct fixed cost              {rep.direct_cost:12.2f}")
    add(f"Permanent staff / yr           {rep.indirect_annual:12.2f}")
    add(f"Total fixed cost               {rep.fixed_cost:12.2f}")
    add("")
    add(f"Raw material and catalyst / yr {rep.materials:12.2f}")
    add(f"Utilities / yr                 {rep.utilities:12.2f}")
    add(f"Other operating items / yr     {rep.other_opex:12.2f}")
    add(f"Itemized operating cost / yr   {rep.opex_itemized:12.2f}")
    add(f"Operating cost used / yr       {rep.opex_annual:12.2f}")
    add(f"Revenue / yr                   {rep.revenue:12.2f}")
    add(f"Annual gross used              {rep.gross_annual:12.2f}")
    add(f"  revenue - opex - staff       {rep.gross_computed:12.2f}")
    add("")
    add("Year      Gross   Deprec.   Taxable     Taxes      Cash  Cumulative")
    for r in rep.cash_flow:
        add(f"{r.year:4d} {r.gross:10.2f} {r.depreciation:9.2f} {r.taxable:9.2f} "
            f"{r.taxes_paid:9.2f} {r.cash_flow:9.2f} {r.cumulative:11.2f}")
    add("")
    add(f"Cumulative cash flow at horizon {rep.cumulative_final:11.2f}")
    add(f"Payback (outlay at year 1)     {rep.payback_years:12.2f} years")
    add(f"Payback from outlay            {rep.payback_raw_years:12.2f} years")
    if rep.roi_stated is not None:
        add(f"ROI, stated income/investment  {rep.roi_stated:12.2f} %")
        add(f"ROI, cumulative + investment   {rep.roi_composed:12.2f} %")
    if rep.emi is not None:
        add("")
        add(f"Loan EMI / month               {rep.emi:12.2f}")
        add(f"Yearly payment                 {rep.emi_yearly:12.2f}")
        add(f"Total interest                 {rep.total_interest:12.2f}")
        add(f"Months                         {len(rep.amortization):12d}")
    if cross_check:
        add("")
        add("Flowsheet vs. costed quantities (kg/yr)")
        for name, (flowsheet_kg, input_kg) in cross_check.items():
            dev = (flowsheet_kg - input_kg) / input_kg * 100 if input_kg else float("nan")
            add(f"  {name:<20} {flowsheet_kg:14.1f} {input_kg:14.1f} {dev:+8.2f} %")
    return "\n".join(out) + "\n"


def summary_json(kpis: dict) -> str:
    return json.dumps(kpis, indent=2, sort_keys=True) + "\n"
