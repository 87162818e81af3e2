"""Techno-economics: cost roll-ups, cash flow, payback, ROI and loan amortization.

Money is carried in INR crore (1e7 INR) unless a name says otherwise.
Equipment and utility rates arrive in USD and are converted at an explicit
exchange rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import DivisionByZeroInvestment, NeverRecovers

CRORE = 1.0e7
LAKH = 1.0e5

__all__ = [
    "CRORE",
    "LAKH",
    "EquipmentItem",
    "CostItem",
    "ManpowerItem",
    "MaterialItem",
    "UtilityItem",
    "ProductItem",
    "CashFlowRow",
    "AmortizationRow",
    "EconomicsInput",
    "hourly_capacity",
    "material_cost_annual",
    "utility_cost_annual",
    "equipment_rollup",
    "fixed_capital",
    "revenue_annual",
    "depreciation_schedule",
    "cash_flow_table",
    "payback",
    "payback_raw",
    "roi",
    "emi_schedule",
    "evaluate",
]


@dataclass(frozen=True)
class EquipmentItem:
    name: str
    equip_cost: float  # USD
    installed_cost: float  # USD
    utility_cost: float = 0.0  # USD/h


@dataclass(frozen=True)
class CostItem:
    name: str
    crore: float


@dataclass(frozen=True)
class ManpowerItem:
    role: str
    headcount: int
    salary: float  # INR per person-year


@dataclass(frozen=True)
class MaterialItem:
    name: str
    price: float  # INR/kg
    quantity: float  # kg/yr


@dataclass(frozen=True)
class UtilityItem:
    name: str
    cost: float  # USD/h


@dataclass(frozen=True)
class ProductItem:
    name: str
    quantity: float  # kg/yr
    price: float  # INR/kg


@dataclass(frozen=True)
class CashFlowRow:
    year: int
    gross: float
    depreciation: float
    taxable: float
    taxes_paid: float
    cash_flow: float
    cumulative: float


@dataclass(frozen=True)
class AmortizationRow:
    month: int
    payment: float
    interest: float
    principal_component: float
    balance: float


def hourly_capacity(tpa: float, days: float, hours: float) -> float:
    """Production rate in kg/h for an annual tonnage."""
    return tpa * 1000.0 / (days * hours)


def material_cost_annual(items: Iterable[MaterialItem]) -> float:
    return sum(i.price * i.quantity for i in items) / CRORE


def utility_cost_annual(items: Iterable[UtilityItem], hours: float, fx: float) -> float:
    return sum(i.cost for i in items) * hours * fx / CRORE


def equipment_rollup(items: Iterable[EquipmentItem], fx: float, hours: float = 7200.0):
    """Purchased, installed and yearly utility totals, all in crore."""
    items = list(items)
    equip = sum(i.equip_cost for i in items) * fx / CRORE
    installed = sum(i.installed_cost for i in items) * fx / CRORE
    utility = sum(i.utility_cost for i in items) * hours * fx / CRORE
    return equip, installed, utility


def fixed_capital(direct_items: Iterable[CostItem], manpower_items: Iterable[ManpowerItem]):
    """Direct capital, yearly permanent-staff cost, and their sum (crore).

    The staff cost is a yearly figure; adding it to the one-off direct cost
    follows the source cost sheet's own convention.
    """
    direct = sum(i.crore for i in direct_items)
    indirect = sum(m.headcount * m.salary for m in manpower_items) / CRORE
    return direct, indirect, direct + indirect


def revenue_annual(products: Iterable[ProductItem]) -> float:
    return sum(p.quantity * p.price for p in products) / CRORE


def depreciation_schedule(base: float, percents: Sequence[float], horizon: int = 0) -> list[float]:
    """Yearly depreciation, element 0 being year 1, zero-padded to `horizon`."""
    if sum(percents) > 1.0 + 1e-12:
        raise ValueError(f"depreciation percentages sum to {sum(percents)} > 1")
    sched = [base * p for p in percents]
    return sched + [0.0] * max(0, horizon - len(sched))


def cash_flow_table(
    gross_annual: float,
    dep: Sequence[float],
    tax_rate: float,
    tax_lag: int,
    fixed_outlay: float,
    horizon: int,
) -> list[CashFlowRow]:
    """Undiscounted yearly ledger; row 0 carries the capital outlay.

    Tax on year n's taxable income is paid in year ``n + tax_lag``.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    rows = [CashFlowRow(0, 0.0, 0.0, 0.0, 0.0, -fixed_outlay, -fixed_outlay)]
    taxable = [0.0]
    cumulative = -fixed_outlay
    for n in range(1, horizon + 1):
        d = dep[n - 1] if n - 1 < len(dep) else 0.0
        taxable.append(gross_annual - d)
        src = n - tax_lag
        taxes = tax_rate * taxable[src] if src >= 1 else 0.0
        cash = gross_annual - taxes
        cumulative += cash
        rows.append(CashFlowRow(n, gross_annual, d, taxable[n], taxes, cash, cumulative))
    return rows


def payback_raw(rows: Sequence[CashFlowRow]) -> float:
    """Years from the outlay until cumulative cash turns non-negative (linear interpolation)."""
    cum = [r.cumulative for r in rows]
    if cum[0] >= 0:
        return 0.0
    for i in range(1, len(cum)):
        if cum[i] >= 0:
            return (i - 1) + (-cum[i - 1]) / (cum[i] - cum[i - 1])
    raise NeverRecovers(f"cumulative cash flow still {cum[-1]:.2f} after {len(cum) - 1} years")


def payback(rows: Sequence[CashFlowRow]) -> float:
    """Payback on an axis where the capital outlay sits at year 1.

    This is the convention of the published cumulative cash-flow chart; the
    plain crossing from the outlay is :func:`payback_raw`.
    """
    return payback_raw(rows) + 1.0


def roi(net_income: float, total_investment: float) -> float:
    """Return on investment in percent."""
    if total_investment == 0:
        raise DivisionByZeroInvestment("total investment is zero")
    return 100.0 * net_income / total_investment


def emi_schedule(principal: float, annual_rate: float, tenure_years: int):
    """Equated monthly installment and full amortization table.

    Returns ``(emi, rows, total_interest)``. The last row absorbs rounding so
    the balance closes to exactly zero.
    """
    if annual_rate < 0:
        raise ValueError("rate must be >= 0")
    if tenure_years < 1:
        raise ValueError("tenure must be >= 1 year")
    n = int(round(12 * tenure_years))
    r = annual_rate / 12.0
    if r == 0:
        emi = principal / n
    else:
        # expm1/log1p keep tiny rates from collapsing (1+r)^n - 1 to zero
        excess = math.expm1(n * math.log1p(r))
        emi = principal * r * (1.0 + excess) / excess
    rows = []
    balance = principal
    for month in range(1, n + 1):
        interest = balance * r
        if month == n:
            princ = balance
        else:
            princ = emi - interest
        balance = balance - princ if month < n else 0.0
        rows.append(AmortizationRow(month, interest + princ, interest, princ, balance))
    total_interest = sum(row.interest for row in rows)
    return emi, rows, total_interest


# -- whole-plant evaluation ---------------------------------------------------

def _items(cls, records):
    return [cls(**{k: v for k, v in r.items() if not k.startswith("_")}) for r in records]


@dataclass
class EconomicsInput:
    fx_rate: float
    tax_rate: float
    depreciation_base: float
    depreciation_percents: list[float]
    horizon_years: int
    operating_days: float = 300.0
    operating_hours: float = 24.0
    capacity_tpa: float = 0.0
    product_molar_mass: float = 0.0
    fx_overrides: dict[str, float] = field(default_factory=dict)
    equipment_items: list[EquipmentItem] = field(default_factory=list)
    direct_cost_items: list[CostItem] = field(default_factory=list)
    manpower_items: list[ManpowerItem] = field(default_factory=list)
    material_items: list[MaterialItem] = field(default_factory=list)
    utility_items: list[UtilityItem] = field(default_factory=list)
    other_opex_items: list[CostItem] = field(default_factory=list)
    products: list[ProductItem] = field(default_factory=list)
    opex_annual: float | None = None
    gross_annual: float | None = None
    tax_lag_years: int = 1
    fixed_outlay: float | None = None
    investment: dict[str, float] | None = None
    loan: dict[str, float] | None = None
    material_streams: dict[str, str] = field(default_factory=dict)
    product_streams: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if sum(self.depreciation_percents) > 1.0 + 1e-12:
            raise ValueError("depreciation percentages sum to more than 1")

    @classmethod
    def from_dict(cls, d) -> EconomicsInput:
        d = {k: v for k, v in d.items() if not k.startswith("_")}
        typed = {
            "equipment_items": EquipmentItem,
            "direct_cost_items": CostItem,
            "manpower_items": ManpowerItem,
            "material_items": MaterialItem,
            "utility_items": UtilityItem,
            "other_opex_items": CostItem,
            "products": ProductItem,
        }
        for key, item_cls in typed.items():
            if key in d:
                d[key] = _items(item_cls, d[key])
        return cls(**d)

    @property
    def hours_per_year(self) -> float:
        return self.operating_days * self.operating_hours

    def fx(self, section: str) -> float:
        return self.fx_overrides.get(section, self.fx_rate)

    def with_fx(self, fx: float) -> EconomicsInput:
        """Copy with a single exchange rate applied to every section."""
        return replace(self, fx_rate=fx, fx_overrides={})


@dataclass
class EconReport:
    capacity_kg_h: float
    capacity_kmol_h: float
    equipment_cost: float
    installed_cost: float
    equipment_utility_cost: float
    direct_cost: float
    indirect_annual: float
    fixed_cost: float
    materials: float
    utilities: float
    other_opex: float
    opex_itemized: float
    opex_annual: float
    revenue: float
    gross_annual: float
    gross_computed: float
    depreciation: list[float]
    cash_flow: list[CashFlowRow]
    cumulative_final: float
    payback_years: float
    payback_raw_years: float
    roi_stated: float | None
    roi_composed: float | None
    emi: float | None = None
    emi_yearly: float | None = None
    total_interest: float | None = None
    amortization: list[AmortizationRow] = field(default_factory=list)


def evaluate(econ: EconomicsInput) -> EconReport:
    """Run every economics calculation for one plant."""
    hours = econ.hours_per_year
    cap = hourly_capacity(econ.capacity_tpa, econ.operating_days, econ.operating_hours)
    cap_mol = cap / econ.product_molar_mass if econ.product_molar_mass else 0.0
    equip, installed, equip_util = equipment_rollup(econ.equipment_items, econ.fx("equipment"), hours)
    direct, indirect, fixed = fixed_capital(econ.direct_cost_items, econ.manpower_items)
    materials = material_cost_annual(econ.material_items)
    utilities = utility_cost_annual(econ.utility_items, hours, econ.fx("utilities"))
    other = sum(i.crore for i in econ.other_opex_items)
    itemized = materials + utilities + other
    opex = econ.opex_annual if econ.opex_annual is not None else itemized
    revenue = revenue_annual(econ.products)
    gross_computed = revenue - opex - indirect
    gross = econ.gross_annual if econ.gross_annual is not None else gross_computed
    dep = depreciation_schedule(econ.depreciation_base, econ.depreciation_percents, econ.horizon_years)
    outlay = econ.fixed_outlay if econ.fixed_outlay is not None else econ.depreciation_base
    rows = cash_flow_table(gross, dep, econ.tax_rate, econ.tax_lag_years, outlay, econ.horizon_years)
    cum = rows[-1].cumulative
    roi_stated = roi_composed = None
    if econ.investment:
        inv = econ.investment["total_investment"]
        roi_stated = roi(econ.investment["net_income"], inv)
        roi_composed = roi(cum + inv, inv)
    report = EconReport(
        capacity_kg_h=cap,
        capacity_kmol_h=cap_mol,
        equipment_cost=equip,
        installed_cost=installed,
        equipment_utility_cost=equip_util,
        direct_cost=direct,
        indirect_annual=indirect,
        fixed_cost=fixed,
        materials=materials,
        utilities=utilities,
        other_opex=other,
        opex_itemized=itemized,
        opex_annual=opex,
        revenue=revenue,
        gross_annual=gross,
        gross_computed=gross_computed,
        depreciation=dep,
        cash_flow=rows,
        cumulative_final=cum,
        payback_years=payback(rows),
        payback_raw_years=payback_raw(rows),
        roi_stated=roi_stated,
        roi_composed=roi_composed,
    )
    if econ.loan:
        emi, sched, interest = emi_schedule(
            econ.loan["principal"], econ.loan["annual_rate"], int(econ.loan["tenure_years"])
        )
        report.emi = emi
        report.emi_yearly = 12 * emi
        report.total_interest = interest
        report.amortization = sched
    return report
