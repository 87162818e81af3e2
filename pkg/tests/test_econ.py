import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from papsim.econ import (
    CRORE,
    CashFlowRow,
    CostItem,
    EconomicsInput,
    EquipmentItem,
    ManpowerItem,
    MaterialItem,
    ProductItem,
    UtilityItem,
    cash_flow_table,
    depreciation_schedule,
    emi_schedule,
    equipment_rollup,
    evaluate,
    fixed_capital,
    hourly_capacity,
    material_cost_annual,
    payback,
    payback_raw,
    revenue_annual,
    roi,
    utility_cost_annual,
)
from papsim.errors import DivisionByZeroInvestment, NeverRecovers

MACRS = [0.20, 0.32, 0.192, 0.1152, 0.1152, 0.0576]
PUBLISHED_MATERIALS = [
    MaterialItem("Nitrobenzene", 70, 30_996_000),
    MaterialItem("Hydrogen", 95, 1_339_200),
    MaterialItem("Catalyst", 1000, 2400),
    MaterialItem("Acid", 4.8, 120_000),
]
money = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)


def _rows_from_cumulative(cum):
    out, prev = [], 0.0
    for i, c in enumerate(cum):
        out.append(CashFlowRow(i, 0.0, 0.0, 0.0, 0.0, c - prev, c))
        prev = c
    return out


def test_capacity():
    assert hourly_capacity(18000, 300, 24) == 2500.0
    assert hourly_capacity(18000, 300, 24) / 109 == pytest.approx(22.94, abs=0.01)
    assert hourly_capacity(0, 300, 24) == 0.0
    assert hourly_capacity(8760, 365, 24) == pytest.approx(1000.0)


def test_material_cost():
    assert material_cost_annual(PUBLISHED_MATERIALS) == pytest.approx(229.99, abs=0.01)
    assert material_cost_annual([]) == 0.0
    assert material_cost_annual(PUBLISHED_MATERIALS[:1]) == pytest.approx(216.972, abs=1e-9)


def test_utility_cost():
    elec = [UtilityItem("Electricity", 29.000732)]
    assert utility_cost_annual(elec, 7200, 75.0) * CRORE == pytest.approx(15660395.28, abs=0.01)
    assert utility_cost_annual(elec, 0, 75.0) == 0.0
    assert utility_cost_annual(elec, 7200, 150.0) == pytest.approx(2 * utility_cost_annual(elec, 7200, 75.0))


def test_equipment_single_and_empty():
    assert equipment_rollup([EquipmentItem("X", 1_000_000, 0)], 75.0)[0] == pytest.approx(7.5)
    assert equipment_rollup([], 75.0) == (0.0, 0.0, 0.0)


def test_fixed_capital_staff():
    staff = [ManpowerItem("a", 12, 800_000), ManpowerItem("b", 12, 600_000),
             ManpowerItem("c", 10, 600_000), ManpowerItem("d", 6, 1_200_000)]
    _, indirect, _ = fixed_capital([], staff)
    assert indirect == pytest.approx(3.0)
    assert fixed_capital([], []) == (0, 0.0, 0)


def test_revenue():
    pap = ProductItem("PAP", 17_820_453.6, 230)
    an = ProductItem("Aniline", 6_400_036.8, 40)
    assert revenue_annual([pap, an]) == pytest.approx(435.47, abs=0.01)
    assert revenue_annual([pap]) == pytest.approx(409.87, abs=0.01)
    assert revenue_annual([ProductItem("PAP", 0, 230)]) == 0.0


def test_depreciation():
    sched = depreciation_schedule(189, MACRS, 10)
    assert sched[:6] == pytest.approx([37.800, 60.480, 36.288, 21.773, 21.773, 10.886], abs=1e-3)
    assert sched[6:] == [0.0] * 4
    assert sum(sched) == pytest.approx(189 * sum(MACRS), rel=1e-15)
    assert depreciation_schedule(0, MACRS) == [0.0] * 6
    with pytest.raises(ValueError):
        depreciation_schedule(1, [0.6, 0.6])


def test_cash_flow_published_case():
    rows = cash_flow_table(180.95, depreciation_schedule(189, MACRS, 10), 0.35, 1, 189, 10)
    assert rows[0].cash_flow == -189 and rows[0].gross == 0
    assert rows[1].cash_flow == 180.95 and rows[1].taxes_paid == 0
    assert rows[2].taxes_paid == pytest.approx(50.1025, abs=1e-9)
    assert rows[2].cash_flow == pytest.approx(130.8475, abs=1e-9)
    assert rows[3].taxes_paid == pytest.approx(42.1645, abs=1e-9)
    assert rows[-1].cumulative == pytest.approx(1116.65, abs=0.05)


def test_cash_flow_without_tax_or_lag():
    dep = depreciation_schedule(189, MACRS, 10)
    assert all(r.cash_flow == 180.95 for r in cash_flow_table(180.95, dep, 0.0, 1, 189, 10)[1:])
    assert cash_flow_table(180.95, dep, 0.35, 0, 189, 10)[1].taxes_paid == pytest.approx(50.1025)


def test_payback_examples():
    rows = cash_flow_table(180.95, depreciation_schedule(189, MACRS, 10), 0.35, 1, 189, 10)
    # independent oracle: interpolate year index where cumulative crosses zero
    cum = np.array([r.cumulative for r in rows])
    i = int(np.argmax(cum >= 0))
    crossing = np.interp(0.0, cum[i - 1:i + 1], [i - 1, i])
    assert payback_raw(rows) == pytest.approx(crossing)
    assert payback(rows) == pytest.approx(2 + 8.05 / 130.8475, abs=1e-3)
    assert payback(rows) == pytest.approx(2.06, abs=0.05)
    assert payback(_rows_from_cumulative([-100, 0])) == 2.0
    assert payback(_rows_from_cumulative([-100, -50, 0])) == 3.0
    with pytest.raises(NeverRecovers):
        payback(_rows_from_cumulative([-100, -90, -80]))


@pytest.mark.parametrize("lo,mid,hi", [(100, 180.95, 300)])
def test_payback_monotone_in_gross(lo, mid, hi):
    dep = depreciation_schedule(189, MACRS, 10)
    pb = [payback(cash_flow_table(g, dep, 0.35, 1, 189, 10)) for g in (lo, mid, hi)]
    assert pb[0] >= pb[1] >= pb[2]


def test_roi():
    assert roi(3851.65, 2734) == pytest.approx(140.9, abs=0.1)
    assert roi(0, 5) == 0.0
    assert roi(1116.66 + 2734, 2734) == pytest.approx(140.85, abs=0.01)
    with pytest.raises(DivisionByZeroInvestment):
        roi(1, 0)


def test_emi_published_loan():
    emi, rows, interest = emi_schedule(170, 0.09, 5)
    r = 0.09 / 12
    # present value of the annuity must equal the principal
    assert sum(emi / (1 + r) ** k for k in range(1, 61)) == pytest.approx(170, rel=1e-12)
    assert emi == pytest.approx(3.53, abs=0.01)
    assert 12 * emi == pytest.approx(42.35, abs=0.05)
    assert interest == pytest.approx(41.7, abs=0.5)
    assert len(rows) == 60 and abs(rows[-1].balance) <= 1e-6


def test_emi_small_cases():
    emi, rows, interest = emi_schedule(120, 0.0, 1)
    assert emi == 10.0 and interest == 0.0
    emi, _, _ = emi_schedule(100, 0.12, 1)
    assert emi == pytest.approx(100 * 0.01 * 1.01**12 / (1.01**12 - 1))
    assert emi == pytest.approx(8.885, abs=1e-3)


@given(st.floats(1, 1e4), st.floats(0, 0.3), st.integers(1, 30))
def test_amortization_closes(p, rate, years):
    emi, rows, interest = emi_schedule(p, rate, years)
    assert abs(rows[-1].balance) <= 1e-6
    assert sum(r.principal_component for r in rows) == pytest.approx(p, rel=1e-9)
    assert sum(r.payment for r in rows) == pytest.approx(p + interest, rel=1e-12)
    balances = [r.balance for r in rows]
    assert all(b2 <= b1 + 1e-12 for b1, b2 in zip(balances, balances[1:]))


@given(st.floats(0, 1e3), st.floats(0, 0.5), st.integers(0, 2), st.floats(0, 1e3), st.integers(1, 15))
def test_ledger_identities(gross, rate, lag, outlay, horizon):
    dep = depreciation_schedule(100, MACRS, horizon)
    rows = cash_flow_table(gross, dep, rate, lag, outlay, horizon)
    for prev, row in zip(rows, rows[1:]):
        assert row.cumulative - prev.cumulative == pytest.approx(row.cash_flow, abs=1e-9)
        assert row.taxable == row.gross - row.depreciation
    assert sum(r.depreciation for r in rows) <= 100 + 1e-9


@given(st.lists(st.tuples(money, money), max_size=8), st.randoms())
def test_rollups_additive_and_order_free(pairs, rnd):
    items = [MaterialItem(f"m{i}", p, q) for i, (p, q) in enumerate(pairs)]
    total = material_cost_annual(items)
    shuffled = list(items)
    rnd.shuffle(shuffled)
    assert material_cost_annual(shuffled) == pytest.approx(total, rel=1e-12, abs=1e-12)
    k = len(items) // 2
    assert material_cost_annual(items[:k]) + material_cost_annual(items[k:]) == pytest.approx(total, rel=1e-12, abs=1e-12)
    eq = [EquipmentItem(f"e{i}", p, q, p / 10) for i, (p, q) in enumerate(pairs)]
    split = [a + b for a, b in zip(equipment_rollup(eq[:k], 75.0), equipment_rollup(eq[k:], 75.0))]
    assert split == pytest.approx(list(equipment_rollup(eq, 75.0)), rel=1e-12, abs=1e-12)
    costs = [CostItem(f"c{i}", p) for i, (p, _) in enumerate(pairs)]
    assert fixed_capital(costs, [])[0] == pytest.approx(fixed_capital(reversed(costs), [])[0], rel=1e-12, abs=1e-12)


def test_shipped_economics(plant):
    rep = evaluate(plant.economics)
    assert rep.materials == pytest.approx(229.99, abs=0.01)
    assert rep.utilities == pytest.approx(6.84, rel=0.005)
    assert rep.equipment_cost == pytest.approx(14.38, rel=0.01)
    assert rep.installed_cost == pytest.approx(27.56, rel=0.01)
    assert rep.revenue == pytest.approx(435.47, abs=0.01)
    assert rep.emi == pytest.approx(3.53, abs=0.01)
    assert rep.payback_raw_years == pytest.approx(rep.payback_years - 1)


def test_fx_override_and_global_fx(plant):
    econ = plant.economics
    assert econ.fx("equipment") == 75.4 and econ.fx("utilities") == 75.0
    flat = econ.with_fx(150.0)
    assert flat.fx("equipment") == 150.0
    assert evaluate(flat).utilities == pytest.approx(2 * evaluate(econ).utilities)


def test_from_dict_ignores_notes(plant):
    raw = {"_note": "x", "capacity_tpa": 1.0, "operating_days": 1, "operating_hours": 1, "fx_rate": 1.0,
           "tax_rate": 0.0, "tax_lag_years": 0, "depreciation_base": 1.0, "depreciation_percents": [1.0],
           "horizon_years": 2, "products": [{"name": "p", "quantity": 1e7, "price": 1, "_src": "y"}]}
    econ = EconomicsInput.from_dict(raw)
    rep = evaluate(econ)
    assert rep.revenue == 1.0
    assert rep.roi_stated is None and rep.emi is None
