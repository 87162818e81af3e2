import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from papsim.errors import StressLimitExceeded
from papsim.vessel import (
    MIN_THICKNESS_MM,
    VesselSpec,
    design,
    design_pressure,
    format_report,
    shell_weight,
    stresses,
    wall_thickness,
)

REACTOR = VesselSpec(d_inner=0.610, height_tangent=3.048, p_design=5.710)

specs = st.builds(
    VesselSpec,
    d_inner=st.floats(0.1, 5.0),
    height_tangent=st.floats(0.5, 20.0),
    p_design=st.floats(0.01, 300.0),
    f_design_stress=st.floats(344.7, 2000.0),
    joint_efficiency=st.floats(0.5, 1.0),
)


def test_design_pressure_rules():
    assert design_pressure(4.710) == pytest.approx(5.710)
    assert design_pressure(0.0) == 1.0
    assert design_pressure(4.0, "ten_percent") == pytest.approx(4.4)
    with pytest.raises(ValueError):
        design_pressure(1.0, "double")


def test_reactor_worked_example():
    d = design(REACTOR)
    assert d.thickness == pytest.approx(5.09, abs=0.01)
    assert d.f_circumferential == pytest.approx(34.22, rel=0.005)
    assert d.f_axial == d.f_circumferential / 2
    assert d.shell_weight == pytest.approx(2877, rel=0.01)
    assert d.f_weight == pytest.approx(0.295, rel=0.02)
    assert d.meets_minimum and d.thickness > MIN_THICKNESS_MM


def test_stresses_at_rounded_thickness():
    f_c, f_a = stresses(REACTOR, 5.09)
    assert f_c == pytest.approx(34.22, rel=0.005)
    assert f_a == pytest.approx(17.11, rel=0.005)


def test_hand_thickness_with_joint_efficiency():
    spec = VesselSpec(1.0, 5.0, 10.0, joint_efficiency=0.85)
    t = wall_thickness(spec)
    assert t == pytest.approx(10 * 1 / (2 * 344.7 * 0.85 - 10) * 1000, rel=1e-12)
    assert t == pytest.approx(17.36, abs=0.01)
    assert stresses(spec, 17.36)[0] == pytest.approx(1e6 * 1 / (2 * 0.01736) / 1e6, rel=1e-12)
    assert stresses(spec, 17.36)[0] == pytest.approx(28.80, abs=0.01)


def test_thickness_vanishes_with_pressure():
    assert wall_thickness(VesselSpec(1.0, 1.0, 1e-9)) < 1e-8


def test_stress_limit():
    with pytest.raises(StressLimitExceeded):
        wall_thickness(VesselSpec(1.0, 1.0, 700.0))


def test_weight_linear_in_length_term():
    t = 5.09
    d_m = REACTOR.d_inner + t * 1e-3
    half = VesselSpec(REACTOR.d_inner, (REACTOR.height_tangent + 0.8 * d_m) / 2 - 0.8 * d_m, REACTOR.p_design)
    assert shell_weight(half, t)[0] == pytest.approx(shell_weight(REACTOR, t)[0] / 2, rel=1e-12)
    assert shell_weight(REACTOR, 1e-9)[0] < 1e-6


@pytest.mark.parametrize("bad", [{"d_inner": 0.0}, {"joint_efficiency": 1.2}, {"p_design": -1.0}])
def test_spec_validation(bad):
    args = {"d_inner": 1.0, "height_tangent": 1.0, "p_design": 5.0} | bad
    with pytest.raises(ValueError):
        VesselSpec(**args)


@given(specs, st.floats(0.01, 100.0))
def test_axial_is_half_hoop(spec, t):
    f_c, f_a = stresses(spec, t)
    assert f_a == f_c / 2


@given(specs)
def test_thickness_round_trip(spec):
    assume(2 * spec.f_design_stress * spec.joint_efficiency > spec.p_design)
    f_c, _ = stresses(spec, wall_thickness(spec))
    expected = (spec.f_design_stress * spec.joint_efficiency - spec.p_design / 2) * 0.1
    assert f_c == pytest.approx(expected, rel=1e-9)


@given(specs, st.floats(1.01, 2.0))
def test_thickness_monotone_in_pressure(spec, k):
    higher = VesselSpec(spec.d_inner, spec.height_tangent, min(spec.p_design * k, 600.0),
                        spec.f_design_stress, spec.joint_efficiency)
    assume(2 * higher.f_design_stress * higher.joint_efficiency > higher.p_design > spec.p_design)
    assert wall_thickness(higher) > wall_thickness(spec)


@given(specs, st.floats(0.01, 50.0))
def test_doubling_thickness_halves_stress(spec, t):
    assert stresses(spec, 2 * t)[0] == pytest.approx(stresses(spec, t)[0] / 2, rel=1e-12)


def test_report_text():
    text = format_report("R-1", REACTOR, design(REACTOR))
    assert "R-1" in text and "5.09 mm" in text and "OK" in text
    assert math.isfinite(design(REACTOR).d_mean)
