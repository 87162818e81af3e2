"""Cylindrical pressure-vessel shell design.

Pressures and the design stress share one unit (bar) inside the thickness
formula; stresses are reported in MN/m2 and the shell weight in N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import StressLimitExceeded

__all__ = [
    "VesselSpec",
    "VesselDesign",
    "design_pressure",
    "wall_thickness",
    "stresses",
    "shell_weight",
    "design",
    "format_report",
    "MIN_THICKNESS_MM",
]

BAR_TO_PA = 1.0e5
AMBIENT_BAR = 1.0
# Minimum practical wall for shells of this size class.
MIN_THICKNESS_MM = 3.0

PRESSURE_RULES = ("gauge_plus_ambient", "ten_percent")


def design_pressure(p_gauge: float, rule: str = "gauge_plus_ambient") -> float:
    """Design pressure in bar.

    ``gauge_plus_ambient`` converts an already-margined design gauge pressure
    to absolute by adding 1 bar; ``ten_percent`` applies a 10% margin to the
    given pressure.
    """
    if p_gauge < 0:
        raise ValueError("pressure must be >= 0")
    if rule == "gauge_plus_ambient":
        return p_gauge + AMBIENT_BAR
    if rule == "ten_percent":
        return 1.1 * p_gauge
    raise ValueError(f"unknown design pressure rule {rule!r}; expected one of {PRESSURE_RULES}")


@dataclass(frozen=True)
class VesselSpec:
    d_inner: float  # m
    height_tangent: float  # m
    p_design: float  # bar
    f_design_stress: float = 344.7  # bar (5000 psi)
    joint_efficiency: float = 1.0
    rho_material: float = 7800.0  # kg/m3, carbon steel plate
    c_v: float = 1.08
    g: float = 9.81

    def __post_init__(self):
        for name in ("d_inner", "height_tangent", "p_design", "f_design_stress",
                     "joint_efficiency", "rho_material", "c_v", "g"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.joint_efficiency > 1:
            raise ValueError("joint_efficiency must be <= 1")


@dataclass(frozen=True)
class VesselDesign:
    thickness: float  # mm
    f_circumferential: float  # MN/m2
    f_axial: float  # MN/m2
    shell_weight: float  # N
    f_weight: float  # MN/m2
    d_mean: float  # m

    @property
    def meets_minimum(self) -> bool:
        return self.thickness > MIN_THICKNESS_MM


def wall_thickness(spec: VesselSpec) -> float:
    """Shell thickness in mm, ``t = P*D / (2*f*J - P)``."""
    denom = 2.0 * spec.f_design_stress * spec.joint_efficiency - spec.p_design
    if denom <= 0:
        raise StressLimitExceeded(
            f"design pressure {spec.p_design} bar exceeds what the shell can hold "
            f"(2*f*J = {2 * spec.f_design_stress * spec.joint_efficiency} bar)"
        )
    return spec.p_design * spec.d_inner / denom * 1000.0


def stresses(spec: VesselSpec, t: float) -> tuple[float, float]:
    """Circumferential and axial membrane stress (MN/m2) for thickness `t` in mm."""
    if not t > 0:
        raise ValueError("thickness must be > 0")
    f_c = spec.p_design * BAR_TO_PA * spec.d_inner / (2.0 * t * 1e-3) / 1e6
    return f_c, f_c / 2.0


def shell_weight(spec: VesselSpec, t: float) -> tuple[float, float]:
    """Approximate shell weight (N) and the compressive stress it causes (MN/m2)."""
    if not t > 0:
        raise ValueError("thickness must be > 0")
    t_m = t * 1e-3
    d_mean = spec.d_inner + t_m
    w = (spec.c_v * math.pi * spec.rho_material * d_mean * spec.g
         * (spec.height_tangent + 0.8 * d_mean) * t * 1e-3)
    f_w = w / (math.pi * (spec.d_inner + t_m) * t_m) / 1e6
    return w, f_w


def design(spec: VesselSpec, t: float | None = None) -> VesselDesign:
    if t is None:
        t = wall_thickness(spec)
    f_c, f_a = stresses(spec, t)
    w, f_w = shell_weight(spec, t)
    return VesselDesign(t, f_c, f_a, w, f_w, spec.d_inner + t * 1e-3)


def format_report(name: str, spec: VesselSpec, result: VesselDesign) -> str:
    flag = "OK" if result.meets_minimum else "BELOW MINIMUM"
    lines = [
        f"Pressure vessel design: {name}",
        "=" * 40,
        f"Inner diameter             {spec.d_inner:10.4f} m",
        f"Tangent-to-tangent height  {spec.height_tangent:10.4f} m",
        f"Design pressure            {spec.p_design:10.3f} bar",
        f"Design stress              {spec.f_design_stress:10.1f} bar",
        f"Joint efficiency           {spec.joint_efficiency:10.2f}",
        f"Material density           {spec.rho_material:10.1f} kg/m3",
        f"Weight factor C_v          {spec.c_v:10.2f}",
        "",
        f"Wall thickness             {result.thickness:10.2f} mm",
        f"Mean diameter              {result.d_mean:10.5f} m",
        f"Circumferential stress     {result.f_circumferential:10.2f} MN/m2",
        f"Axial stress               {result.f_axial:10.2f} MN/m2",
        f"Shell weight               {result.shell_weight:10.1f} N",
        f"Weight stress              {result.f_weight:10.3f} MN/m2",
        f"Minimum thickness {MIN_THICKNESS_MM:.0f} mm   {flag:>10}",
    ]
    return "\n".join(lines) + "\n"
