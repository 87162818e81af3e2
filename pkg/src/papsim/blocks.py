"""Single-pass unit operations.

Every function here is pure: it takes streams and parameters and returns
new streams (plus a duty or shaft power where one applies). The solver
strings them together; nothing in this module knows about the flowsheet
graph.
"""
from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from typing import Mapping, Sequence

from .errors import (
    EmptyInletList,
    FractionOutOfRange,
    NegativeFlow,
    PhiOutOfRange,
    PressureDecrease,
    UnbalancedReaction,
)
from .props import ComponentRegistry, cal_s_to_kw, heat_capacity_rate, sensible_duty
from .streams import MIXED, Stream

__all__ = [
    "Reaction",
    "ReactorSpec",
    "CompressorSpec",
    "mix",
    "split_stream",
    "split_components",
    "conversion_split",
    "react",
    "compress",
    "pump",
    "set_temperature",
]

KELVIN = 273.15
# Round-off allowance when a product flow comes out a hair below zero.
_NEG_FLOW_ATOL = 1e-12


@dataclass(frozen=True)
class Reaction:
    """Fixed-conversion reaction on a key reactant.

    ``stoich`` maps species to signed coefficients (reactants negative).
    Pass ``registry`` to check the mass balance on construction.
    """

    stoich: Mapping[str, float]
    key_reactant: str
    conversion: float
    registry: InitVar[ComponentRegistry | None] = None

    def __post_init__(self, registry):
        object.__setattr__(self, "stoich", {k: float(v) for k, v in self.stoich.items()})
        if self.stoich.get(self.key_reactant, 0.0) >= 0:
            raise ValueError(f"key reactant {self.key_reactant!r} must have a negative coefficient")
        if not 0.0 <= self.conversion <= 1.0:
            raise FractionOutOfRange(f"conversion {self.conversion} outside [0, 1]")
        if registry is not None:
            self.check_balance(registry)

    def check_balance(self, registry: ComponentRegistry, rtol: float = 1e-3) -> float:
        """Return the relative mass imbalance; raise if it exceeds `rtol`."""
        net = sum(nu * registry[name].molar_mass for name, nu in self.stoich.items())
        reactant_mass = sum(-nu * registry[name].molar_mass for name, nu in self.stoich.items() if nu < 0)
        rel = abs(net) / reactant_mass
        if rel > rtol:
            raise UnbalancedReaction(f"reaction {dict(self.stoich)} is off by {rel:.2%} in mass")
        return rel

    def normalized_coefficient(self, name):
        """Coefficient per mole of key reactant consumed."""
        return self.stoich.get(name, 0.0) / -self.stoich[self.key_reactant]


@dataclass(frozen=True)
class ReactorSpec:
    reactions: Sequence[Reaction]
    t_out: float
    p_out: float
    phase: str = MIXED

    def __post_init__(self):
        object.__setattr__(self, "reactions", tuple(self.reactions))
        totals: dict[str, float] = {}
        for r in self.reactions:
            totals[r.key_reactant] = totals.get(r.key_reactant, 0.0) + r.conversion
        for key, x in totals.items():
            if x > 1.0 + 1e-12:
                raise FractionOutOfRange(f"total conversion of {key!r} is {x} > 1")


@dataclass(frozen=True)
class CompressorSpec:
    p_out: float
    gamma: float = 1.4
    eta_isentropic: float = 0.66

    def __post_init__(self):
        if not self.p_out > 0:
            raise ValueError("p_out must be > 0")
        if not self.gamma > 1:
            raise ValueError("gamma must be > 1")
        if not 0 < self.eta_isentropic <= 1:
            raise ValueError("eta_isentropic must be in (0, 1]")


def mix(inlets: Sequence[Stream], registry: ComponentRegistry) -> Stream:
    """Adiabatic mixer.

    Outlet temperature closes the constant-Cp enthalpy balance, pressure is
    the lowest inlet pressure, and the phase label is kept only when every
    inlet agrees.
    """
    if not inlets:
        raise EmptyInletList("mixer needs at least one inlet")
    if len(inlets) == 1:
        return inlets[0]
    flows: dict[str, float] = {}
    for s in inlets:
        for name, n in s.flows.items():
            flows[name] = flows.get(name, 0.0) + n
    weights = [heat_capacity_rate(s, registry) for s in inlets]
    total = sum(weights)
    if total > 0:
        t_out = sum(w * s.temperature for w, s in zip(weights, inlets)) / total
    else:
        t_out = sum(s.temperature for s in inlets) / len(inlets)
    phases = {s.phase for s in inlets}
    phase = phases.pop() if len(phases) == 1 else MIXED
    return Stream(flows, t_out, min(s.pressure for s in inlets), phase)


def _part(n, f):
    # The larger share is taken by subtraction, which is exact (Sterbenz), so the
    # two parts add back to `n` bit for bit.
    if f >= 0.5:
        a = n * f
        return a, n - a
    b = n * (1.0 - f)
    return n - b, b


def _divide(flows, fractions):
    first, second = {}, {}
    for k, n in flows.items():
        first[k], second[k] = _part(n, fractions[k])
    return first, second


def split_stream(inlet: Stream, phi: float) -> tuple[Stream, Stream]:
    """Divide a stream, sending fraction `phi` of every component to the first outlet."""
    if not 0.0 <= phi <= 1.0:
        raise PhiOutOfRange(f"split fraction {phi} outside [0, 1]")
    kept, rejected = _divide(inlet.flows, dict.fromkeys(inlet.flows, phi))
    state = dict(temperature=inlet.temperature, pressure=inlet.pressure, phase=inlet.phase)
    return Stream(kept, **state), Stream(rejected, **state)


def _state(inlet, state):
    if state is None:
        return inlet.temperature, inlet.pressure, inlet.phase
    t, p, phase = state
    return (
        inlet.temperature if t is None else t,
        inlet.pressure if p is None else p,
        inlet.phase if phase is None else phase,
    )


def split_components(
    inlet: Stream,
    to_top: Mapping[str, float],
    top_state=None,
    bottom_state=None,
) -> tuple[Stream, Stream]:
    """Ideal separator with a fixed top-recovery fraction per component.

    Components missing from `to_top` go entirely to the bottom. States are
    ``(temperature, pressure, phase)`` tuples; ``None`` (or a ``None`` entry)
    keeps the inlet value.
    """
    for name, f in to_top.items():
        if not 0.0 <= f <= 1.0:
            raise FractionOutOfRange(f"top fraction {f} for {name!r} outside [0, 1]")
    top, bottom = _divide(inlet.flows, {k: to_top.get(k, 0.0) for k in inlet.flows})
    t_top, p_top, ph_top = _state(inlet, top_state)
    t_bot, p_bot, ph_bot = _state(inlet, bottom_state)
    return Stream(top, t_top, p_top, ph_top), Stream(bottom, t_bot, p_bot, ph_bot)


def conversion_split(x_overall: float, selectivity: float) -> tuple[float, float]:
    """Per-reaction conversions for a desired/undesired pair sharing one key reactant.

    ``x_desired = X*S`` and ``x_undesired = X - x_desired`` so the two always
    add back to `x_overall`.
    """
    for v in (x_overall, selectivity):
        if not 0.0 <= v <= 1.0:
            raise FractionOutOfRange(f"{v} outside [0, 1]")
    x_desired = x_overall * selectivity
    return x_desired, x_overall - x_desired


def react(feed: Stream, spec: ReactorSpec, registry: ComponentRegistry) -> Stream:
    """Stoichiometric reactor.

    Extents are computed from the feed flow of each reaction's key reactant,
    so parallel reactions on the same reactant do not see each other's
    consumption.
    """
    out = dict(feed.flows)
    for r in spec.reactions:
        for name in r.stoich:
            registry[name]  # raises UnknownComponent
        extent = r.conversion * feed.flow(r.key_reactant)
        if extent == 0.0:
            continue
        for name, nu in r.stoich.items():
            out[name] = out.get(name, 0.0) + r.normalized_coefficient(name) * extent
    scale = max(feed.flows.values(), default=0.0)
    for name, n in out.items():
        if n < 0.0:
            if n < -_NEG_FLOW_ATOL * max(scale, 1.0):
                raise NegativeFlow(
                    f"outlet flow of {name!r} would be {n:.6g} kmol/h; not enough co-reactant"
                )
            out[name] = 0.0
    return Stream(out, spec.t_out, spec.p_out, spec.phase)


def compress(inlet: Stream, spec: CompressorSpec, registry: ComponentRegistry) -> tuple[Stream, float]:
    """Adiabatic ideal-gas compressor; returns the outlet and shaft power in kW."""
    if spec.p_out < inlet.pressure:
        raise PressureDecrease(f"compressor outlet {spec.p_out} bar below inlet {inlet.pressure} bar")
    t1 = inlet.temperature + KELVIN
    t2s = t1 * (spec.p_out / inlet.pressure) ** ((spec.gamma - 1.0) / spec.gamma)
    dt = (t2s - t1) / spec.eta_isentropic
    power = cal_s_to_kw(heat_capacity_rate(inlet, registry) * dt)
    return inlet.with_state(temperature=inlet.temperature + dt, pressure=spec.p_out), power


def pump(inlet: Stream, p_out: float) -> Stream:
    """Isothermal liquid pump."""
    if p_out < inlet.pressure:
        raise PressureDecrease(f"pump outlet {p_out} bar below inlet {inlet.pressure} bar")
    return inlet.with_state(pressure=p_out)


def set_temperature(
    inlet: Stream,
    t_out: float,
    p_out: float | None,
    phase: str | None,
    registry: ComponentRegistry,
) -> tuple[Stream, float]:
    """Heater/cooler. Returns the outlet and the sensible duty in cal/s."""
    duty = sensible_duty(inlet, t_out, registry)
    return inlet.with_state(temperature=t_out, pressure=p_out, phase=phase), duty


# -- block dispatch ---------------------------------------------------------

BLOCK_KINDS = (
    "mixer",
    "splitter",
    "component_splitter",
    "reactor",
    "compressor",
    "pump",
    "heater",
)

#: (min inlets, max inlets, outlets) per kind; None means unbounded.
PORTS = {
    "mixer": (1, None, 1),
    "splitter": (1, 1, 2),
    "component_splitter": (1, 1, 2),
    "reactor": (1, None, 1),
    "compressor": (1, 1, 1),
    "pump": (1, 1, 1),
    "heater": (1, 1, 1),
}


@dataclass(frozen=True)
class Block:
    id: str
    kind: str
    inlets: tuple[str, ...]
    outlets: tuple[str, ...]
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in BLOCK_KINDS:
            raise ValueError(f"block {self.id!r}: unknown kind {self.kind!r}")
        object.__setattr__(self, "inlets", tuple(self.inlets))
        object.__setattr__(self, "outlets", tuple(self.outlets))
        lo, hi, n_out = PORTS[self.kind]
        if len(self.inlets) < lo or (hi is not None and len(self.inlets) > hi):
            raise ValueError(f"block {self.id!r}: bad inlet count {len(self.inlets)} for {self.kind}")
        if len(self.outlets) != n_out:
            raise ValueError(f"block {self.id!r}: {self.kind} needs {n_out} outlet(s)")


@dataclass
class BlockOutput:
    streams: list[Stream]
    duty: float | None = None
    power: float | None = None


def _state_param(d):
    if d is None:
        return None
    return d.get("temperature"), d.get("pressure"), d.get("phase")


def reactor_spec(params: Mapping, registry: ComponentRegistry) -> ReactorSpec:
    """Build a ReactorSpec from block parameters.

    With ``overall_conversion`` and ``selectivity`` given, the first two
    reactions are taken as the desired/undesired pair and their conversions
    come from :func:`conversion_split`.
    """
    raw = list(params["reactions"])
    conversions = [r.get("conversion", 0.0) for r in raw]
    if "selectivity" in params:
        if len(raw) != 2:
            raise ValueError("selectivity form needs exactly two reactions (desired, undesired)")
        conversions = list(conversion_split(params["overall_conversion"], params["selectivity"]))
    reactions = [
        Reaction(r["stoich"], r["key_reactant"], x, registry=registry)
        for r, x in zip(raw, conversions)
    ]
    return ReactorSpec(reactions, params["temperature"], params["pressure"], params.get("phase", MIXED))


def evaluate(block: Block, inlets: Sequence[Stream], registry: ComponentRegistry) -> BlockOutput:
    p = block.params
    kind = block.kind
    if kind == "mixer":
        return BlockOutput([mix(inlets, registry)])
    if kind == "splitter":
        return BlockOutput(list(split_stream(inlets[0], p["fraction"])))
    if kind == "component_splitter":
        top, bottom = split_components(
            inlets[0], p["to_top"], _state_param(p.get("top")), _state_param(p.get("bottom"))
        )
        return BlockOutput([top, bottom])
    if kind == "reactor":
        feed = mix(inlets, registry)
        return BlockOutput([react(feed, reactor_spec(p, registry), registry)])
    if kind == "compressor":
        spec = CompressorSpec(p["pressure"], p.get("gamma", 1.4), p.get("efficiency", 0.66))
        out, power = compress(inlets[0], spec, registry)
        return BlockOutput([out], power=power)
    if kind == "pump":
        return BlockOutput([pump(inlets[0], p["pressure"])])
    if kind == "heater":
        out, duty = set_temperature(inlets[0], p["temperature"], p.get("pressure"), p.get("phase"), registry)
        return BlockOutput([out], duty=duty)
    raise ValueError(f"unknown block kind {kind!r}")  # pragma: no cover


def isclose_flows(a: Stream, b: Stream, abs_tol=1e-9) -> bool:
    names = set(a.flows) | set(b.flows)
    return all(math.isclose(a.flow(n), b.flow(n), abs_tol=abs_tol) for n in names)
