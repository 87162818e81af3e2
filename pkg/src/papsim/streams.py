from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

LIQUID = "Liquid"
VAPOR = "Vapor"
MIXED = "Mixed"
PHASES = (LIQUID, VAPOR, MIXED)

__all__ = ["Stream", "LIQUID", "VAPOR", "MIXED", "PHASES"]


@dataclass(frozen=True)
class Stream:
    """Material stream: component molar flows (kmol/h) plus state.

    Temperature is in degC and pressure in bar absolute. Instances are
    treated as values; blocks always return new streams.
    """

    flows: Mapping[str, float] = field(default_factory=dict)
    temperature: float = 25.0
    pressure: float = 1.0
    phase: str = LIQUID

    def __post_init__(self):
        flows = {k: float(v) for k, v in self.flows.items()}
        for name, n in flows.items():
            if not n >= 0.0:
                raise ValueError(f"negative or NaN flow for {name!r}: {n}")
        if not self.pressure > 0:
            raise ValueError(f"pressure must be > 0, got {self.pressure}")
        if self.phase not in PHASES:
            raise ValueError(f"unknown phase label {self.phase!r}")
        object.__setattr__(self, "flows", flows)

    @property
    def total_flow(self) -> float:
        return sum(self.flows.values())

    def flow(self, name: str) -> float:
        return self.flows.get(name, 0.0)

    def with_state(self, temperature=None, pressure=None, phase=None) -> Stream:
        return replace(
            self,
            temperature=self.temperature if temperature is None else temperature,
            pressure=self.pressure if pressure is None else pressure,
            phase=self.phase if phase is None else phase,
        )

    def scaled(self, factor: float) -> Stream:
        return replace(self, flows={k: v * factor for k, v in self.flows.items()})

    def is_empty(self) -> bool:
        return not any(self.flows.values())
