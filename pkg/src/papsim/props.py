"""Component data and constant-heat-capacity enthalpy arithmetic.

Heat capacities are molar, in cal/(mol K), and treated as independent of
temperature and phase. Flows are kmol/h throughout, so a duty in cal/s is
``sum(n_i * 1000 * cp_i * dT) / 3600``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping

from .errors import DuplicateComponent, UnknownComponent

if TYPE_CHECKING:
    from .streams import Stream

__all__ = [
    "CAL_TO_J",
    "Component",
    "ComponentRegistry",
    "get_component",
    "sensible_duty",
    "stream_mass_flow",
    "cal_s_to_kw",
]

#: Thermochemical calorie.
CAL_TO_J = 4.184


def cal_s_to_kw(q):
    return q * CAL_TO_J / 1000.0


@dataclass(frozen=True)
class Component:
    """Immutable physical data for one species.

    Attributes
    ----------
    name : str
    molar_mass : float
        kg/kmol.
    cp_molar : float
        cal/(mol K).
    bp_normal : float
        Normal boiling point, degC.
    density : float
        g/cm3.
    """

    name: str
    molar_mass: float
    cp_molar: float
    bp_normal: float = float("nan")
    density: float = float("nan")

    def __post_init__(self):
        if not self.name:
            raise ValueError("component name must be non-empty")
        if not self.molar_mass > 0:
            raise ValueError(f"{self.name}: molar_mass must be > 0")
        if not self.cp_molar > 0:
            raise ValueError(f"{self.name}: cp_molar must be > 0")


class ComponentRegistry(Mapping[str, Component]):
    """Ordered, name-unique collection of components."""

    def __init__(self, components: Iterable[Component] = ()):
        self._by_name: dict[str, Component] = {}
        for c in components:
            if c.name in self._by_name:
                raise DuplicateComponent(f"duplicate component {c.name!r}")
            self._by_name[c.name] = c

    @classmethod
    def from_records(cls, records) -> ComponentRegistry:
        return cls(Component(**r) for r in records)

    def __getitem__(self, name: str) -> Component:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownComponent(name) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._by_name)

    def __len__(self):
        return len(self._by_name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._by_name)

    def __repr__(self):
        return f"ComponentRegistry({list(self._by_name)})"


def get_component(registry: ComponentRegistry, name: str) -> Component:
    return registry[name]


def heat_capacity_rate(stream: Stream, registry: ComponentRegistry) -> float:
    """Total heat capacity flow of a stream in cal/(s K)."""
    return sum(n * registry[name].cp_molar for name, n in stream.flows.items()) * 1000.0 / 3600.0


def sensible_duty(stream: Stream, t_target: float, registry: ComponentRegistry) -> float:
    """Heat (cal/s) needed to take `stream` from its temperature to `t_target`.

    Positive for heating, negative for cooling.
    """
    return heat_capacity_rate(stream, registry) * (t_target - stream.temperature)


def stream_mass_flow(stream: Stream, registry: ComponentRegistry) -> float:
    """Mass flow in kg/h."""
    return sum(n * registry[name].molar_mass for name, n in stream.flows.items())
