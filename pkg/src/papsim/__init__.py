"""Sequential-modular flowsheet simulation and techno-economics."""
from .blocks import (
    CompressorSpec,
    Reaction,
    ReactorSpec,
    compress,
    conversion_split,
    mix,
    pump,
    react,
    set_temperature,
    split_components,
    split_stream,
)
from .plant import PlantDefinition, load, validate
from .props import Component, ComponentRegistry, get_component, sensible_duty, stream_mass_flow
from .solver import Flowsheet, SolveOptions, SolveResult, build_flowsheet, solve, wegstein_step
from .streams import Stream

__version__ = "0.1.0"
