"""Plant-definition files: loading, validation, and conversion to model objects.

A definition is one UTF-8 JSON document; ``data/plant.schema.json`` is the
authoritative schema. Keys starting with ``_`` are free-form notes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .blocks import PORTS, Block, reactor_spec
from .econ import EconomicsInput
from .errors import FileUnreadable, ParseError, PapsimError
from .props import Component, ComponentRegistry
from .solver import SolveOptions, check_structure
from .streams import Stream
from .vessel import VesselSpec, design_pressure

__all__ = [
    "Diagnostic",
    "PlantDefinition",
    "bundled_definitions",
    "resolve_path",
    "load_raw",
    "validate",
    "validate_raw",
    "load",
]


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    where: str = ""

    def __str__(self):
        loc = f"{self.where}: " if self.where else ""
        return f"{self.code}: {loc}{self.message}"


def bundled_definitions() -> list[str]:
    files = resources.files("papsim") / "data"
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json") and "schema" not in p.name)


def resolve_path(name_or_path) -> Path:
    """Accept a file path or the name of a bundled definition (e.g. ``pap_plant``)."""
    p = Path(name_or_path)
    if p.exists():
        return p
    if p.suffix == "" and str(name_or_path) in bundled_definitions():
        return Path(str(resources.files("papsim") / "data" / f"{name_or_path}.json"))
    return p


@lru_cache(maxsize=1)
def _schema():
    text = (resources.files("papsim") / "data" / "plant.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_raw(path) -> dict:
    path = resolve_path(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise FileUnreadable(f"cannot read {path}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from e


def _where(path_parts) -> str:
    return "/".join(str(p) for p in path_parts)


def validate_raw(raw) -> list[Diagnostic]:
    """Every schema and referential problem in a parsed definition."""
    diags: list[Diagnostic] = []
    validator = jsonschema.Draft202012Validator(_schema())
    for err in sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path))):
        diags.append(Diagnostic("SchemaError", err.message, _where(err.absolute_path)))
    if diags:
        return diags

    names = []
    for i, c in enumerate(raw["components"]):
        if c["name"] in names:
            diags.append(Diagnostic("DuplicateComponent", f"component {c['name']!r} defined twice", f"components/{i}"))
        names.append(c["name"])
    known = set(names)

    def need_component(name, where):
        if name not in known:
            diags.append(Diagnostic("UnknownComponent", f"component {name!r} is not defined", where))

    for sid, feed in raw["feeds"].items():
        for name in feed["flows"]:
            need_component(name, f"feeds/{sid}")
    for sid, guess in raw.get("tear_guesses", {}).items():
        for name in guess["flows"]:
            need_component(name, f"tear_guesses/{sid}")

    registry = None
    if not diags:
        registry = ComponentRegistry.from_records(raw["components"])

    blocks = []
    for i, b in enumerate(raw["blocks"]):
        where = f"blocks/{i} ({b['id']})"
        params = b.get("params", {})
        lo, hi, n_out = PORTS[b["kind"]]
        n_in = len(b["inlets"])
        if n_in < lo or (hi is not None and n_in > hi) or len(b["outlets"]) != n_out:
            diags.append(Diagnostic("PortCount", f"{b['kind']} has {n_in} inlet(s) and {len(b['outlets'])} outlet(s)", where))
            continue
        diags.extend(_check_params(b["kind"], params, need_component, registry, where))
        blocks.append(Block(b["id"], b["kind"], b["inlets"], b["outlets"], params))

    tears = raw.get("tears", [])
    for err in check_structure(blocks, raw["feeds"], tears):
        diags.append(Diagnostic(type(err).__name__, str(err), "blocks"))

    streams = set(raw["feeds"])
    for b in blocks:
        streams.update(b.outlets)
    for sid in raw.get("tear_guesses", {}):
        if sid not in tears:
            diags.append(Diagnostic("UnknownStream", f"guess given for {sid!r}, which is not a tear", "tear_guesses"))
    prod = raw.get("product")
    if prod:
        if prod["stream"] not in streams:
            diags.append(Diagnostic("UnknownStream", f"product stream {prod['stream']!r} does not exist", "product"))
        need_component(prod["component"], "product")

    for i, v in enumerate(raw.get("vessels", [])):
        try:
            _vessel_spec(v)
        except (ValueError, PapsimError) as e:
            diags.append(Diagnostic("InvalidVessel", str(e), f"vessels/{i}"))

    econ = raw.get("economics")
    if econ:
        for key in ("material_streams", "product_streams"):
            for comp, sid in econ.get(key, {}).items():
                need_component(comp, f"economics/{key}")
                if sid not in streams:
                    diags.append(Diagnostic("UnknownStream", f"stream {sid!r} does not exist", f"economics/{key}"))
        if sum(econ["depreciation_percents"]) > 1.0 + 1e-12:
            diags.append(Diagnostic("InvalidEconomics", "depreciation percentages sum to more than 1", "economics"))
    return diags


def _check_params(kind, params, need_component, registry, where):
    out = []

    def missing(*keys):
        for k in keys:
            if k not in params:
                out.append(Diagnostic("MissingParameter", f"{kind} needs parameter {k!r}", where))
        return any(k not in params for k in keys)

    if kind == "splitter":
        if not missing("fraction") and not 0.0 <= params["fraction"] <= 1.0:
            out.append(Diagnostic("PhiOutOfRange", f"fraction {params['fraction']} outside [0, 1]", where))
    elif kind == "component_splitter":
        if not missing("to_top"):
            for name, f in params["to_top"].items():
                need_component(name, where)
                if not 0.0 <= f <= 1.0:
                    out.append(Diagnostic("FractionOutOfRange", f"{name}: {f} outside [0, 1]", where))
    elif kind == "reactor":
        if not missing("reactions", "temperature", "pressure"):
            for r in params["reactions"]:
                for name in r.get("stoich", {}):
                    need_component(name, where)
                need_component(r.get("key_reactant"), where)
            names = {n for r in params["reactions"] for n in r.get("stoich", {})}
            if registry is not None and not out and names <= set(registry):
                try:
                    reactor_spec(params, registry)
                except (PapsimError, ValueError, KeyError) as e:
                    out.append(Diagnostic(type(e).__name__, str(e), where))
    elif kind in ("compressor", "pump"):
        missing("pressure")
    elif kind == "heater":
        missing("temperature")
    return out


def _vessel_spec(v) -> VesselSpec:
    if "p_design" in v:
        p = v["p_design"]
    else:
        p = design_pressure(v["p_design_gauge"], v.get("pressure_rule", "gauge_plus_ambient"))
    keys = ("f_design_stress", "joint_efficiency", "rho_material", "c_v", "g")
    return VesselSpec(v["d_inner"], v["height_tangent"], p, **{k: v[k] for k in keys if k in v})


def validate(path) -> list[Diagnostic]:
    """Validate a definition file; an empty list means it is usable.

    Raises FileUnreadable or ParseError when the file cannot be read as JSON.
    """
    return validate_raw(load_raw(path))


def _stream(d) -> Stream:
    return Stream(d["flows"], d["temperature"], d["pressure"], d.get("phase", "Liquid"))


@dataclass
class PlantDefinition:
    name: str
    registry: ComponentRegistry
    feeds: dict[str, Stream]
    blocks: list[Block]
    tears: list[str]
    tear_guesses: dict[str, Stream] = field(default_factory=dict)
    solve_options: SolveOptions = field(default_factory=SolveOptions)
    product: dict | None = None
    vessels: dict[str, VesselSpec] = field(default_factory=dict)
    economics: EconomicsInput | None = None

    @classmethod
    def from_raw(cls, raw) -> PlantDefinition:
        diags = validate_raw(raw)
        if diags:
            raise ValueError("invalid plant definition:\n" + "\n".join(map(str, diags)))
        solve = dict(raw.get("solve", {}))
        if "wegstein_q_bounds" in solve:
            solve["wegstein_q_bounds"] = tuple(solve["wegstein_q_bounds"])
        return cls(
            name=raw.get("name", "plant"),
            registry=ComponentRegistry(Component(**c) for c in raw["components"]),
            feeds={k: _stream(v) for k, v in raw["feeds"].items()},
            blocks=[Block(b["id"], b["kind"], b["inlets"], b["outlets"], b.get("params", {})) for b in raw["blocks"]],
            tears=list(raw.get("tears", [])),
            tear_guesses={k: _stream(v) for k, v in raw.get("tear_guesses", {}).items()},
            solve_options=SolveOptions(**solve),
            product=raw.get("product"),
            vessels={v["id"]: _vessel_spec(v) for v in raw.get("vessels", [])},
            economics=EconomicsInput.from_dict(raw["economics"]) if "economics" in raw else None,
        )


def load(path) -> PlantDefinition:
    return PlantDefinition.from_raw(load_raw(path))
