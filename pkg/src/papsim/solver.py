"""Flowsheet graph, evaluation order, and tear-stream convergence."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .blocks import Block, evaluate
from .errors import (
    BlockError,
    CyclicWithoutTear,
    DanglingPort,
    DuplicateStreamConsumer,
    DuplicateStreamProducer,
    FlowsheetError,
    NotConverged,
    PapsimError,
)
from .props import ComponentRegistry, stream_mass_flow
from .streams import LIQUID, Stream

log = logging.getLogger(__name__)

__all__ = [
    "Flowsheet",
    "SolveOptions",
    "SolveResult",
    "build_flowsheet",
    "check_structure",
    "solve",
    "wegstein_step",
    "mass_closure",
]

FEED = "<feed>"
ACCELERATIONS = ("direct", "wegstein")


def _cycles_in(graph: nx.DiGraph, rank: Mapping[str, int]) -> list[list[str]]:
    cycles = []
    for cyc in nx.simple_cycles(graph):
        i = min(range(len(cyc)), key=lambda j: rank[cyc[j]])
        cycles.append(cyc[i:] + cyc[:i])
    cycles.sort(key=lambda c: (len(c), [rank[b] for b in c]))
    return cycles


def check_structure(
    blocks: Sequence[Block],
    feeds: Iterable[str],
    tears: Sequence[str],
) -> list[FlowsheetError]:
    """Collect every structural problem rather than stopping at the first."""
    errors: list[FlowsheetError] = []
    producer: dict[str, str] = {}
    consumer: dict[str, str] = {}
    rank = {}
    for sid in feeds:
        producer[sid] = FEED
    for b in blocks:
        if b.id in rank:
            errors.append(FlowsheetError(f"duplicate block id {b.id!r}"))
            continue
        rank[b.id] = len(rank)
        for sid in b.outlets:
            if sid in producer:
                errors.append(DuplicateStreamProducer(
                    f"stream {sid!r} produced by both {producer[sid]!r} and {b.id!r}"))
            else:
                producer[sid] = b.id
        for sid in b.inlets:
            if sid in consumer:
                errors.append(DuplicateStreamConsumer(
                    f"stream {sid!r} consumed by both {consumer[sid]!r} and {b.id!r}"))
            else:
                consumer[sid] = b.id
    for b in blocks:
        for sid in b.inlets:
            if sid not in producer:
                errors.append(DanglingPort(f"block {b.id!r} inlet {sid!r} has no producer"))
    for sid in tears:
        if producer.get(sid, FEED) == FEED:
            errors.append(DanglingPort(f"tear {sid!r} is not produced by any block"))
        if sid not in consumer:
            errors.append(DanglingPort(f"tear {sid!r} is not consumed by any block"))
    if errors:
        return errors

    graph = _torn_graph(blocks, producer, consumer, set(tears))
    cycles = _cycles_in(graph, rank)
    if cycles:
        errors.append(CyclicWithoutTear(cycles))
    return errors


def _torn_graph(blocks, producer, consumer, tears) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(b.id for b in blocks)
    for sid, src in producer.items():
        dst = consumer.get(sid)
        if src == FEED or dst is None or sid in tears:
            continue
        g.add_edge(src, dst)
    return g


class Flowsheet:
    """Validated block graph with a fixed evaluation order.

    Parameters
    ----------
    blocks : sequence of Block
    feeds : mapping of stream id to Stream
    tears : sequence of stream ids cut to break recycles
    """

    def __init__(self, blocks: Sequence[Block], feeds: Mapping[str, Stream], tears: Sequence[str] = ()):
        blocks = list(blocks)
        self.feeds = dict(feeds)
        self.tears = list(tears)
        errors = check_structure(blocks, self.feeds, self.tears)
        if errors:
            raise errors[0]
        self.blocks = {b.id: b for b in blocks}
        self.producer = {sid: FEED for sid in self.feeds}
        self.consumer = {}
        for b in blocks:
            self.producer.update((s, b.id) for s in b.outlets)
            self.consumer.update((s, b.id) for s in b.inlets)
        rank = {bid: i for i, bid in enumerate(self.blocks)}
        graph = _torn_graph(blocks, self.producer, self.consumer, set(self.tears))
        self.order = list(nx.lexicographical_topological_sort(graph, key=rank.__getitem__))

    @property
    def stream_ids(self) -> list[str]:
        return list(self.producer)

    @property
    def products(self) -> list[str]:
        """Streams that leave the plant (no consuming block)."""
        return [s for s, src in self.producer.items() if src != FEED and s not in self.consumer]

    def __len__(self):
        return len(self.blocks)


def build_flowsheet(definition) -> Flowsheet:
    """Flowsheet from a parsed plant definition (anything with blocks/feeds/tears)."""
    return Flowsheet(definition.blocks, definition.feeds, definition.tears)


@dataclass
class SolveOptions:
    tolerance: float = 1e-6
    temp_tolerance: float = 0.01
    max_iterations: int = 500
    acceleration: str = "wegstein"
    wegstein_q_bounds: tuple[float, float] = (-5.0, 0.0)

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if not self.temp_tolerance > 0:
            raise ValueError("temp_tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.acceleration not in ACCELERATIONS:
            raise ValueError(f"acceleration must be one of {ACCELERATIONS}")
        lo, hi = self.wegstein_q_bounds
        if not lo < hi:
            raise ValueError("wegstein q bounds must satisfy low < high")


@dataclass
class SolveResult:
    streams: dict[str, Stream]
    iterations: int
    residual_history: list[float]
    block_duties: dict[str, float] = field(default_factory=dict)
    block_powers: dict[str, float] = field(default_factory=dict)
    converged: bool = True

    @property
    def status(self):
        return "converged" if self.converged else "not_converged"


def wegstein_step(x_prev, g_prev, x_curr, g_curr, bounds=(-5.0, 0.0)):
    """Bounded Wegstein update, coordinate by coordinate.

    Coordinates whose iterate did not move fall back to direct substitution.
    """
    x_prev, g_prev, x_curr, g_curr = (np.asarray(a, dtype=float) for a in (x_prev, g_prev, x_curr, g_curr))
    dx = x_curr - x_prev
    moved = np.abs(dx) > 1e-12
    s = np.zeros_like(dx)
    s[moved] = (g_curr[moved] - g_prev[moved]) / dx[moved]
    lo, hi = bounds
    q = np.full_like(s, lo)
    ok = s != 1.0
    q[ok] = s[ok] / (s[ok] - 1.0)
    q = np.clip(q, lo, hi)
    return q * x_curr + (1.0 - q) * g_curr


class _TearLayout:
    """Maps tear streams to and from one stacked vector (flows..., T per tear)."""

    def __init__(self, tears, names):
        self.tears = list(tears)
        self.names = list(names)
        self.width = len(self.names) + 1
        size = self.width * len(self.tears)
        self.is_temp = np.zeros(size, dtype=bool)
        self.is_temp[self.width - 1 :: self.width] = True

    def pack(self, streams):
        out = []
        for sid in self.tears:
            s = streams[sid]
            out.extend(s.flow(n) for n in self.names)
            out.append(s.temperature)
        return np.array(out, dtype=float)

    def unpack(self, vec, templates):
        streams = {}
        for i, sid in enumerate(self.tears):
            chunk = vec[i * self.width : (i + 1) * self.width]
            tpl = templates[sid]
            streams[sid] = Stream(
                dict(zip(self.names, chunk[:-1])), float(chunk[-1]), tpl.pressure, tpl.phase
            )
        return streams


def _sweep(flowsheet: Flowsheet, guesses, registry):
    current = dict(flowsheet.feeds)
    current.update(guesses)
    tears = set(flowsheet.tears)
    produced = {}
    duties, powers = {}, {}
    for bid in flowsheet.order:
        block = flowsheet.blocks[bid]
        inlets = [current[s] for s in block.inlets]
        try:
            out = evaluate(block, inlets, registry)
        except (PapsimError, ValueError, KeyError) as e:
            raise BlockError(bid, e) from e
        for sid, s in zip(block.outlets, out.streams):
            if sid in tears:
                produced[sid] = s
            else:
                current[sid] = s
        if out.duty is not None:
            duties[bid] = out.duty
        if out.power is not None:
            powers[bid] = out.power
    current.update(produced)
    return current, produced, duties, powers


def zero_tears(flowsheet: Flowsheet) -> dict[str, Stream]:
    return {sid: Stream({}, 25.0, 1.0, LIQUID) for sid in flowsheet.tears}


def solve(
    flowsheet: Flowsheet,
    options: SolveOptions | None = None,
    registry: ComponentRegistry | None = None,
    initial: Mapping[str, Stream] | None = None,
    raise_on_failure: bool = True,
) -> SolveResult:
    """Converge the tear streams by repeated full sweeps.

    The unknown is the stacked vector of every tear's component flows and
    temperature. Converged when every flow changes by at most
    ``options.tolerance`` and every temperature by ``options.temp_tolerance``
    over one sweep.

    Raises NotConverged (carrying the best iterate) when the iteration limit
    is hit, unless `raise_on_failure` is False.
    """
    options = options or SolveOptions()
    if registry is None:
        raise ValueError("a component registry is required")
    layout = _TearLayout(flowsheet.tears, registry.names)
    templates = dict(zero_tears(flowsheet))
    if initial:
        templates.update({k: v for k, v in initial.items() if k in templates})
    x = layout.pack(templates)
    x_prev = g_prev = None
    history: list[float] = []
    best = None
    converged = False
    for k in range(1, options.max_iterations + 1):
        guesses = layout.unpack(x, templates)
        streams, produced, duties, powers = _sweep(flowsheet, guesses, registry)
        g = layout.pack(produced)
        diff = np.abs(g - x)
        res = float(diff[~layout.is_temp].max(initial=0.0))
        tres = float(diff[layout.is_temp].max(initial=0.0))
        history.append(res)
        log.debug("iteration %d: flow residual %.3e, temperature residual %.3e", k, res, tres)
        if best is None or res < best[0]:
            best = (res, k, streams, duties, powers)
        if res <= options.tolerance and tres <= options.temp_tolerance:
            converged = True
            best = (res, k, streams, duties, powers)
            break
        templates = produced
        if options.acceleration == "wegstein" and x_prev is not None and k >= 3:
            x_next = wegstein_step(x_prev, g_prev, x, g, options.wegstein_q_bounds)
        else:
            x_next = g
        x_prev, g_prev = x, g
        x = np.where(layout.is_temp, x_next, np.maximum(x_next, 0.0))

    _, _, streams, duties, powers = best
    result = SolveResult(
        streams=streams,
        iterations=len(history),
        residual_history=history,
        block_duties=duties,
        block_powers=powers,
        converged=converged,
    )
    if not converged and raise_on_failure:
        raise NotConverged(result)
    return result


def mass_closure(flowsheet: Flowsheet, result: SolveResult, registry: ComponentRegistry):
    """Feed mass, product mass (kg/h) and their relative difference."""
    m_in = sum(stream_mass_flow(result.streams[s], registry) for s in flowsheet.feeds)
    m_out = sum(stream_mass_flow(result.streams[s], registry) for s in flowsheet.products)
    return m_in, m_out, abs(m_in - m_out) / m_in
