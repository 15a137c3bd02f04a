"""Maximum processable flow through a staged plant.

Two interchangeable backends compute the same quantity:

- "lp": an equality-form linear program over per-edge flows plus one
  processing variable per station (intake at the first stage, bridged
  throughput at middle stages, delivery at the last stage) and the objective
  variable u. Flow is conserved per node and per stage label, so material on
  an m-labelled edge stays m-labelled until a stage-(m+1) station processes
  it.
- "maxflow": the equivalent layered graph, one copy of every node per stage
  label, with edges as intra-layer arcs and stations as source, bridge, or
  sink arcs. A station's capacity bounds its arc; Dinic's algorithm does the
  rest.

Both backends honour the three node-capacity semantics from
model.apply_scenario. Agreement between them to 1e-9 is part of the test
suite; if they ever split, trust neither and look for a modelling bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dinic
from .errors import PlantDataError
from .lp import OPTIMAL, LinearProgram, solve_lp
from .model import (
    EDGE_MIN,
    STATION_THROUGHPUT,
    ComponentModel,
    EffectiveCapacities,
    PlantNetwork,
    apply_scenario,
)

LP_BACKEND = "lp"
MAXFLOW_BACKEND = "maxflow"
BACKENDS = (LP_BACKEND, MAXFLOW_BACKEND)


def _check_backend(backend: str) -> None:
    if backend not in BACKENDS:
        raise PlantDataError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


# ---------------------------------------------------------------------------
# LP formulation


@dataclass(frozen=True)
class FlowProgram:
    """LP plus the column map needed to read a solution back."""

    lp: LinearProgram
    edge_var: dict[str, int]
    station_var: dict[int, int]
    u_var: int


def build_flow_lp(net: PlantNetwork, caps: EffectiveCapacities) -> FlowProgram:
    """Assemble the throughput LP for one set of effective capacities.

    Station variables are bounded by station capacity only in
    station-throughput mode; the folding modes already pushed node limits
    into the edge bounds.
    """
    edge_var = {e.edge_id: i for i, e in enumerate(net.edges)}
    station_var: dict[int, int] = {}
    col = len(net.edges)
    for members in net.stations:
        for s in members:
            station_var[s] = col
            col += 1
    u_var = col
    n_vars = col + 1

    bound_stations = caps.mode == STATION_THROUGHPUT
    lower = [0.0] * n_vars
    upper = [0.0] * n_vars
    for e in net.edges:
        upper[edge_var[e.edge_id]] = caps.edge_cap[e.edge_id]
    for s, j in station_var.items():
        upper[j] = caps.station_cap[s] if bound_stations else math.inf
    upper[u_var] = math.inf
    objective = [0.0] * n_vars
    objective[u_var] = 1.0

    # Per (node, stage label) balance: net outflow minus the station term.
    balance: dict[tuple[int, int], list[tuple[int, float]]] = {}
    for e in net.edges:
        j = edge_var[e.edge_id]
        balance.setdefault((e.tail, e.stage), []).append((j, 1.0))
        balance.setdefault((e.head, e.stage), []).append((j, -1.0))
    last = net.num_stages
    for s, stage in net.station_stage.items():
        j = station_var[s]
        if stage == 1:
            balance.setdefault((s, 1), []).append((j, -1.0))
        elif stage == last:
            balance.setdefault((s, last - 1), []).append((j, 1.0))
        else:
            balance.setdefault((s, stage - 1), []).append((j, 1.0))
            balance.setdefault((s, stage), []).append((j, -1.0))

    rows = [tuple(terms) for _, terms in sorted(balance.items())]
    intake = [(station_var[s], 1.0) for s in net.stations[0]]
    delivery = [(station_var[s], 1.0) for s in net.stations[last - 1]]
    rows.append(tuple(intake + [(u_var, -1.0)]))
    rows.append(tuple(delivery + [(u_var, -1.0)]))
    rhs = [0.0] * len(rows)

    lp = LinearProgram(
        objective=tuple(objective),
        rows=tuple(rows),
        rhs=tuple(rhs),
        lower=tuple(lower),
        upper=tuple(upper),
    )
    return FlowProgram(lp=lp, edge_var=edge_var, station_var=station_var, u_var=u_var)


# ---------------------------------------------------------------------------
# Layered-graph reduction


@dataclass(frozen=True)
class LayeredArc:
    tail: int
    head: int
    capacity: float
    kind: str  # "edge" | "source" | "bridge" | "sink"
    ref: int | str  # edge id for edge arcs, station node otherwise


@dataclass(frozen=True)
class LayeredGraph:
    num_vertices: int
    source: int
    sink: int
    arcs: tuple[LayeredArc, ...]


def _station_arc_cap(caps: EffectiveCapacities, station: int, huge: float) -> float:
    if caps.mode == STATION_THROUGHPUT:
        return caps.station_cap[station]
    return huge


def build_layered_graph(
    net: PlantNetwork,
    caps: EffectiveCapacities,
    prune_zero: bool = False,
) -> LayeredGraph:
    """One vertex per (node, stage label), plus a super source and sink.

    Outside station-throughput mode the station arcs get a capacity larger
    than any achievable flow, standing in for "unbounded" without infinities.
    prune_zero drops arcs with zero capacity; that never changes the maximum
    flow and keeps searches on heavily failed scenarios short.
    """
    n, layers = net.num_nodes, net.num_stages - 1
    source = layers * n
    sink = source + 1

    def vertex(node: int, label: int) -> int:
        return (label - 1) * n + node - 1

    huge = 1.0 + float(sum(caps.edge_cap.values()))
    arcs: list[LayeredArc] = []
    for e in net.edges:
        arcs.append(LayeredArc(vertex(e.tail, e.stage), vertex(e.head, e.stage),
                               caps.edge_cap[e.edge_id], "edge", e.edge_id))
    last = net.num_stages
    for stage, members in enumerate(net.stations, start=1):
        for s in members:
            cap = _station_arc_cap(caps, s, huge)
            if stage == 1:
                arcs.append(LayeredArc(source, vertex(s, 1), cap, "source", s))
            elif stage == last:
                arcs.append(LayeredArc(vertex(s, layers), sink, cap, "sink", s))
            else:
                arcs.append(LayeredArc(vertex(s, stage - 1), vertex(s, stage), cap, "bridge", s))
    if prune_zero:
        arcs = [a for a in arcs if a.capacity > 0.0]
    return LayeredGraph(num_vertices=layers * n + 2, source=source, sink=sink, arcs=tuple(arcs))


# ---------------------------------------------------------------------------
# Public entry point


@dataclass(frozen=True)
class FlowSolution:
    """Throughput plus how it moves: per-edge flow and per-station load."""

    value: float
    mode: str
    backend: str
    edge_flow: dict[str, float]
    station_flow: dict[int, float]


def max_processable_flow(
    net: PlantNetwork,
    model: ComponentModel | None = None,
    assignment: dict[str, int] | None = None,
    *,
    mode: str = STATION_THROUGHPUT,
    backend: str = MAXFLOW_BACKEND,
) -> FlowSolution:
    """Maximum end-to-end throughput for one scenario.

    With no model the plant is taken as fully operational; with a model and
    no assignment, every component is up. The two backends are exchangeable;
    "maxflow" is the faster default, "lp" the transparent reference.
    """
    _check_backend(backend)
    if model is None:
        if assignment:
            raise PlantDataError("assignment given without a component model")
        model = ComponentModel(rvs=())
    if assignment is None:
        assignment = model.all_up()
    caps = apply_scenario(net, model, assignment, mode)

    if backend == LP_BACKEND:
        prog = build_flow_lp(net, caps)
        sol = solve_lp(prog.lp)
        if sol.status != OPTIMAL:
            raise RuntimeError(f"throughput LP ended {sol.status}, expected optimal")
        x = sol.x
        edge_flow = {eid: x[j] for eid, j in prog.edge_var.items()}
        station_flow = {s: x[j] for s, j in prog.station_var.items()}
        return FlowSolution(sol.objective_value, mode, backend, edge_flow, station_flow)

    graph = build_layered_graph(net, caps, prune_zero=True)
    tails = [a.tail for a in graph.arcs]
    heads = [a.head for a in graph.arcs]
    arc_caps = [a.capacity for a in graph.arcs]
    result = dinic.max_flow(graph.num_vertices, graph.source, graph.sink,
                            tails, heads, arc_caps)
    edge_flow = {e.edge_id: 0.0 for e in net.edges}
    station_flow = {s: 0.0 for s in net.station_stage}
    for arc, f in zip(graph.arcs, result.arc_flow):
        if arc.kind == "edge":
            edge_flow[arc.ref] = f
        else:
            station_flow[arc.ref] = f
    return FlowSolution(result.value, mode, backend, edge_flow, station_flow)


# ---------------------------------------------------------------------------
# Compiled evaluator for repeated scenario queries


class SystemFunction:
    """Survival predicate over component states, compiled once per model.

    evaluate() answers "does throughput reach the target" for a 0/1 state
    vector ordered like rv_ids, using an exact >= comparison with no
    tolerance. The maxflow backend vectorises capacity updates and lets
    Dinic stop at the target; the lp backend re-solves the program each call
    and exists as a slow cross-check.
    """

    def __init__(
        self,
        net: PlantNetwork,
        model: ComponentModel,
        target: float,
        mode: str = STATION_THROUGHPUT,
        backend: str = MAXFLOW_BACKEND,
    ):
        _check_backend(backend)
        # apply_scenario also validates mode and the model/network pairing
        apply_scenario(net, model, model.all_up(), mode)
        self.net = net
        self.model = model
        self.target = float(target)
        self.mode = mode
        self.backend = backend
        self.rv_ids = tuple(rv.rv_id for rv in model.rvs)
        self.num_rvs = len(self.rv_ids)
        self.supports_margins = backend == MAXFLOW_BACKEND and mode == STATION_THROUGHPUT
        if backend == MAXFLOW_BACKEND:
            self._compile()

    def _compile(self) -> None:
        net, model = self.net, self.model
        rv_of_asset: dict[int | str, int] = {}
        for i, rv in enumerate(model.rvs):
            for asset in rv.assets:
                rv_of_asset[asset] = i

        n, layers = net.num_nodes, net.num_stages - 1
        self._num_vertices = layers * n + 2
        self._source = layers * n
        self._sink = self._source + 1

        def vertex(node: int, label: int) -> int:
            return (label - 1) * n + node - 1

        node_cap = np.array([net.resolved_node_capacity(v) for v in range(1, n + 1)])
        node_rv = np.array([rv_of_asset.get(v, -1) for v in range(1, n + 1)], dtype=np.int64)

        e_tails, e_heads = [], []
        for e in net.edges:
            e_tails.append(vertex(e.tail, e.stage))
            e_heads.append(vertex(e.head, e.stage))
        self._edge_nominal = np.array([e.capacity for e in net.edges])
        self._edge_rv = np.array([rv_of_asset.get(e.edge_id, -1) for e in net.edges],
                                 dtype=np.int64)
        self._tail_cap = np.array([node_cap[e.tail - 1] for e in net.edges])
        self._head_cap = np.array([node_cap[e.head - 1] for e in net.edges])
        self._tail_rv = np.array([node_rv[e.tail - 1] for e in net.edges], dtype=np.int64)
        self._head_rv = np.array([node_rv[e.head - 1] for e in net.edges], dtype=np.int64)

        bound_stations = self.mode == STATION_THROUGHPUT
        huge = 1.0 + float(np.sum(np.maximum(self._edge_nominal,
                                             np.maximum(self._tail_cap, self._head_cap))))
        a_tails, a_heads, a_caps, a_rv = [], [], [], []
        last = net.num_stages
        for stage, members in enumerate(net.stations, start=1):
            for s in members:
                if stage == 1:
                    a_tails.append(self._source)
                    a_heads.append(vertex(s, 1))
                elif stage == last:
                    a_tails.append(vertex(s, layers))
                    a_heads.append(self._sink)
                else:
                    a_tails.append(vertex(s, stage - 1))
                    a_heads.append(vertex(s, stage))
                a_caps.append(node_cap[s - 1] if bound_stations else huge)
                a_rv.append(rv_of_asset.get(s, -1) if bound_stations else -1)
        self._att_nominal = np.array(a_caps)
        self._att_rv = np.array(a_rv, dtype=np.int64)
        self._tails = np.array(e_tails + a_tails, dtype=np.int64)
        self._heads = np.array(e_heads + a_heads, dtype=np.int64)
        # per-arc owner, for flow attribution in importance margins
        self.arc_rv = np.concatenate([self._edge_rv, self._att_rv])
        self.num_arcs = self.arc_rv.size

    def _scenario_caps(self, states: np.ndarray) -> np.ndarray:
        ext = np.empty(self.num_rvs + 1)
        ext[:self.num_rvs] = states
        ext[self.num_rvs] = 1.0  # sentinel for assets owned by no rv
        edge = self._edge_nominal * ext[self._edge_rv]
        if self.mode == STATION_THROUGHPUT:
            att = self._att_nominal * ext[self._att_rv]
        else:
            tail = self._tail_cap * ext[self._tail_rv]
            head = self._head_cap * ext[self._head_rv]
            fold = np.minimum if self.mode == EDGE_MIN else np.maximum
            edge = fold(edge, fold(tail, head))
            att = self._att_nominal
        return np.concatenate([edge, att])

    def _run_dinic(self, states: np.ndarray, cutoff: float | None):
        caps = self._scenario_caps(np.asarray(states, dtype=np.float64))
        alive = np.nonzero(caps > 0.0)[0]
        return caps, alive, dinic.max_flow(
            self._num_vertices, self._source, self._sink,
            self._tails[alive], self._heads[alive], caps[alive], cutoff=cutoff)

    def flow_value(self, states, cutoff: float | None = None) -> float:
        """Throughput for one state vector; cutoff only for predicates."""
        if self.backend == LP_BACKEND:
            return self._lp_value(states)
        return self._run_dinic(states, cutoff)[2].value

    def arc_profile(self, states) -> tuple[float, np.ndarray]:
        """Full maximum flow and the per-arc flows achieving it."""
        if self.backend == LP_BACKEND:
            raise PlantDataError("arc profiles need the maxflow backend")
        _, alive, result = self._run_dinic(states, None)
        flows = np.zeros(self.num_arcs)
        flows[alive] = result.arc_flow
        return result.value, flows

    def evaluate(self, states) -> bool:
        """True when the plant still reaches its target throughput."""
        if self.backend == LP_BACKEND:
            return self._lp_value(states) >= self.target
        return self._run_dinic(states, self.target)[2].value >= self.target

    def _lp_value(self, states) -> float:
        assignment = {rv_id: int(s) for rv_id, s in zip(self.rv_ids, states)}
        sol = max_processable_flow(self.net, self.model, assignment,
                                   mode=self.mode, backend=LP_BACKEND)
        return sol.value

    def rv_arc_caps(self) -> np.ndarray:
        """Per rv: total nominal capacity of the arcs its failure removes."""
        if not self.supports_margins:
            raise PlantDataError("margins need the maxflow backend in station-throughput mode")
        nominal = np.concatenate([self._edge_nominal, self._att_nominal])
        owned = self.arc_rv >= 0
        return np.bincount(self.arc_rv[owned], weights=nominal[owned],
                           minlength=self.num_rvs)

    def rv_flow_through(self, arc_flows: np.ndarray) -> np.ndarray:
        """Per rv: how much of a given flow runs over arcs it owns."""
        if not self.supports_margins:
            raise PlantDataError("margins need the maxflow backend in station-throughput mode")
        owned = self.arc_rv >= 0
        return np.bincount(self.arc_rv[owned], weights=arc_flows[owned],
                           minlength=self.num_rvs)


def compile_system(
    net: PlantNetwork,
    model: ComponentModel,
    target: float,
    *,
    mode: str = STATION_THROUGHPUT,
    backend: str = MAXFLOW_BACKEND,
) -> SystemFunction:
    """Build the survival predicate used by the sampling estimators."""
    return SystemFunction(net, model, target, mode, backend)
