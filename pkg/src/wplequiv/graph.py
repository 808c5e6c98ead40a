"""Graphs of equivariant relations between weight types, with DOT and JSON output.

Nodes are weight types (weights >= 2, sorted descending); nodes of type
(2,2,2,2) also carry a parameter orbit.  Every edge carries one admissible
homomorphism as witness.  Closure is a worklist in seed order, so node and
edge order are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .homs import AdmissibleRecord, enumerate_admissible
from .string_group import GroupTypeClass, WeightSeq, classify_type
from .subgroups import TRIVIAL
from .tubular import W2222, ParamOrbit, edge_target_orbits, format_value, gamma

DEFAULT_PARAM_DEPTH = 2
DEFAULT_WILD_DEPTH = 1


@dataclass(eq=False)
class RelationNode:
    weights: WeightSeq
    orbit: Optional[ParamOrbit] = None
    depth: int = 0

    def same(self, weights: WeightSeq, orbit: Optional[ParamOrbit]) -> bool:
        if self.weights != weights:
            return False
        if self.orbit is None or orbit is None:
            return self.orbit is None and orbit is None
        return self.orbit == orbit

    @property
    def parameter(self):
        return None if self.orbit is None else self.orbit.representative

    @property
    def node_id(self) -> str:
        base = "w" + "_".join(map(str, self.weights.weights)) if self.weights.t else "w"
        if self.orbit is not None:
            base += "_lam_" + format_value(self.parameter)
        return base

    @property
    def label(self) -> str:
        inner = ",".join(map(str, self.weights.weights))
        if self.orbit is not None:
            inner += ";" + format_value(self.parameter)
        return f"({inner})"

    def to_json(self) -> dict:
        out: dict = {"id": self.node_id, "weights": list(self.weights.weights)}
        if self.orbit is not None:
            out["parameter"] = format_value(self.parameter)
            out["orbit"] = self.orbit.literals()
        return out


@dataclass(frozen=True, eq=False)
class RelationEdge:
    source: RelationNode
    target: RelationNode
    label: str
    witness: AdmissibleRecord

    def to_json(self) -> dict:
        return {
            "source": self.source.node_id,
            "target": self.target.node_id,
            "label": self.label,
            "kernel": self.witness.kernel.describe(),
            "witness": self.witness.to_json(),
        }


@dataclass
class RelationGraph:
    nodes: list[RelationNode] = field(default_factory=list)
    edges: list[RelationEdge] = field(default_factory=list)

    def find(self, weights: WeightSeq, orbit: Optional[ParamOrbit]) -> Optional[RelationNode]:
        return next((n for n in self.nodes if n.same(weights, orbit)), None)

    def arrows(self) -> list[tuple[str, str, str]]:
        return [(e.source.node_id, e.target.node_id, e.label) for e in self.edges]


def canonical_weights(p: WeightSeq) -> WeightSeq:
    return WeightSeq(p.type_key())


def _targets(node: RelationNode, rec: AdmissibleRecord, cache: dict) -> list[tuple[WeightSeq, Optional[ParamOrbit]]]:
    q = canonical_weights(rec.codomain)
    tubular = classify_type(node.weights) == GroupTypeClass.TUBULAR
    if q.weights != W2222 or not tubular:
        return [(q, None)]
    out = []
    for target, orbits in edge_target_orbits(node.weights, node.parameter, rec.kernel, cache):
        if target == W2222:
            out += [(q, o) for o in orbits or []]
    return out


def _is_wild(p: WeightSeq) -> bool:
    return classify_type(p) == GroupTypeClass.WILD


def build_graph(
    seeds: Sequence[tuple[WeightSeq, object]],
    param_depth: int = DEFAULT_PARAM_DEPTH,
    wild_depth: int = DEFAULT_WILD_DEPTH,
) -> RelationGraph:
    """Close the seeds under admissible homomorphisms with nontrivial kernel.

    A (2,2,2,2) node reached through k parameter-changing steps from the last
    node of another type is expanded only while k < param_depth; without this
    cut the chains lambda -> f(sqrt(lambda')) -> ... need not terminate.
    Likewise a wild node k steps below a seed is expanded only while
    k < wild_depth: a kernel of order n multiplies the (negative) orbifold
    Euler characteristic by n, so wild codomains grow without bound.
    """
    g = RelationGraph()
    work: list[RelationNode] = []
    seen_edges: set = set()

    def add(weights: WeightSeq, orbit: Optional[ParamOrbit], depth: int) -> RelationNode:
        node = g.find(weights, orbit)
        if node is None:
            node = RelationNode(weights, orbit, depth)
            g.nodes.append(node)
            work.append(node)
        return node

    for p, lam in seeds:
        w = canonical_weights(p)
        orbit = None
        if w.weights == W2222:
            if lam is None:
                raise ValueError("a (2,2,2,2) seed needs a parameter")
            orbit = gamma(lam)
        add(w, orbit, 0)

    while work:
        node = work.pop(0)
        if node.orbit is not None and node.depth >= param_depth:
            continue
        if node.orbit is None and node.depth >= wild_depth:
            continue
        cache: dict = {}
        for rec in enumerate_admissible(node.weights):
            if rec.kernel.kind == TRIVIAL:
                continue
            for q, orbit in _targets(node, rec, cache):
                if node.orbit is not None and orbit is not None:
                    depth = node.depth + 1
                elif _is_wild(q):
                    depth = node.depth + 1
                else:
                    depth = 0
                target = add(q, orbit, depth)
                key = (id(node), id(target), rec.kernel.label())
                if key not in seen_edges:
                    seen_edges.add(key)
                    g.edges.append(RelationEdge(node, target, rec.kernel.label(), rec))
    return g


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: RelationGraph, name: str = "equivariant") -> str:
    lines = [f"digraph {name} {{"]
    for n in g.nodes:
        lines.append(f"  {_quote(n.node_id)} [label={_quote(n.label)}];")
    for e in g.edges:
        lines.append(f"  {_quote(e.source.node_id)} -> {_quote(e.target.node_id)} [label={_quote(e.label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(g: RelationGraph) -> dict:
    return {"nodes": [n.to_json() for n in g.nodes], "edges": [e.to_json() for e in g.edges]}
