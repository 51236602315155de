"""Schema view of a property graph: observed node/edge types and their keys."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import ElementRef, PropertyGraph


@dataclass
class GraphSchema:
    """Type-level summary: label combinations, edge-type triples, keys per type.

    Derived from an instance rather than declared up front; every property key
    observed in the graph appears under at least one type.
    """

    node_types: set = field(default_factory=set)      # frozenset of labels
    edge_types: set = field(default_factory=set)      # (src label, edge label, dst label)
    keys_per_type: dict = field(default_factory=dict)  # type -> set of keys
    trait_families: dict = field(default_factory=dict)  # family name -> key tuple


def derive_schema(graph: PropertyGraph, families=None) -> GraphSchema:
    schema = GraphSchema()
    for nid in graph.node_ids():
        labels = graph.node_labels(nid)
        schema.node_types.add(labels)
        schema.keys_per_type.setdefault(labels, set()).update(
            graph.props(ElementRef("node", nid))
        )
    for eid in graph.edge_ids():
        src, dst = graph.edge_endpoints(eid)
        label = graph.edge_label(eid)
        for s_lab in graph.node_labels(src):
            for d_lab in graph.node_labels(dst):
                schema.edge_types.add((s_lab, label, d_lab))
        schema.keys_per_type.setdefault(label, set()).update(
            graph.props(ElementRef("edge", eid))
        )
    for fam in families or ():
        schema.trait_families[fam.name] = fam.keys
    return schema
