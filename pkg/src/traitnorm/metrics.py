"""Quantitative measures: metadata reuse, schema complexity, redundancy.

All functions are read-only over a graph snapshot.  Two reuse ratios are
reported: ``mrr_embedded`` over properties still embedded on domain
elements, and ``trait_reuse_ratio`` (HAS_TRAIT links per trait node) for a
normalized graph.  Reporting both keeps the before/after comparison honest,
since after extraction the embedded ratio degenerates to its 1.0 floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import HAS_TRAIT, TRAIT_LABEL, ElementRef, PropertyGraph, typed_value
from .normalize import _scope_nodes, element_tuple


class MetricsError(Exception):
    pass


@dataclass
class MetricsReport:
    families: tuple = ()
    embedded_occurrences: int = 0
    distinct_tuples: int = 0
    mrr_embedded: float = 1.0
    trait_nodes: int = 0
    trait_links: int = 0
    trait_reuse_ratio: Optional[float] = None
    scm: int = 0
    node_count: int = 0
    edge_count: int = 0
    attribute_count: int = 0
    per_key: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "families": list(self.families),
            "embedded_occurrences": self.embedded_occurrences,
            "distinct_tuples": self.distinct_tuples,
            "mrr_embedded": round(self.mrr_embedded, 4),
            "trait_nodes": self.trait_nodes,
            "trait_links": self.trait_links,
            "trait_reuse_ratio": (
                None if self.trait_reuse_ratio is None
                else round(self.trait_reuse_ratio, 4)
            ),
            "scm": self.scm,
            "nodes": self.node_count,
            "edges": self.edge_count,
            "attributes": self.attribute_count,
            "per_key": dict(sorted(self.per_key.items())),
        }


def scm(graph: PropertyGraph) -> int:
    """Schema complexity: node count + edge count + property instances."""
    return (
        graph.node_count()
        + graph.edge_count()
        + graph.property_instance_count()
    )


def trait_property_instances(graph: PropertyGraph) -> int:
    total = 0
    for nid in graph.nodes_with_label(TRAIT_LABEL):
        total += len(graph.props(ElementRef("node", nid)))
    return total


def _family_counts(graph: PropertyGraph, families):
    occurrences = 0
    distinct = 0
    per_key = {}
    for family in families:
        tuples = set()
        for nid in _scope_nodes(graph, family):
            tup = element_tuple(graph, nid, family)
            if tup is None:
                continue
            tuples.add(tuple(typed_value(v) for v in tup))
            for key, value in zip(family.keys, tup):
                if value is not None:
                    occurrences += 1
                    per_key[key] = per_key.get(key, 0) + 1
        distinct += len(tuples)
    return occurrences, distinct, per_key


def mrr(graph: PropertyGraph, families) -> float:
    """Metadata reuse ratio: non-null occurrences over distinct value tuples.

    1.0 by convention when there are no occurrences left to count.
    """
    if not families:
        raise MetricsError("mrr needs at least one family")
    occurrences, distinct, _ = _family_counts(graph, families)
    if occurrences == 0:
        return 1.0
    return occurrences / distinct


def compute_metrics(graph: PropertyGraph, families) -> MetricsReport:
    occurrences, distinct, per_key = _family_counts(graph, families)
    trait_nodes = len(graph.nodes_with_label(TRAIT_LABEL))
    trait_links = len(graph.edges_with_label(HAS_TRAIT))
    return MetricsReport(
        families=tuple(f.name for f in families),
        embedded_occurrences=occurrences,
        distinct_tuples=distinct,
        mrr_embedded=(occurrences / distinct) if occurrences else 1.0,
        trait_nodes=trait_nodes,
        trait_links=trait_links,
        trait_reuse_ratio=(trait_links / trait_nodes) if trait_nodes else None,
        scm=scm(graph),
        node_count=graph.node_count(),
        edge_count=graph.edge_count(),
        attribute_count=graph.property_instance_count(),
        per_key=per_key,
    )


def redundancy_removed(pre: MetricsReport, post: MetricsReport) -> int:
    """Duplicate instances beyond first occurrences, from the pre-state counts."""
    if pre.families != post.families:
        raise MetricsError(
            f"scope mismatch: {pre.families} vs {post.families}"
        )
    return pre.embedded_occurrences - pre.distinct_tuples


def ablation_table(states, families) -> list:
    """One measured row per labeled graph state (replaces High/Medium/Low prose)."""
    rows = []
    for label, graph in states:
        report = compute_metrics(graph, families)
        row = {"state": label}
        row.update(report.to_dict())
        del row["per_key"]
        rows.append(row)
    return rows


def render_table(rows, columns=None) -> str:
    """Aligned-text rendering of a list of flat dict rows."""
    if not rows:
        return "(no rows)\n"
    if columns is None:
        columns = list(rows[0])
    cells = [[str(c) for c in columns]]
    for row in rows:
        cells.append([_fmt(row.get(c)) for c in columns])
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4g}"
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    return str(value)
