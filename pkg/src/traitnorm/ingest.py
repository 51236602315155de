"""Declarative CSV-to-graph loading.

A mapping file describes which CSV files become nodes (label, id column,
typed property columns) and which become edges (label plus source/target
lookups against node id columns).  Empty cells are absent properties;
un-coercible cells and dangling references are reported and skipped, never
fatal.  Identical inputs always produce identical graphs.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .graph import PropertyGraph


class IngestError(Exception):
    pass


COERCERS = {
    "text": str,
    "integer": int,
    "decimal": float,
    "boolean": lambda s: {"true": True, "false": False, "1": True, "0": False}[s.lower()],
    "date": datetime.date.fromisoformat,
}


@dataclass
class NodeMapping:
    file: str
    label: str
    id_column: str
    properties: dict  # column -> type name


@dataclass
class EdgeMapping:
    file: str
    label: str
    source_label: str
    source_column: str
    target_label: str
    target_column: str
    properties: dict = field(default_factory=dict)


@dataclass
class MappingSpec:
    nodes: list
    edges: list

    def validate(self) -> None:
        node_labels = {m.label for m in self.nodes}
        for em in self.edges:
            for lab in (em.source_label, em.target_label):
                if lab not in node_labels:
                    raise IngestError(
                        f"edge mapping {em.label!r} references undefined "
                        f"node label {lab!r}"
                    )
        for m in self.nodes:
            for tname in m.properties.values():
                if tname not in COERCERS:
                    raise IngestError(f"unknown coercion type {tname!r}")


def load_mapping(path) -> MappingSpec:
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    nodes = [
        NodeMapping(
            file=entry["file"],
            label=entry["label"],
            id_column=entry["id_column"],
            properties=dict(entry.get("properties", {})),
        )
        for entry in doc.get("nodes", ())
    ]
    edges = [
        EdgeMapping(
            file=entry["file"],
            label=entry["label"],
            source_label=entry["source"]["label"],
            source_column=entry["source"]["column"],
            target_label=entry["target"]["label"],
            target_column=entry["target"]["column"],
            properties=dict(entry.get("properties", {})),
        )
        for entry in doc.get("edges", ())
    ]
    spec = MappingSpec(nodes, edges)
    spec.validate()
    return spec


@dataclass
class FileStats:
    rows: int = 0
    created: int = 0
    skipped: int = 0
    coercion_failures: int = 0


@dataclass
class IngestReport:
    files: dict = field(default_factory=dict)  # "file (label)" -> FileStats
    messages: list = field(default_factory=list)

    def stats(self, name: str) -> FileStats:
        return self.files.setdefault(name, FileStats())

    def render(self) -> str:
        lines = []
        for name in sorted(self.files):
            st = self.files[name]
            lines.append(
                f"{name}: rows={st.rows} created={st.created} "
                f"skipped={st.skipped} coercion_failures={st.coercion_failures}"
            )
        lines.extend(self.messages)
        return "\n".join(lines) + "\n"


def _read_rows(data_dir: Path, filename: str, needed_columns):
    path = data_dir / filename
    if not path.exists():
        raise IngestError(f"missing file: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in needed_columns:
            if col not in header:
                raise IngestError(f"{path}: unknown column {col!r}")
        yield from reader


def load(mapping: MappingSpec, data_dir):
    """Populate a fresh graph from the mapping; returns (graph, report)."""
    mapping.validate()
    data_dir = Path(data_dir)
    graph = PropertyGraph()
    report = IngestReport()
    # (label, id value) -> node id, for edge endpoint lookups
    index = {}

    for nm in mapping.nodes:
        name = f"{nm.file} ({nm.label})"
        st = report.stats(name)
        needed = set(nm.properties) | {nm.id_column}
        for row in _read_rows(data_dir, nm.file, sorted(needed)):
            st.rows += 1
            id_value = (row.get(nm.id_column) or "").strip()
            if not id_value:
                st.skipped += 1
                report.messages.append(f"{name}: row {st.rows}: empty id cell")
                continue
            if (nm.label, id_value) in index:
                st.skipped += 1
                report.messages.append(
                    f"{name}: row {st.rows}: duplicate id {id_value!r}"
                )
                continue
            props = {}
            for col, tname in sorted(nm.properties.items()):
                cell = (row.get(col) or "").strip()
                if not cell:
                    continue
                try:
                    props[col] = COERCERS[tname](cell)
                except (ValueError, KeyError):
                    st.coercion_failures += 1
                    report.messages.append(
                        f"{name}: row {st.rows}: cannot coerce "
                        f"{col}={cell!r} to {tname}"
                    )
            nid = graph.create_node({nm.label}, props)
            index[(nm.label, id_value)] = nid
            st.created += 1

    for em in mapping.edges:
        name = f"{em.file} [{em.label}]"
        st = report.stats(name)
        needed = set(em.properties) | {em.source_column, em.target_column}
        for row in _read_rows(data_dir, em.file, sorted(needed)):
            st.rows += 1
            src_val = (row.get(em.source_column) or "").strip()
            dst_val = (row.get(em.target_column) or "").strip()
            if not src_val or not dst_val:
                st.skipped += 1
                continue
            src = index.get((em.source_label, src_val))
            dst = index.get((em.target_label, dst_val))
            if src is None or dst is None:
                st.skipped += 1
                report.messages.append(
                    f"{name}: row {st.rows}: dangling reference "
                    f"{src_val!r} -> {dst_val!r}"
                )
                continue
            props = {}
            for col, tname in sorted(em.properties.items()):
                cell = (row.get(col) or "").strip()
                if not cell:
                    continue
                try:
                    props[col] = COERCERS[tname](cell)
                except (ValueError, KeyError):
                    st.coercion_failures += 1
                    report.messages.append(
                        f"{name}: row {st.rows}: cannot coerce "
                        f"{col}={cell!r} to {tname}"
                    )
            graph.create_edge(src, dst, em.label, props)
            st.created += 1

    return graph, report
