"""Trait extraction pipeline: profile, detect, extract, enforce, verify.

The pipeline turns embedded metadata properties into canonical trait nodes.
A run proceeds in ordered phases over an exclusively held graph:

1. profile property keys (counts, distinct values, cross-type reuse);
2. create one trait node per distinct value tuple of each selected family;
3. link every matching element via HAS_TRAIT, verify coverage, then remove
   the embedded properties (recording every removed value in a ledger);
4. evaluate trait dependencies and verify the rewrite is lossless by
   reconstructing the original metadata and diffing.

Trait linking applies to node elements.  Edge properties participate in
profiling and semantic-independence analysis, but a property-graph edge
cannot be the source of another edge, so families must be scoped to node
labels.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .graph import (
    HAS_TRAIT,
    TRAIT_LABEL,
    ElementRef,
    GraphError,
    PropertyGraph,
    typed_value,
)
from .tfd import DependencySet, TraitFamily, Verdict, holds, parse_dependencies

DEFAULT_TAU = 1024


class NormalizationError(Exception):
    pass


class CatalogError(NormalizationError):
    pass


class AmbiguousReembedError(NormalizationError):
    """An element is linked to two traits of one family; re-embedding is ambiguous."""


# --------------------------------------------------------------------- config

@dataclass
class NormalizerConfig:
    """Settings for one normalization run.

    ``families`` is the explicit list to extract; ``None`` switches on
    auto-detection of single-key families from key profiles.  ``allow`` and
    ``deny`` are the operator's semantic-independence annotations.
    """

    families: Optional[list] = None
    tau: int = DEFAULT_TAU
    allow: set = field(default_factory=set)
    deny: set = field(default_factory=set)
    partial_match: bool = False
    dependencies: DependencySet = field(default_factory=DependencySet)

    def __post_init__(self):
        if self.tau < 1:
            raise NormalizationError("tau must be >= 1")


def load_config(path) -> NormalizerConfig:
    """Read a YAML config file; a dependency file path resolves relative to it."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh) or {}
    families = None
    if "families" in doc:
        families = [
            TraitFamily(
                name=entry["name"],
                keys=tuple(entry["keys"]),
                scope=frozenset(entry.get("scope", ())),
            )
            for entry in doc["families"]
        ]
    sigma = DependencySet()
    deps = doc.get("dependencies")
    if isinstance(deps, str):
        with open(path.parent / deps, "r", encoding="utf-8") as fh:
            sigma = parse_dependencies(fh.read())
    elif isinstance(deps, list):
        sigma = parse_dependencies("\n".join(deps))
    return NormalizerConfig(
        families=families,
        tau=int(doc.get("tau", DEFAULT_TAU)),
        allow=set(doc.get("allow", ())),
        deny=set(doc.get("deny", ())),
        partial_match=bool(doc.get("partial_match", False)),
        dependencies=sigma,
    )


# ------------------------------------------------------------------ profiling

@dataclass
class KeyProfile:
    """Occurrence statistics for one property key."""

    key: str
    occurrences: int = 0
    distinct_count: int = 0
    per_type: dict = field(default_factory=dict)  # element type -> count

    @property
    def cross_type_reuse(self) -> bool:
        return len(self.per_type) >= 2

    @property
    def is_candidate_identifier(self) -> bool:
        # unique per occurrence and confined to one type: data, not metadata
        return (
            self.occurrences > 0
            and self.distinct_count == self.occurrences
            and len(self.per_type) == 1
        )


def _element_type(graph: PropertyGraph, ref: ElementRef) -> str:
    if ref.kind == "node":
        return "/".join(sorted(graph.node_labels(ref.id)))
    return "()-[" + graph.edge_label(ref.id) + "]->()"


def _in_scope(graph: PropertyGraph, ref: ElementRef, scope) -> bool:
    labels = graph.labels_of(ref)
    if TRAIT_LABEL in labels:
        return False
    if not scope:
        return True
    return bool(labels & scope)


def profile_keys(graph: PropertyGraph, scope=None) -> list:
    """One profile per property key observed in scope, with exact counts."""
    scope = frozenset(scope) if scope else frozenset()
    profiles = {}
    distincts = {}
    for key in sorted(graph.known_keys):
        for ref, value in graph.elements_with_key(key):
            if not _in_scope(graph, ref, scope):
                continue
            prof = profiles.setdefault(key, KeyProfile(key))
            prof.occurrences += 1
            etype = _element_type(graph, ref)
            prof.per_type[etype] = prof.per_type.get(etype, 0) + 1
            distincts.setdefault(key, set()).add(value)
    for key, prof in profiles.items():
        prof.distinct_count = len(distincts[key])
    return [profiles[k] for k in sorted(profiles)]


def is_semantically_independent(profile: KeyProfile,
                                config: NormalizerConfig):
    """Checklist decision for one key; returns (verdict, reasons)."""
    reasons = []
    if profile.key in config.deny:
        return False, ["key is on the deny list"]
    if profile.cross_type_reuse:
        reasons.append(
            "cross-type reuse across %d element types" % len(profile.per_type)
        )
    if profile.key in config.allow:
        reasons.append("key is on the allow list")
    if not reasons:
        return False, ["no cross-type reuse and not explicitly allowed"]
    return True, reasons


# -------------------------------------------------------------------- catalog

def _tuple_sort_key(tup):
    return tuple(
        (0, "") if v is None else (1, type(v).__name__, str(v)) for v in tup
    )


@dataclass
class TraitCatalog:
    """Bijective registry (family, value tuple) <-> trait node id.

    Value tuples are aligned with the family's key order; absent components
    are ``None`` and are part of tuple identity.
    """

    _forward: dict = field(default_factory=dict)
    _reverse: dict = field(default_factory=dict)
    _family_keys: dict = field(default_factory=dict)

    @staticmethod
    def _key(family: str, value_tuple: tuple):
        # type-aware so tuples like (1,) and (True,) stay distinct
        return (family, tuple(typed_value(v) for v in value_tuple))

    def declare_family(self, family: TraitFamily) -> None:
        known = self._family_keys.get(family.name)
        if known is not None and known != family.keys:
            raise CatalogError(
                f"family {family.name!r} redeclared with different keys"
            )
        self._family_keys[family.name] = family.keys

    def family_keys(self, name: str) -> tuple:
        try:
            return self._family_keys[name]
        except KeyError:
            raise CatalogError(f"unknown trait family {name!r}") from None

    def family_names(self):
        return sorted(self._family_keys)

    def register(self, family: str, value_tuple: tuple, trait_id: int) -> None:
        key = self._key(family, value_tuple)
        if key in self._forward and self._forward[key] != trait_id:
            raise CatalogError(
                f"duplicate trait registration for {family} {value_tuple!r}"
            )
        prior = self._reverse.get(trait_id)
        if prior is not None and self._key(*prior) != key:
            raise CatalogError(f"trait node {trait_id} registered twice")
        self._forward[key] = trait_id
        self._reverse[trait_id] = (family, tuple(value_tuple))

    def lookup(self, family: str, value_tuple: tuple):
        return self._forward.get(self._key(family, value_tuple))

    def describe(self, trait_id: int):
        return self._reverse.get(trait_id)

    def trait_ids(self, family: Optional[str] = None):
        if family is None:
            return sorted(self._reverse)
        return sorted(
            tid for tid, (fam, _) in self._reverse.items() if fam == family
        )

    def __len__(self):
        return len(self._forward)


# --------------------------------------------------------------------- report

@dataclass
class NormalizationReport:
    """Per-phase audit record of one pipeline run."""

    tau: int = DEFAULT_TAU
    traits_created: dict = field(default_factory=dict)   # family -> count
    links_added: int = 0
    properties_removed: int = 0
    removed_values: list = field(default_factory=list)   # (ref, key, value)
    families_skipped: list = field(default_factory=list)  # (family, reason)
    partial_skipped: list = field(default_factory=list)   # (ref, family)
    dependency_verdicts: list = field(default_factory=list)
    lossless: Optional[bool] = None
    lossless_diffs: list = field(default_factory=list)

    @property
    def conforming(self) -> bool:
        return all(v.satisfied for v in self.dependency_verdicts)

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "traits_created": dict(sorted(self.traits_created.items())),
            "links_added": self.links_added,
            "properties_removed": self.properties_removed,
            "removed_values": [
                [str(ref), key, _jsonable(value)]
                for ref, key, value in self.removed_values
            ],
            "families_skipped": [list(t) for t in self.families_skipped],
            "partial_skipped": [
                [str(ref), family] for ref, family in self.partial_skipped
            ],
            "dependencies": [
                {
                    "dependency": str(v.dependency),
                    "satisfied": v.satisfied,
                    "violations": len(v.violations),
                    "skipped_elements": v.skipped_elements,
                    "missing_y_elements": v.missing_y_elements,
                }
                for v in self.dependency_verdicts
            ],
            "conforming": self.conforming,
            "lossless": self.lossless,
            "lossless_diffs": list(self.lossless_diffs),
        }


def _jsonable(value):
    if isinstance(value, datetime.date):
        return {"$date": value.isoformat()}
    return value


# ---------------------------------------------------------------- family sets

def select_families(graph: PropertyGraph, config: NormalizerConfig) -> list:
    """Resolve the families to extract: explicit list or auto-detected."""
    if config.families is not None:
        return list(config.families)
    families = []
    for prof in profile_keys(graph):
        ok, _ = is_semantically_independent(prof, config)
        if not ok:
            continue
        if prof.is_candidate_identifier:
            continue
        if not 1 <= prof.distinct_count <= config.tau:
            continue
        name = prof.key[:1].upper() + prof.key[1:] + "Trait"
        families.append(TraitFamily(name, (prof.key,)))
    return families


def _scope_nodes(graph: PropertyGraph, family: TraitFamily):
    if family.scope:
        seen = set()
        for label in sorted(family.scope):
            seen.update(graph.nodes_with_label(label))
        ids = sorted(seen)
    else:
        ids = graph.node_ids()
    return [
        nid for nid in ids
        if TRAIT_LABEL not in graph.node_labels(nid)
    ]


def element_tuple(graph: PropertyGraph, nid: int, family: TraitFamily):
    """The element's value tuple for a family, or None when fully absent."""
    props = graph.props(ElementRef("node", nid))
    tup = tuple(props.get(k) for k in family.keys)
    if all(v is None for v in tup):
        return None
    return tup


# --------------------------------------------------------------------- phases

def detect_traits(graph: PropertyGraph, config: NormalizerConfig,
                  report: Optional[NormalizationReport] = None):
    """Phase 1: create one trait node per distinct value tuple per family.

    Mutates the graph (adds trait nodes only; no domain element is touched)
    and returns the catalog.
    """
    report = report if report is not None else NormalizationReport(tau=config.tau)
    catalog = TraitCatalog()
    for family in select_families(graph, config):
        if config.families is not None and not any(
            k in graph.known_keys for k in family.keys
        ):
            raise NormalizationError(
                f"family {family.name!r}: none of its keys occur in the graph"
            )
        tuples = {}  # typed identity -> representative raw tuple
        for nid in _scope_nodes(graph, family):
            tup = element_tuple(graph, nid, family)
            if tup is not None:
                tuples.setdefault(tuple(typed_value(v) for v in tup), tup)
        if len(tuples) > config.tau:
            report.families_skipped.append(
                (family.name,
                 f"{len(tuples)} distinct tuples exceed tau={config.tau}")
            )
            continue
        catalog.declare_family(family)
        created = 0
        for tup in sorted(tuples.values(), key=_tuple_sort_key):
            if catalog.lookup(family.name, tup) is not None:
                continue
            props = {"family": family.name}
            props.update(
                {k: v for k, v in zip(family.keys, tup) if v is not None}
            )
            tid = graph.create_node(
                {TRAIT_LABEL, family.name}, props, privileged=True
            )
            catalog.register(family.name, tup, tid)
            created += 1
        report.traits_created[family.name] = (
            report.traits_created.get(family.name, 0) + created
        )
    return catalog, report


def _existing_links(graph: PropertyGraph, nid: int, catalog: TraitCatalog):
    """family -> set of linked trait ids for one node."""
    links = {}
    for eid in graph.out_edges(nid, HAS_TRAIT):
        _, tid = graph.edge_endpoints(eid)
        entry = catalog.describe(tid)
        if entry is not None:
            links.setdefault(entry[0], set()).add(tid)
    return links


def _partial_match(catalog: TraitCatalog, family: TraitFamily, tup):
    """Traits agreeing with the non-null components of a partial tuple."""
    hits = []
    for tid in catalog.trait_ids(family.name):
        _, full = catalog.describe(tid)
        if all(v is None or typed_value(v) == typed_value(fv)
               for v, fv in zip(tup, full)):
            hits.append(tid)
    return hits


def extract(graph: PropertyGraph, catalog: TraitCatalog,
            config: NormalizerConfig,
            report: Optional[NormalizationReport] = None) -> NormalizationReport:
    """Phase 2: link elements to their traits, then strip embedded properties.

    Linking happens first for the whole family; properties are only removed
    once the element's coverage is confirmed, so a failed match never loses
    data.  Re-running on an already-extracted graph is a no-op.
    """
    report = report if report is not None else NormalizationReport(tau=config.tau)
    for name in catalog.family_names():
        family = TraitFamily(name, catalog.family_keys(name))
        if config.families is not None:
            for fam in config.families:
                if fam.name == name:
                    family = fam
                    break
        matched = []  # (nid, trait id)
        for nid in _scope_nodes(graph, family):
            tup = element_tuple(graph, nid, family)
            if tup is None:
                continue
            tid = catalog.lookup(name, tup)
            if tid is None and config.partial_match and any(
                v is None for v in tup
            ):
                hits = _partial_match(catalog, family, tup)
                if len(hits) == 1:
                    tid = hits[0]
            if tid is None:
                report.partial_skipped.append((ElementRef("node", nid), name))
                continue
            matched.append((nid, tid))
        # link pass
        for nid, tid in matched:
            linked = _existing_links(graph, nid, catalog).get(name, set())
            if tid not in linked:
                graph.create_edge(nid, tid, HAS_TRAIT)
                report.links_added += 1
        # removal pass, only for elements whose link is in place
        for nid, tid in matched:
            ref = ElementRef("node", nid)
            for key in family.keys:
                value = graph.remove_property(ref, key)
                if value is not None:
                    report.properties_removed += 1
                    report.removed_values.append((ref, key, value))
    return report


def enforce_dependencies(graph: PropertyGraph, catalog: TraitCatalog,
                         sigma: DependencySet) -> list:
    """Phase 3: evaluate every dependency; violations are reported, never repaired."""
    return [holds(graph, catalog, dep) for dep in sigma]


def reconstruct(normalized: PropertyGraph, catalog: TraitCatalog) -> PropertyGraph:
    """Inverse rewrite: re-embed every linked trait's values and drop the traits.

    Trait links the catalog does not know about (for example from an earlier
    normalization run) are left untouched.  Raises when the catalog names a
    trait node the graph no longer has, or when one element is linked to two
    traits of the same family.
    """
    g = normalized.copy()
    trait_ids = set(catalog.trait_ids())
    for tid in sorted(trait_ids):
        if not g.has_node(tid):
            raise CatalogError(
                f"catalog names trait node {tid} which is not in the graph"
            )
    to_delete_edges = []
    for nid in g.node_ids():
        if nid in trait_ids:
            continue
        per_family = {}
        for eid in g.out_edges(nid, HAS_TRAIT):
            _, tid = g.edge_endpoints(eid)
            entry = catalog.describe(tid)
            if entry is None:
                continue
            family, tup = entry
            if family in per_family and per_family[family][0] != tid:
                raise AmbiguousReembedError(
                    f"node {nid} linked to two {family!r} traits"
                )
            per_family[family] = (tid, tup)
            to_delete_edges.append(eid)
        ref = ElementRef("node", nid)
        for family, (tid, tup) in sorted(per_family.items()):
            for key, value in zip(catalog.family_keys(family), tup):
                if value is not None:
                    g.set_property(ref, key, value)
    for eid in to_delete_edges:
        g.delete_edge(eid)
    for tid in sorted(trait_ids):
        try:
            g.delete_node(tid)
        except GraphError:
            # a non-HAS_TRAIT edge still touches this trait; leave it so
            # the lossless diff surfaces the anomaly
            pass
    return g


def _props_diff(kind: str, eid: int, expected: dict, actual: dict) -> list:
    diffs = []
    for key in sorted(set(expected) | set(actual)):
        if typed_value(expected.get(key)) != typed_value(actual.get(key)):
            diffs.append(
                f"{kind} {eid}: key {key!r} expected {expected.get(key)!r}, "
                f"got {actual.get(key)!r}"
            )
    return diffs


def verify_lossless(original: PropertyGraph, normalized: PropertyGraph,
                    catalog: TraitCatalog):
    """Phase 4 gate: reconstruct the normalized graph and diff against the original.

    Returns (ok, diffs); ``ok`` means the metadata round-trip is exact.
    """
    rebuilt = reconstruct(normalized, catalog)
    diffs = []
    orig_nodes = set(original.node_ids())
    new_nodes = set(rebuilt.node_ids())
    for nid in sorted(orig_nodes - new_nodes):
        diffs.append(f"node {nid}: missing after reconstruction")
    for nid in sorted(new_nodes - orig_nodes):
        diffs.append(f"node {nid}: unexpected extra node")
    for nid in sorted(orig_nodes & new_nodes):
        if original.node_labels(nid) != rebuilt.node_labels(nid):
            diffs.append(f"node {nid}: label set changed")
        diffs.extend(_props_diff(
            "node", nid,
            original.props(ElementRef("node", nid)),
            rebuilt.props(ElementRef("node", nid)),
        ))
    orig_edges = set(original.edge_ids())
    new_edges = set(rebuilt.edge_ids())
    for eid in sorted(orig_edges - new_edges):
        diffs.append(f"edge {eid}: missing after reconstruction")
    for eid in sorted(new_edges - orig_edges):
        diffs.append(f"edge {eid}: unexpected extra edge")
    for eid in sorted(orig_edges & new_edges):
        if (original.edge_endpoints(eid) != rebuilt.edge_endpoints(eid)
                or original.edge_label(eid) != rebuilt.edge_label(eid)):
            diffs.append(f"edge {eid}: topology changed")
        diffs.extend(_props_diff(
            "edge", eid,
            original.props(ElementRef("edge", eid)),
            rebuilt.props(ElementRef("edge", eid)),
        ))
    return (not diffs), diffs


# ------------------------------------------------------------------- pipeline

@dataclass
class PipelineResult:
    graph: PropertyGraph
    catalog: TraitCatalog
    report: NormalizationReport


def run_pipeline(graph: PropertyGraph, config: NormalizerConfig) -> PipelineResult:
    """Full run on a copy of the input graph: detect, extract, enforce, verify."""
    original = graph
    work = graph.copy()
    report = NormalizationReport(tau=config.tau)
    catalog, _ = detect_traits(work, config, report)
    extract(work, catalog, config, report)
    report.dependency_verdicts = enforce_dependencies(
        work, catalog, config.dependencies
    )
    ok, diffs = verify_lossless(original, work, catalog)
    report.lossless = ok
    report.lossless_diffs = diffs[:100]
    return PipelineResult(work, catalog, report)
