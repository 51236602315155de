"""Conformance checks: the trait-normal-form conditions and a basic atomicity scan."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import HAS_TRAIT, TRAIT_LABEL, ElementRef, PropertyGraph, typed_value
from .normalize import NormalizerConfig, _scope_nodes, select_families
from .tfd import TraitFamily


@dataclass
class ConformanceReport:
    """Result of the three-condition normal-form check.

    * canonicality: no two trait nodes represent the same (family, value tuple);
    * atomicity: every trait node carries exactly one well-formed value tuple;
    * exclusivity: no in-scope metadata key remains embedded on a domain
      element, and trait nodes are reachable only through HAS_TRAIT edges.
    """

    canonicality_violations: list = field(default_factory=list)
    atomicity_violations: list = field(default_factory=list)
    exclusivity_findings: list = field(default_factory=list)

    @property
    def conforming(self) -> bool:
        return not (
            self.canonicality_violations
            or self.atomicity_violations
            or self.exclusivity_findings
        )

    @property
    def finding_count(self) -> int:
        return (
            len(self.canonicality_violations)
            + len(self.atomicity_violations)
            + len(self.exclusivity_findings)
        )

    def to_dict(self) -> dict:
        return {
            "conforming": self.conforming,
            "canonicality_violations": list(self.canonicality_violations),
            "atomicity_violations": list(self.atomicity_violations),
            "exclusivity_findings": list(self.exclusivity_findings),
            "finding_count": self.finding_count,
        }


def check_5gnf(graph: PropertyGraph, config: NormalizerConfig,
               schema=None) -> ConformanceReport:
    report = ConformanceReport()
    families = {f.name: f for f in select_families(graph, config)}
    if schema is not None:
        for name, keys in getattr(schema, "trait_families", {}).items():
            families.setdefault(name, TraitFamily(name, tuple(keys)))

    # families only visible through existing trait nodes (auto-detect configs
    # lose the embedded key after extraction): infer their key tuple
    inferred = {}
    for nid in graph.nodes_with_label(TRAIT_LABEL):
        props = graph.props(ElementRef("node", nid))
        name = props.get("family")
        if name and name not in families:
            inferred.setdefault(name, set()).update(set(props) - {"family"})
    for name, keys in inferred.items():
        if keys:
            families[name] = TraitFamily(name, tuple(sorted(keys)))

    # canonicality + atomicity over trait nodes
    seen = {}
    for nid in sorted(graph.nodes_with_label(TRAIT_LABEL)):
        props = graph.props(ElementRef("node", nid))
        family_name = props.get("family")
        family = families.get(family_name)
        if family is None:
            report.atomicity_violations.append(
                f"trait node {nid}: unknown or missing family "
                f"({family_name!r})"
            )
            continue
        extra = set(props) - set(family.keys) - {"family"}
        if extra:
            report.atomicity_violations.append(
                f"trait node {nid}: carries keys outside its value tuple: "
                + ", ".join(sorted(extra))
            )
        components = tuple(props.get(k) for k in family.keys)
        if all(v is None for v in components):
            report.atomicity_violations.append(
                f"trait node {nid}: empty value tuple"
            )
        ident = (family_name, tuple(typed_value(v) for v in components))
        if ident in seen:
            report.canonicality_violations.append(
                f"trait nodes {seen[ident]} and {nid} both represent "
                f"{family_name} {components!r}"
            )
        else:
            seen[ident] = nid

    # exclusivity (a): embedded metadata keys in scope
    for name in sorted(families):
        family = families[name]
        for nid in _scope_nodes(graph, family):
            ref = ElementRef("node", nid)
            props = graph.props(ref)
            for key in family.keys:
                if key in props:
                    report.exclusivity_findings.append(
                        f"node {nid}: embedded metadata key {key!r} "
                        f"(family {name})"
                    )

    # exclusivity (b): only HAS_TRAIT edges may target a trait node
    trait_nodes = set(graph.nodes_with_label(TRAIT_LABEL))
    for eid in graph.edge_ids():
        _, dst = graph.edge_endpoints(eid)
        if dst in trait_nodes and graph.edge_label(eid) != HAS_TRAIT:
            report.exclusivity_findings.append(
                f"edge {eid}: label {graph.edge_label(eid)!r} targets "
                f"trait node {dst}"
            )
    return report


#: default heuristics for spotting delimiter-packed composite strings
COMPOSITE_DELIMITERS = (";", "|")


def check_1gnf_atomicity(graph: PropertyGraph,
                         delimiters=COMPOSITE_DELIMITERS) -> list:
    """Advisory scan for property values that look like packed collections.

    Returns (element ref, key, value) findings; a finding is a hint, not a
    violation — the scalar-only rule is already enforced at write time.
    """
    findings = []
    for ref in graph.element_refs():
        for key, value in sorted(graph.props(ref).items()):
            if isinstance(value, str) and any(d in value for d in delimiters):
                findings.append((ref, key, value))
    return findings
