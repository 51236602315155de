"""Trait functional dependencies: closure, implication, and instance checks.

Dependencies range over trait *families* (named key groups), not individual
trait values.  ``closure``/``implies`` do family-level reasoning with the
reflexivity/augmentation/transitivity rules; ``holds`` checks a concrete
graph whose elements are already linked to trait nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import HAS_TRAIT, PropertyGraph


class DependencyError(Exception):
    pass


class UndeclaredFamilyError(DependencyError):
    pass


class MalformedLinkingError(DependencyError):
    """An element is linked to more than one trait of the same family."""


@dataclass(frozen=True)
class TraitFamily:
    """A named group of property keys extracted together into one trait class.

    ``scope`` restricts which node labels the family applies to; an empty
    scope means "any element carrying the keys".
    """

    name: str
    keys: tuple
    scope: frozenset = frozenset()

    def __post_init__(self):
        keys = tuple(self.keys)
        if not keys:
            raise DependencyError(f"family {self.name!r} has an empty key tuple")
        if len(set(keys)) != len(keys):
            raise DependencyError(f"family {self.name!r} has duplicate keys")
        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "scope", frozenset(self.scope))


@dataclass(frozen=True)
class TraitDependency:
    """X -> Y over family names.  Trivial dependencies (Y ⊆ X) are allowed."""

    lhs: frozenset
    rhs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "lhs", frozenset(self.lhs))
        object.__setattr__(self, "rhs", frozenset(self.rhs))
        if not self.lhs or not self.rhs:
            raise DependencyError("dependency sides must be non-empty")

    def __str__(self) -> str:
        return "{} -> {}".format(
            ",".join(sorted(self.lhs)), ",".join(sorted(self.rhs))
        )


@dataclass
class DependencySet:
    """A set of trait dependencies (duplicate-free by construction)."""

    dependencies: frozenset = frozenset()

    def __init__(self, dependencies: Iterable[TraitDependency] = ()):
        self.dependencies = frozenset(dependencies)

    def __iter__(self):
        return iter(sorted(self.dependencies, key=str))

    def __len__(self):
        return len(self.dependencies)

    def families(self) -> set:
        out = set()
        for dep in self.dependencies:
            out |= dep.lhs | dep.rhs
        return out


def _check_universe(names: Iterable[str], universe: Optional[set]):
    if universe is None:
        return
    missing = set(names) - set(universe)
    if missing:
        raise UndeclaredFamilyError(
            "families not declared in universe: " + ", ".join(sorted(missing))
        )


def closure(x: Iterable[str], sigma: DependencySet,
            universe: Optional[set] = None) -> frozenset:
    """Least fixpoint X+ of X under sigma (reflexivity is the starting set)."""
    result = set(x)
    _check_universe(result, universe)
    _check_universe(sigma.families(), universe)
    changed = True
    while changed:
        changed = False
        for dep in sigma.dependencies:
            if dep.lhs <= result and not dep.rhs <= result:
                result |= dep.rhs
                changed = True
    return frozenset(result)


def implies(sigma: DependencySet, fd: TraitDependency,
            universe: Optional[set] = None) -> bool:
    """True iff sigma derives fd under the three inference rules."""
    return fd.rhs <= closure(fd.lhs, sigma, universe)


@dataclass
class Verdict:
    """Outcome of checking one dependency against a graph instance."""

    dependency: TraitDependency
    satisfied: bool
    # each violation: (x_assignment, sorted list of distinct y_assignments)
    violations: list = field(default_factory=list)
    #: elements skipped because they carry no link for some X family
    skipped_elements: int = 0
    #: elements with full X coverage but a missing Y family (reported, not a violation)
    missing_y_elements: int = 0
    checked_elements: int = 0


def _family_assignment(graph: PropertyGraph, catalog, nid: int) -> dict:
    """Map family name -> trait node id for one element's HAS_TRAIT links."""
    assignment = {}
    for eid in graph.out_edges(nid, HAS_TRAIT):
        _, trait_id = graph.edge_endpoints(eid)
        entry = catalog.describe(trait_id)
        if entry is None:
            continue
        family, _ = entry
        if family in assignment and assignment[family] != trait_id:
            raise MalformedLinkingError(
                f"node {nid} is linked to two {family!r} traits"
            )
        assignment[family] = trait_id
    return assignment


def holds(graph: PropertyGraph, catalog, fd: TraitDependency) -> Verdict:
    """Check fd on an instance: equal X-trait combinations must share one
    Y-trait combination.

    Elements lacking some X-family link are vacuous (counted as skipped);
    elements with X covered but a Y family missing are reported as warnings.
    """
    x_names = sorted(fd.lhs)
    y_names = sorted(fd.rhs)
    groups = {}  # x assignment -> set of y assignments
    verdict = Verdict(fd, True)
    for nid in graph.node_ids():
        assignment = _family_assignment(graph, catalog, nid)
        if not all(f in assignment for f in x_names):
            verdict.skipped_elements += 1
            continue
        if not all(f in assignment for f in y_names):
            verdict.missing_y_elements += 1
            continue
        verdict.checked_elements += 1
        x_key = tuple(assignment[f] for f in x_names)
        y_key = tuple(assignment[f] for f in y_names)
        groups.setdefault(x_key, set()).add(y_key)
    for x_key, y_keys in sorted(groups.items()):
        if len(y_keys) > 1:
            verdict.violations.append((x_key, sorted(y_keys)))
    verdict.satisfied = not verdict.violations
    return verdict


# ------------------------------------------------------------------ parsing

def parse_dependency_line(line: str, lineno: int = 0) -> TraitDependency:
    if "->" not in line:
        raise DependencyError(f"line {lineno}: missing '->' in {line!r}")
    lhs_text, _, rhs_text = line.partition("->")
    lhs = [p.strip() for p in lhs_text.split(",")]
    rhs = [p.strip() for p in rhs_text.split(",")]
    if any(not p for p in lhs) or any(not p for p in rhs):
        raise DependencyError(f"line {lineno}: empty family name in {line!r}")
    return TraitDependency(frozenset(lhs), frozenset(rhs))


def parse_dependencies(text: str) -> DependencySet:
    """Parse the one-dependency-per-line format; '#' starts a comment."""
    deps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        deps.append(parse_dependency_line(line, lineno))
    return DependencySet(deps)


def load_dependencies(path) -> DependencySet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_dependencies(fh.read())
