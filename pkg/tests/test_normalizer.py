import random

import pytest

from traitnorm.graph import (
    HAS_TRAIT,
    TRAIT_LABEL,
    ElementRef,
    PropertyGraph,
    canonical_signature,
    graphs_equivalent,
)
from traitnorm.normalize import (
    NormalizationError,
    NormalizerConfig,
    detect_traits,
    extract,
    profile_keys,
    reconstruct,
    run_pipeline,
    select_families,
    verify_lossless,
)
from traitnorm.tfd import DependencySet, TraitDependency, TraitFamily, parse_dependencies

from randgraph import random_family, random_graph


def city_graph():
    g = PropertyGraph()
    g.create_node({"Customer"}, {"custNo": "a", "city": "Berlin", "country": "DE"})
    g.create_node({"Customer"}, {"custNo": "b", "city": "Berlin", "country": "DE"})
    g.create_node({"Supplier"}, {"suppNo": "c", "city": "Berlin", "country": "DE"})
    g.create_node({"Supplier"}, {"suppNo": "d", "city": "Paris", "country": "FR"})
    return g


LOC = TraitFamily("LocationTrait", ("city", "country"),
                  scope={"Customer", "Supplier"})


# ---------------------------------------------------------------- profiling

def test_profile_keys_counts():
    profiles = {p.key: p for p in profile_keys(city_graph())}
    assert profiles["city"].occurrences == 4
    assert profiles["city"].distinct_count == 2
    assert profiles["city"].cross_type_reuse
    # unique values confined to one element type: data, not metadata
    assert profiles["custNo"].is_candidate_identifier
    assert not profiles["city"].is_candidate_identifier


def test_profile_excludes_trait_elements():
    g = city_graph()
    g.create_node({TRAIT_LABEL}, {"city": "Ghost"}, privileged=True)
    profiles = {p.key: p for p in profile_keys(g)}
    assert profiles["city"].occurrences == 4


def test_auto_selection_skips_identifiers_and_single_type_keys():
    config = NormalizerConfig(families=None)
    names = {f.name for f in select_families(city_graph(), config)}
    # city and country recur across Customer and Supplier; ids are excluded
    assert names == {"CityTrait", "CountryTrait"}

    config = NormalizerConfig(families=None, deny={"country"})
    names = {f.name for f in select_families(city_graph(), config)}
    assert names == {"CityTrait"}


# ------------------------------------------------------------------- phases

def test_detect_creates_one_trait_per_distinct_tuple():
    g = city_graph()
    catalog, report = detect_traits(g, NormalizerConfig(families=[LOC]))
    assert report.traits_created == {"LocationTrait": 2}
    assert catalog.lookup("LocationTrait", ("Berlin", "DE")) is not None
    assert catalog.lookup("LocationTrait", ("Paris", "FR")) is not None
    # trait nodes carry the family discriminator and the non-null components
    tid = catalog.lookup("LocationTrait", ("Paris", "FR"))
    assert g.props(ElementRef("node", tid)) == {
        "family": "LocationTrait", "city": "Paris", "country": "FR"}


def test_tau_guard_skips_but_records_family():
    g = city_graph()
    config = NormalizerConfig(families=[LOC], tau=1)
    catalog, report = detect_traits(g, config)
    assert report.families_skipped and report.families_skipped[0][0] == "LocationTrait"
    assert len(catalog) == 0


def test_detect_rejects_family_with_no_keys_in_graph():
    g = city_graph()
    ghost = TraitFamily("GhostTrait", ("nope",))
    with pytest.raises(NormalizationError):
        detect_traits(g, NormalizerConfig(families=[ghost]))


def test_partial_tuples_get_their_own_traits():
    g = city_graph()
    g.create_node({"Customer"}, {"name": "e", "city": "Berlin"})  # no country
    catalog, report = detect_traits(g, NormalizerConfig(families=[LOC]))
    assert report.traits_created == {"LocationTrait": 3}
    assert catalog.lookup("LocationTrait", ("Berlin", None)) is not None


def test_extract_links_and_strips_embedded_keys():
    g = city_graph()
    config = NormalizerConfig(families=[LOC])
    catalog, report = detect_traits(g, config)
    extract(g, catalog, config, report)
    assert report.links_added == 4
    assert report.properties_removed == 8
    assert len(report.removed_values) == 8
    for nid in g.nodes_with_label("Customer"):
        props = g.props(ElementRef("node", nid))
        assert "city" not in props and "country" not in props
        assert "custNo" in props
        assert len(g.out_edges(nid, HAS_TRAIT)) == 1


def test_round_trip_restores_original():
    g = city_graph()
    config = NormalizerConfig(families=[LOC])
    result = run_pipeline(g, config)
    assert result.report.lossless
    rebuilt = reconstruct(result.graph.copy(), result.catalog)
    assert graphs_equivalent(rebuilt, g)


def test_verify_lossless_reports_deleted_trait_link():
    g = city_graph()
    result = run_pipeline(g, NormalizerConfig(families=[LOC]))
    broken = result.graph.copy()
    eid = broken.edges_with_label(HAS_TRAIT)[0]
    victim, _ = broken.edge_endpoints(eid)
    broken.delete_edge(eid)
    ok, diffs = verify_lossless(g, broken, result.catalog)
    assert not ok
    assert any(f"node {victim}" in d and "city" in d for d in diffs)


def test_pipeline_is_deterministic_and_idempotent():
    config = NormalizerConfig(families=[LOC])
    first = run_pipeline(city_graph(), config)
    second = run_pipeline(city_graph(), config)
    assert canonical_signature(first.graph) == canonical_signature(second.graph)
    assert first.report.to_dict() == second.report.to_dict()

    # a second pass over the normalized graph has nothing left to extract
    auto = NormalizerConfig(families=None)
    again = run_pipeline(first.graph, auto)
    assert again.report.traits_created == {}
    assert again.report.links_added == 0
    assert canonical_signature(again.graph) == canonical_signature(first.graph)


def test_original_graph_is_untouched():
    g = city_graph()
    before = canonical_signature(g)
    run_pipeline(g, NormalizerConfig(families=[LOC]))
    assert canonical_signature(g) == before


def test_partial_match_links_unique_subset_when_enabled():
    g = city_graph()
    partial = g.create_node({"Customer"}, {"name": "e", "city": "Paris"})
    config = NormalizerConfig(families=[LOC], partial_match=True)
    catalog, report = detect_traits(g, config)
    # drop the partial tuple's own trait so only ("Paris","FR") can match
    tid = catalog.lookup("LocationTrait", ("Paris", None))
    if tid is not None:
        g.delete_node(tid)
        catalog._forward.pop(catalog._key("LocationTrait", ("Paris", None)))
        catalog._reverse.pop(tid)
    extract(g, catalog, config, report)
    links = g.out_edges(partial, HAS_TRAIT)
    assert len(links) == 1
    assert g.edge_endpoints(links[0])[1] == catalog.lookup(
        "LocationTrait", ("Paris", "FR"))


def test_no_spurious_traits():
    # every created trait node serves at least one HAS_TRAIT link
    for seed in range(20):
        graph, _ = random_graph(seed)
        family = random_family(seed, graph)
        if family is None:
            continue
        result = run_pipeline(graph, NormalizerConfig(families=[family]))
        for tid in result.catalog.trait_ids():
            assert result.graph.in_edges(tid, HAS_TRAIT), (seed, tid)


# ------------------------------------------------------------- dependencies

def test_pipeline_reports_dependency_violation_without_repair():
    g = PropertyGraph()
    g.create_node({"Customer"}, {"city": "Toledo", "country": "Spain"})
    g.create_node({"Supplier"}, {"city": "Toledo", "country": "USA"})
    g.create_node({"Supplier"}, {"city": "Oslo", "country": "Norway"})
    config = NormalizerConfig(
        families=[TraitFamily("CityTrait", ("city",)),
                  TraitFamily("CountryTrait", ("country",))],
        dependencies=parse_dependencies("CityTrait -> CountryTrait"),
    )
    result = run_pipeline(g, config)
    assert result.report.lossless
    assert not result.report.conforming
    verdict = result.report.dependency_verdicts[0]
    assert not verdict.satisfied
    assert len(verdict.violations) == 1


def test_pipeline_satisfied_dependency():
    config = NormalizerConfig(
        families=[TraitFamily("CityTrait", ("city",)),
                  TraitFamily("CountryTrait", ("country",))],
        dependencies=parse_dependencies("CityTrait -> CountryTrait"),
    )
    result = run_pipeline(city_graph(), config)
    assert result.report.conforming
    assert result.report.dependency_verdicts[0].satisfied


# ------------------------------------------------------------ random graphs

def test_round_trip_on_random_graphs():
    for seed in range(60):
        graph, _ = random_graph(seed)
        family = random_family(seed, graph)
        if family is None:
            continue
        config = NormalizerConfig(families=[family])
        result = run_pipeline(graph, config)
        assert result.report.lossless, (seed, result.report.lossless_diffs[:5])
        rebuilt = reconstruct(result.graph.copy(), result.catalog)
        assert graphs_equivalent(rebuilt, graph), seed


def test_random_graph_extraction_strips_all_in_scope_keys():
    rng = random.Random(7)
    for _ in range(20):
        graph, _ = random_graph(rng.randrange(10_000))
        family = random_family(rng.randrange(10_000), graph)
        if family is None:
            continue
        result = run_pipeline(graph, NormalizerConfig(families=[family]))
        for nid in result.graph.node_ids():
            if TRAIT_LABEL in result.graph.node_labels(nid):
                continue
            props = result.graph.props(ElementRef("node", nid))
            assert not (set(family.keys) & set(props))
