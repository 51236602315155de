"""Acceptance gate: ten headline criteria over the pinned fixture bundle.

Each test prints one PASS line with the measured numbers; a failing assert
marks the criterion red.  Expected values were frozen from an independent
count over the CSV files before the library was built.
"""

import random
import time

import numpy as np

from traitnorm.conformance import check_5gnf
from traitnorm.graph import HAS_TRAIT, TRAIT_LABEL, ElementRef, graphs_equivalent
from traitnorm.ingest import load, load_mapping
from traitnorm.metrics import compute_metrics, scm, trait_property_instances
from traitnorm.normalize import (
    NormalizerConfig,
    detect_traits,
    extract,
    load_config,
    reconstruct,
    run_pipeline,
)
from traitnorm.query import load_workload, workload
from traitnorm.synth import make_synthetic, synthetic_family
from traitnorm.tfd import DependencySet, TraitDependency, closure, implies

from conftest import DATA_DIR
from oracles import closure_oracle, semantic_implies
from randgraph import random_family, random_graph

LOCATION_KEYS = ("city", "country", "region", "address", "postalCode")
SHIPPING_KEYS = ("shipCity", "shipCountry", "shipRegion", "shipAddress",
                 "shipPostalCode")


def report(n, text):
    print(f"PASS criterion {n}: {text}")


def test_criterion_01_fixture_scale():
    start = time.perf_counter()
    mapping = load_mapping(DATA_DIR / "mapping.yaml")
    graph, _ = load(mapping, DATA_DIR)
    elapsed = time.perf_counter() - start
    nodes, edges = graph.node_count(), graph.edge_count()
    assert 1470 * 0.95 <= nodes <= 1470 * 1.05
    assert edges > 4000
    assert elapsed < 10
    report(1, f"ingest {nodes} nodes (1470 +-5%), {edges} edges (>4000) "
              f"in {elapsed:.2f}s")


def test_criterion_02_trait_counts(northwind_pre, northwind_config):
    start = time.perf_counter()
    result = run_pipeline(northwind_pre, northwind_config)
    elapsed = time.perf_counter() - start
    created = result.report.traits_created
    links = len(result.graph.edges_with_label(HAS_TRAIT))
    assert created == {"LocationTrait": 120, "ShippingTrait": 89}
    assert links > 950
    assert elapsed < 10
    report(2, f"120 LocationTrait + 89 ShippingTrait nodes, "
              f"{links} HAS_TRAIT edges (>950) in {elapsed:.2f}s")


def test_criterion_03_zero_residual_metadata(northwind_result):
    graph = northwind_result.graph
    residual = 0
    for label, keys in (("Customer", LOCATION_KEYS),
                        ("Supplier", LOCATION_KEYS),
                        ("Order", SHIPPING_KEYS)):
        for nid in graph.nodes_with_label(label):
            props = graph.props(ElementRef("node", nid))
            residual += sum(1 for k in keys if k in props)
    assert residual == 0
    report(3, "0 embedded location/shipping properties remain on "
              "Customer/Supplier/Order")


def test_criterion_04_metadata_reuse_ratio(northwind_pre, northwind_config):
    pre = compute_metrics(northwind_pre, northwind_config.families)
    assert pre.embedded_occurrences == 5574
    assert pre.distinct_tuples == 209
    value = pre.mrr_embedded
    assert value == 5574 / 209  # fixture-exact
    assert abs(value - 26.67) / 26.67 <= 0.25
    report(4, f"MRR {value:.4f} = 5574/209, within 25% of 26.67")


def test_criterion_05_losslessness(northwind_pre, northwind_result):
    start = time.perf_counter()
    assert northwind_result.report.lossless
    assert northwind_result.report.lossless_diffs == []
    rebuilt = reconstruct(northwind_result.graph.copy(),
                          northwind_result.catalog)
    assert graphs_equivalent(rebuilt, northwind_pre)

    checked = 0
    for seed in range(400):
        graph, _ = random_graph(seed)
        family = random_family(seed, graph)
        if family is None:
            continue
        result = run_pipeline(graph, NormalizerConfig(families=[family]))
        assert result.report.lossless, (seed, result.report.lossless_diffs[:3])
        rebuilt = reconstruct(result.graph.copy(), result.catalog)
        assert graphs_equivalent(rebuilt, graph), seed
        checked += 1
        if checked == 200:
            break
    elapsed = time.perf_counter() - start
    assert checked == 200
    assert elapsed < 30
    report(5, f"exact round trip on the fixture and {checked} random graphs "
              f"in {elapsed:.1f}s")


def test_criterion_06_closure_oracle_equivalence():
    start = time.perf_counter()
    universe = ["A", "B", "C", "D", "E"]
    rng = random.Random(451)

    def rand_sigma(names, max_deps):
        deps = []
        for _ in range(rng.randint(0, max_deps)):
            deps.append(TraitDependency(
                frozenset(rng.sample(names, rng.randint(1, 2))),
                frozenset(rng.sample(names, rng.randint(1, 2))),
            ))
        return DependencySet(deps)

    closure_cases = 1000
    for _ in range(closure_cases):
        sigma = rand_sigma(universe, 6)
        x = rng.sample(universe, rng.randint(1, 3))
        assert closure(x, sigma) == closure_oracle(x, sigma, universe)

    small = ["A", "B", "C"]
    implication_cases = 300
    for _ in range(implication_cases):
        sigma = rand_sigma(small, 4)
        fd = TraitDependency(
            frozenset(rng.sample(small, rng.randint(1, 2))),
            frozenset(rng.sample(small, rng.randint(1, 2))),
        )
        assert implies(sigma, fd) == semantic_implies(sigma, fd, small)
    elapsed = time.perf_counter() - start
    assert elapsed < 60
    report(6, f"{closure_cases} closure cases match the fixpoint oracle; "
              f"{implication_cases} implication cases match semantic "
              f"enumeration in {elapsed:.1f}s")


def test_criterion_07_conformance_checks(northwind_pre, northwind_result,
                                         northwind_config):
    clean = check_5gnf(northwind_result.graph, northwind_config)
    assert clean.conforming

    raw = check_5gnf(northwind_pre, northwind_config)
    assert not raw.conforming
    assert len(raw.exclusivity_findings) == 5574

    graph = northwind_result.graph

    mutant = graph.copy()
    tid = sorted(mutant.nodes_with_label("LocationTrait"))[0]
    mutant.create_node({TRAIT_LABEL, "LocationTrait"},
                       dict(mutant.props(ElementRef("node", tid))),
                       privileged=True)
    dup = check_5gnf(mutant, northwind_config)
    assert dup.canonicality_violations

    mutant = graph.copy()
    victim = sorted(mutant.nodes_with_label("Customer"))[0]
    mutant.set_property(ElementRef("node", victim), "city", "Sneakytown")
    residual = check_5gnf(mutant, northwind_config)
    assert residual.exclusivity_findings

    mutant = graph.copy()
    intruder = check_5gnf_non_has_trait_mutant(mutant)
    assert intruder.exclusivity_findings

    report(7, "conforming on pipeline output; non-conforming on the raw "
              "fixture and all three injected-fault mutants")


def check_5gnf_non_has_trait_mutant(mutant):
    victim = sorted(mutant.nodes_with_label("Customer"))[0]
    tid = sorted(mutant.nodes_with_label("LocationTrait"))[0]
    mutant.create_edge(victim, tid, "POINTS_AT", {})
    return check_5gnf(mutant, load_config(DATA_DIR / "normalize.yaml"))


def test_criterion_08_query_trends(northwind_pre, northwind_result):
    start = time.perf_counter()
    queries = load_workload(DATA_DIR / "workload.yaml")
    rows = {r["name"]: r for r in
            workload(northwind_pre, northwind_result.graph, queries)}
    elapsed = time.perf_counter() - start

    q3 = rows["q3_orders_shipped_to_germany"]
    ratio = q3["pre_accesses"] / q3["post_accesses"]
    assert ratio >= 2

    q5 = rows["q5_supplier_customer_same_city"]
    assert q5["pre_cartesian"] is True
    assert q5["post_cartesian"] is False

    assert all(r["results_equal"] for r in rows.values())
    assert elapsed < 30
    report(8, f"Q3 access ratio {ratio:.2f} (>=2); Q5 cartesian product "
              f"eliminated; all 5 result multisets identical in {elapsed:.1f}s")


def test_criterion_09_scm_accounting(northwind_pre, northwind_result):
    pre_scm = scm(northwind_pre)
    post_graph = northwind_result.graph
    post_scm = scm(post_graph)
    trait_nodes = len(post_graph.nodes_with_label(TRAIT_LABEL))
    trait_links = len(post_graph.edges_with_label(HAS_TRAIT))
    trait_props = trait_property_instances(post_graph)
    removed = northwind_result.report.properties_removed
    assert post_scm == pre_scm - removed + trait_nodes + trait_links + trait_props
    assert post_scm < pre_scm
    report(9, f"scm {pre_scm} -> {post_scm} = {pre_scm} - {removed} + "
              f"{trait_nodes} + {trait_links} + {trait_props}; reduced")


def test_criterion_10_linear_scaling():
    start = time.perf_counter()
    sizes = [10_000, 20_000, 40_000]
    family = synthetic_family(6)
    timings = []
    for elements in sizes:
        best = min(_timed_detect_extract(elements, family) for _ in range(3))
        timings.append(best)
    elapsed = time.perf_counter() - start

    r = np.corrcoef(np.array(sizes, dtype=float), np.array(timings))[0, 1]
    r_squared = float(r * r)
    assert r_squared >= 0.95
    assert elapsed < 120
    report(10, "detect+extract times "
               + ", ".join(f"{s}el={t * 1000:.0f}ms"
                           for s, t in zip(sizes, timings))
               + f"; linear fit R^2={r_squared:.4f} (>=0.95) in {elapsed:.1f}s")


def _timed_detect_extract(elements, family):
    graph = make_synthetic(elements, n_keys=6, distinct=50, seed=11)
    config = NormalizerConfig(families=[family])
    start = time.perf_counter()
    catalog, rep = detect_traits(graph, config)
    extract(graph, catalog, config, rep)
    return time.perf_counter() - start
