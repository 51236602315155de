import datetime

import pytest

from traitnorm.graph import (
    HAS_TRAIT,
    TRAIT_LABEL,
    DanglingEdgeError,
    ElementRef,
    GraphError,
    NodeInUseError,
    NonScalarValueError,
    PropertyGraph,
    ReservedLabelError,
    UnknownElementError,
    canonical_signature,
    graphs_equivalent,
)


def test_create_node_indexes_label_and_keys():
    g = PropertyGraph()
    nid = g.create_node({"Customer"}, {"city": "Berlin"})
    assert nid in g.nodes_with_label("Customer")
    assert [(ElementRef("node", nid), "Berlin")] == list(
        g.elements_with_key("city"))
    assert "Customer" in g.known_labels
    assert "city" in g.known_keys


def test_reserved_trait_label_requires_privilege():
    g = PropertyGraph()
    with pytest.raises(ReservedLabelError):
        g.create_node({TRAIT_LABEL}, {})
    tid = g.create_node({TRAIT_LABEL}, {"family": "F"}, privileged=True)
    assert TRAIT_LABEL in g.node_labels(tid)


def test_empty_label_set_rejected():
    g = PropertyGraph()
    with pytest.raises(GraphError):
        g.create_node(set(), {})


def test_scalar_only_properties():
    g = PropertyGraph()
    with pytest.raises(NonScalarValueError):
        g.create_node({"A"}, {"bad": [1, 2]})
    with pytest.raises(NonScalarValueError):
        g.create_node({"A"}, {"bad": {"nested": 1}})
    nid = g.create_node({"A"}, {
        "t": "x", "i": 3, "f": 1.5, "b": True,
        "d": datetime.date(2024, 5, 1),
    })
    assert len(g.props(ElementRef("node", nid))) == 5


def test_dangling_edge_rejected():
    g = PropertyGraph()
    a = g.create_node({"A"}, {})
    with pytest.raises(DanglingEdgeError):
        g.create_edge(a, a + 99, "REL", {})
    eid = g.create_edge(a, a, "REL", {})
    assert g.edge_endpoints(eid) == (a, a)


def test_delete_node_with_incident_edges_rejected():
    g = PropertyGraph()
    a = g.create_node({"A"}, {})
    b = g.create_node({"B"}, {})
    eid = g.create_edge(a, b, "REL", {})
    with pytest.raises(NodeInUseError):
        g.delete_node(b)
    g.delete_edge(eid)
    g.delete_node(b)
    assert not g.has_node(b)
    with pytest.raises(UnknownElementError):
        g.node_labels(b)


def test_ids_dense_and_never_reused():
    g = PropertyGraph()
    a = g.create_node({"A"}, {})
    b = g.create_node({"A"}, {})
    assert b == a + 1
    g.delete_node(b)
    c = g.create_node({"A"}, {})
    assert c > b


def test_remove_property_returns_prior_value_and_is_idempotent():
    g = PropertyGraph()
    nid = g.create_node({"A"}, {"k": 7})
    ref = ElementRef("node", nid)
    assert g.remove_property(ref, "k") == 7
    assert g.remove_property(ref, "k") is None
    assert g.get_property(ref, "k") is None
    assert list(g.elements_with_key("k")) == []


def test_set_property_updates_key_index():
    g = PropertyGraph()
    a = g.create_node({"A"}, {})
    eid = g.create_edge(a, a, "REL", {})
    g.set_property(ElementRef("edge", eid), "w", 2)
    assert list(g.elements_with_key("w")) == [(ElementRef("edge", eid), 2)]
    with pytest.raises(NonScalarValueError):
        g.set_property(ElementRef("node", a), "w", (1,))


def test_known_labels_and_keys_are_monotone():
    g = PropertyGraph()
    nid = g.create_node({"Ghost"}, {"once": 1})
    g.remove_property(ElementRef("node", nid), "once")
    g.delete_node(nid)
    assert "Ghost" in g.known_labels
    assert "once" in g.known_keys


def test_edge_direction_queries():
    g = PropertyGraph()
    a = g.create_node({"A"}, {})
    b = g.create_node({"B"}, {})
    e1 = g.create_edge(a, b, "REL", {})
    e2 = g.create_edge(b, a, "REL", {})
    g.create_edge(a, b, "OTHER", {})
    assert g.out_edges(a, "REL") == [e1]
    assert g.in_edges(a, "REL") == [e2]
    assert g.degree(a) == 3


def test_copy_is_independent_and_preserves_ids():
    g = PropertyGraph()
    a = g.create_node({"A"}, {"k": 1})
    b = g.create_node({"B"}, {})
    g.create_edge(a, b, "REL", {"w": 2})
    clone = g.copy()
    assert graphs_equivalent(g, clone)
    assert clone.node_ids() == g.node_ids()
    clone.set_property(ElementRef("node", a), "k", 99)
    assert g.get_property(ElementRef("node", a), "k") == 1


def test_canonical_signature_ignores_id_assignment():
    def build(order):
        g = PropertyGraph()
        ids = {}
        for name in order:
            ids[name] = g.create_node({"N"}, {"name": name})
        g.create_edge(ids["x"], ids["y"], "REL", {})
        return g

    assert canonical_signature(build("xyz")) == canonical_signature(build("zyx"))
    a, b = build("xyz"), build("xyz")
    b.set_property(ElementRef("node", b.node_ids()[0]), "extra", 1)
    assert not graphs_equivalent(a, b)


def test_derived_schema_covers_every_observed_key():
    from traitnorm.schema import derive_schema
    from traitnorm.tfd import TraitFamily

    g = PropertyGraph()
    a = g.create_node({"A"}, {"x": 1})
    b = g.create_node({"A", "B"}, {"y": 2})
    g.create_edge(a, b, "REL", {"w": 3})
    schema = derive_schema(g, [TraitFamily("XTrait", ("x",))])
    assert frozenset({"A"}) in schema.node_types
    assert ("A", "REL", "B") in schema.edge_types
    covered = set().union(*schema.keys_per_type.values())
    assert covered == {"x", "y", "w"}
    assert schema.trait_families == {"XTrait": ("x",)}


def test_has_trait_constant():
    assert HAS_TRAIT == "HAS_TRAIT"
    assert TRAIT_LABEL == "Trait"
