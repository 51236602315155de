"""In-memory property graph with labels and scalar properties on nodes and edges.

This is the substrate every other module works on.  Nodes carry a set of
labels, edges carry exactly one label; both carry flat key->scalar property
maps.  The label ``Trait`` is reserved for the normalizer: ordinary callers
cannot create trait nodes by accident.

Mutations keep the label and key indexes exactly in sync with element state.
The graph is single-writer: callers must not mutate while another component
is iterating.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Union

Scalar = Union[str, int, float, bool, datetime.date]

#: Reserved node label identifying trait nodes.
TRAIT_LABEL = "Trait"

#: Edge label used to associate a domain element with a trait node.
HAS_TRAIT = "HAS_TRAIT"


class GraphError(Exception):
    """Base class for graph integrity errors."""


class UnknownElementError(GraphError):
    pass


class DanglingEdgeError(GraphError):
    pass


class ReservedLabelError(GraphError):
    pass


class NonScalarValueError(GraphError):
    pass


class NodeInUseError(GraphError):
    """Raised when deleting a node that still has incident edges."""


class ElementRef(NamedTuple):
    """Uniform address for a node or an edge."""

    kind: str  # "node" or "edge"
    id: int

    def __str__(self) -> str:
        return f"{self.kind}:{self.id}"


def check_scalar(value: Scalar, key: str = "?") -> None:
    # bool before int is irrelevant here: bool is an int subclass and both pass.
    if not isinstance(value, (str, int, float, bool, datetime.date)):
        raise NonScalarValueError(
            f"property {key!r}: {type(value).__name__} is not a scalar value"
        )


@dataclass
class _Node:
    labels: frozenset
    props: dict


@dataclass
class _Edge:
    src: int
    dst: int
    label: str
    props: dict


@dataclass
class PropertyGraph:
    """Mutable labeled property graph with dense, never-reused integer ids."""

    _nodes: dict = field(default_factory=dict)
    _edges: dict = field(default_factory=dict)
    _next_node_id: int = 0
    _next_edge_id: int = 0
    # label -> set of node ids / edge ids
    _node_label_index: dict = field(default_factory=dict)
    _edge_label_index: dict = field(default_factory=dict)
    # property key -> set of ElementRef
    _key_index: dict = field(default_factory=dict)
    # adjacency: node id -> set of edge ids
    _out: dict = field(default_factory=dict)
    _in: dict = field(default_factory=dict)
    # vocabularies grow monotonically; deletion never unregisters, so query
    # plans can distinguish "empty label" from "label never seen".
    known_labels: set = field(default_factory=set)
    known_keys: set = field(default_factory=set)

    # ------------------------------------------------------------------ nodes

    def create_node(self, labels, props=None, *, privileged: bool = False,
                    _id: Optional[int] = None) -> int:
        labels = frozenset(labels)
        if not labels:
            raise GraphError("a node needs at least one label")
        if TRAIT_LABEL in labels and not privileged:
            raise ReservedLabelError(
                f"label {TRAIT_LABEL!r} is reserved for the normalizer"
            )
        props = dict(props or {})
        for k, v in props.items():
            check_scalar(v, k)
        if _id is None:
            nid = self._next_node_id
            self._next_node_id += 1
        else:
            if _id in self._nodes:
                raise GraphError(f"node id {_id} already in use")
            nid = _id
            self._next_node_id = max(self._next_node_id, nid + 1)
        self._nodes[nid] = _Node(labels, props)
        self._out[nid] = set()
        self._in[nid] = set()
        for lab in labels:
            self._node_label_index.setdefault(lab, set()).add(nid)
            self.known_labels.add(lab)
        ref = ElementRef("node", nid)
        for k in props:
            self._key_index.setdefault(k, set()).add(ref)
            self.known_keys.add(k)
        return nid

    def delete_node(self, nid: int) -> None:
        node = self._require_node(nid)
        if self._out[nid] or self._in[nid]:
            raise NodeInUseError(f"node {nid} still has incident edges")
        ref = ElementRef("node", nid)
        for lab in node.labels:
            self._node_label_index[lab].discard(nid)
        for k in node.props:
            self._key_index[k].discard(ref)
        del self._nodes[nid], self._out[nid], self._in[nid]

    # ------------------------------------------------------------------ edges

    def create_edge(self, src: int, dst: int, label: str, props=None, *,
                    _id: Optional[int] = None) -> int:
        if src not in self._nodes:
            raise DanglingEdgeError(f"source node {src} does not exist")
        if dst not in self._nodes:
            raise DanglingEdgeError(f"target node {dst} does not exist")
        props = dict(props or {})
        for k, v in props.items():
            check_scalar(v, k)
        if _id is None:
            eid = self._next_edge_id
            self._next_edge_id += 1
        else:
            if _id in self._edges:
                raise GraphError(f"edge id {_id} already in use")
            eid = _id
            self._next_edge_id = max(self._next_edge_id, eid + 1)
        self._edges[eid] = _Edge(src, dst, label, props)
        self._edge_label_index.setdefault(label, set()).add(eid)
        self.known_labels.add(label)
        self._out[src].add(eid)
        self._in[dst].add(eid)
        ref = ElementRef("edge", eid)
        for k in props:
            self._key_index.setdefault(k, set()).add(ref)
            self.known_keys.add(k)
        return eid

    def delete_edge(self, eid: int) -> None:
        edge = self._require_edge(eid)
        ref = ElementRef("edge", eid)
        self._edge_label_index[edge.label].discard(eid)
        for k in edge.props:
            self._key_index[k].discard(ref)
        self._out[edge.src].discard(eid)
        self._in[edge.dst].discard(eid)
        del self._edges[eid]

    # ------------------------------------------------------------- properties

    def set_property(self, ref: ElementRef, key: str, value: Scalar) -> None:
        check_scalar(value, key)
        props = self._props_of(ref)
        props[key] = value
        self._key_index.setdefault(key, set()).add(ref)
        self.known_keys.add(key)

    def remove_property(self, ref: ElementRef, key: str):
        """Remove ``key`` from the element; returns the prior value or None.

        Removing an absent key is a no-op (idempotent).
        """
        props = self._props_of(ref)
        if key not in props:
            return None
        value = props.pop(key)
        self._key_index[key].discard(ref)
        return value

    def get_property(self, ref: ElementRef, key: str):
        return self._props_of(ref).get(key)

    def props(self, ref: ElementRef) -> dict:
        return dict(self._props_of(ref))

    # -------------------------------------------------------------- accessors

    def has_node(self, nid: int) -> bool:
        return nid in self._nodes

    def has_edge(self, eid: int) -> bool:
        return eid in self._edges

    def node_labels(self, nid: int) -> frozenset:
        return self._require_node(nid).labels

    def edge_label(self, eid: int) -> str:
        return self._require_edge(eid).label

    def edge_endpoints(self, eid: int):
        edge = self._require_edge(eid)
        return edge.src, edge.dst

    def node_ids(self):
        return sorted(self._nodes)

    def edge_ids(self):
        return sorted(self._edges)

    def node_count(self) -> int:
        return len(self._nodes)

    def edge_count(self) -> int:
        return len(self._edges)

    def nodes_with_label(self, label: str):
        return sorted(self._node_label_index.get(label, ()))

    def edges_with_label(self, label: str):
        return sorted(self._edge_label_index.get(label, ()))

    def out_edges(self, nid: int, label: Optional[str] = None):
        self._require_node(nid)
        eids = sorted(self._out[nid])
        if label is None:
            return eids
        return [e for e in eids if self._edges[e].label == label]

    def in_edges(self, nid: int, label: Optional[str] = None):
        self._require_node(nid)
        eids = sorted(self._in[nid])
        if label is None:
            return eids
        return [e for e in eids if self._edges[e].label == label]

    def degree(self, nid: int) -> int:
        self._require_node(nid)
        return len(self._out[nid]) + len(self._in[nid])

    def elements_with_key(self, key: str) -> Iterator:
        """Yield (ElementRef, value) for every element carrying ``key``."""
        for ref in sorted(self._key_index.get(key, ())):
            yield ref, self._props_of(ref)[key]

    def element_refs(self) -> Iterator[ElementRef]:
        for nid in self.node_ids():
            yield ElementRef("node", nid)
        for eid in self.edge_ids():
            yield ElementRef("edge", eid)

    def labels_of(self, ref: ElementRef) -> frozenset:
        """Node label set, or a singleton set of the edge label."""
        if ref.kind == "node":
            return self.node_labels(ref.id)
        return frozenset([self.edge_label(ref.id)])

    def property_instance_count(self) -> int:
        total = sum(len(n.props) for n in self._nodes.values())
        total += sum(len(e.props) for e in self._edges.values())
        return total

    def copy(self) -> "PropertyGraph":
        """Deep copy preserving all ids and allocator state."""
        g = PropertyGraph()
        for nid in self.node_ids():
            node = self._nodes[nid]
            g.create_node(node.labels, node.props, privileged=True, _id=nid)
        for eid in self.edge_ids():
            edge = self._edges[eid]
            g.create_edge(edge.src, edge.dst, edge.label, edge.props, _id=eid)
        g._next_node_id = self._next_node_id
        g._next_edge_id = self._next_edge_id
        g.known_labels = set(self.known_labels)
        g.known_keys = set(self.known_keys)
        return g

    # -------------------------------------------------------------- internals

    def _require_node(self, nid: int) -> _Node:
        try:
            return self._nodes[nid]
        except KeyError:
            raise UnknownElementError(f"unknown node {nid}") from None

    def _require_edge(self, eid: int) -> _Edge:
        try:
            return self._edges[eid]
        except KeyError:
            raise UnknownElementError(f"unknown edge {eid}") from None

    def _props_of(self, ref: ElementRef) -> dict:
        if ref.kind == "node":
            return self._require_node(ref.id).props
        if ref.kind == "edge":
            return self._require_edge(ref.id).props
        raise UnknownElementError(f"bad element kind {ref.kind!r}")


def typed_value(value):
    """Equality token that keeps bool/int/float values apart.

    Python treats True == 1 == 1.0, which would silently merge value tuples
    of different types; pairing the value with its type name restores a
    faithful identity.  None stays None (absent component).
    """
    if value is None:
        return None
    return (type(value).__name__, value)


def _value_key(v):
    # Dates sort apart from strings; encode type name to keep sorting total.
    return (type(v).__name__, str(v))


def _node_signature(graph: PropertyGraph, nid: int):
    node = graph._nodes[nid]
    return (
        tuple(sorted(node.labels)),
        tuple(sorted(((k, _value_key(v)) for k, v in node.props.items()))),
    )


def canonical_signature(graph: PropertyGraph):
    """Id-free structural fingerprint of a graph.

    Two isomorphic graphs produce equal signatures; the converse is not
    guaranteed in full generality but holds for the deterministic pipelines
    tested here (nodes are distinguished by labels+properties and edges by
    their endpoint fingerprints).
    """
    nodes = sorted(_node_signature(graph, nid) for nid in graph.node_ids())
    edges = sorted(
        (
            graph._edges[eid].label,
            tuple(sorted((k, _value_key(v))
                         for k, v in graph._edges[eid].props.items())),
            _node_signature(graph, graph._edges[eid].src),
            _node_signature(graph, graph._edges[eid].dst),
        )
        for eid in graph.edge_ids()
    )
    return (tuple(nodes), tuple(edges))


def graphs_equivalent(a: PropertyGraph, b: PropertyGraph) -> bool:
    """True when two graphs agree up to renaming of element ids."""
    return canonical_signature(a) == canonical_signature(b)
