"""Minimal instrumented pattern-query executor.

Plans are small operator trees written as YAML/dict pipelines; there is no
query language.  Execution counts storage accesses with fixed semantics:
one unit per node fetch, edge fetch, or property read, and one per index
probe.  Counts are deterministic for a given plan and graph, which is what
the before/after comparisons rely on; they are not meant to match any
external engine's notion of a database hit.

Pipeline form: a list of operator dicts, each consuming the previous step.
``join`` and ``product`` take nested ``left``/``right`` pipelines.  The
final operator must be ``project`` or ``group``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .graph import ElementRef, PropertyGraph


class PlanError(Exception):
    """Raised at compile time for malformed plans or unknown labels/keys."""


@dataclass
class QueryStats:
    rows: int = 0
    accesses: int = 0
    wall_time: float = 0.0
    operator_trace: list = field(default_factory=list)  # (description, accesses)
    cartesian: bool = False

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "accesses": self.accesses,
            "wall_time_ms": round(self.wall_time * 1000, 3),
            "cartesian": self.cartesian,
            "operators": [list(t) for t in self.operator_trace],
        }


class _Ctx:
    def __init__(self, graph: PropertyGraph, stats: QueryStats):
        self.graph = graph
        self.stats = stats
        self.per_op = {}

    def _count(self, op, n=1):
        self.stats.accesses += n
        self.per_op[id(op)] = self.per_op.get(id(op), 0) + n

    def probe(self, op):
        self._count(op)

    def fetch_node(self, op, nid):
        self._count(op)
        return nid

    def fetch_edge(self, op, eid):
        self._count(op)
        return eid

    def read_prop(self, op, ref: ElementRef, key: str):
        self._count(op)
        return self.graph.get_property(ref, key)


class _Op:
    desc = "?"

    def rows(self, ctx):  # pragma: no cover - abstract
        raise NotImplementedError


class _Scan(_Op):
    def __init__(self, label, bind):
        self.label, self.bind = label, bind
        self.desc = f"scan {label} as {bind}"

    def rows(self, ctx):
        ctx.probe(self)
        for nid in ctx.graph.nodes_with_label(self.label):
            ctx.fetch_node(self, nid)
            yield {self.bind: ElementRef("node", nid)}


class _Read(_Op):
    def __init__(self, child, var, key, bind):
        self.child, self.var, self.key, self.bind = child, var, key, bind
        self.desc = f"read {var}.{key} as {bind}"

    def rows(self, ctx):
        for row in self.child.rows(ctx):
            value = ctx.read_prop(self, row[self.var], self.key)
            out = dict(row)
            out[self.bind] = value
            yield out


class _Filter(_Op):
    def __init__(self, child, bind, const=None, other: Optional[str] = None):
        self.child, self.bind, self.const, self.other = child, bind, const, other
        target = other if other is not None else repr(const)
        self.desc = f"filter {bind} == {target}"

    def rows(self, ctx):
        for row in self.child.rows(ctx):
            expected = row[self.other] if self.other is not None else self.const
            if row[self.bind] == expected:
                yield row


class _Expand(_Op):
    def __init__(self, child, var, edge, direction, bind,
                 neighbor_label=None):
        self.child, self.var, self.edge = child, var, edge
        self.direction, self.bind = direction, bind
        self.neighbor_label = neighbor_label
        arrow = "->" if direction == "out" else "<-"
        self.desc = f"expand {var} {arrow}[{edge}] as {bind}"

    def rows(self, ctx):
        g = ctx.graph
        for row in self.child.rows(ctx):
            nid = row[self.var].id
            eids = (g.out_edges(nid, self.edge) if self.direction == "out"
                    else g.in_edges(nid, self.edge))
            for eid in eids:
                ctx.fetch_edge(self, eid)
                src, dst = g.edge_endpoints(eid)
                neighbor = dst if self.direction == "out" else src
                ctx.fetch_node(self, neighbor)
                if (self.neighbor_label is not None
                        and self.neighbor_label not in g.node_labels(neighbor)):
                    continue
                out = dict(row)
                out[self.bind] = ElementRef("node", neighbor)
                yield out


class _Join(_Op):
    def __init__(self, left, right, on):
        self.left, self.right, self.on = left, right, on
        self.desc = "join on " + ",".join(f"{a}={b}" for a, b in on)

    def rows(self, ctx):
        table = {}
        for row in self.left.rows(ctx):
            key = tuple(row[a] for a, _ in self.on)
            table.setdefault(key, []).append(row)
        for row in self.right.rows(ctx):
            key = tuple(row[b] for _, b in self.on)
            for match in table.get(key, ()):
                merged = dict(match)
                merged.update(row)
                yield merged


class _Product(_Op):
    def __init__(self, left, right):
        self.left, self.right = left, right
        self.desc = "cartesian product"

    def rows(self, ctx):
        ctx.stats.cartesian = True
        right_rows = list(self.right.rows(ctx))
        for lrow in self.left.rows(ctx):
            for rrow in right_rows:
                merged = dict(lrow)
                merged.update(rrow)
                yield merged


class _Project(_Op):
    def __init__(self, child, cols):
        self.child, self.cols = child, cols
        self.desc = "project " + ",".join(cols)

    def rows(self, ctx):
        for row in self.child.rows(ctx):
            yield tuple(row[c] for c in self.cols)


class _Group(_Op):
    def __init__(self, child, by, agg, agg_bind=None, bind="value"):
        if agg not in ("count", "collect"):
            raise PlanError(f"unsupported aggregate {agg!r}")
        self.child, self.by, self.agg = child, by, agg
        self.agg_bind, self.bind = agg_bind, bind
        self.desc = f"group by {','.join(by)} {agg}"

    def rows(self, ctx):
        groups = {}
        for row in self.child.rows(ctx):
            key = tuple(row[b] for b in self.by)
            if self.agg == "count":
                groups[key] = groups.get(key, 0) + 1
            else:
                groups.setdefault(key, []).append(row[self.agg_bind])
        for key in sorted(groups, key=lambda k: tuple(map(_sort_key, k))):
            value = groups[key]
            if self.agg == "collect":
                value = tuple(sorted(value, key=_sort_key))
            yield key + (value,)


def _sort_key(v):
    return (v is None, type(v).__name__, str(v))


def _compile_pipeline(steps, graph: PropertyGraph):
    """Build the operator tree, checking binding flow and vocabulary."""
    if not isinstance(steps, list) or not steps:
        raise PlanError("a plan is a non-empty list of operator steps")
    node = None
    bound = set()

    def need(step, *names):
        for name in names:
            if name not in step:
                raise PlanError(f"operator {step.get('op')!r} needs {name!r}")

    for step in steps:
        if isinstance(node, _Group):
            raise PlanError("group must be the final step of a pipeline")
        op = step.get("op")
        if op == "scan":
            need(step, "label", "bind")
            if node is not None:
                raise PlanError("scan must be the first step of a pipeline")
            if step["label"] not in graph.known_labels:
                raise PlanError(f"unknown label {step['label']!r}")
            node = _Scan(step["label"], step["bind"])
            bound.add(step["bind"])
        elif op == "read":
            need(step, "var", "key", "bind")
            if step["var"] not in bound:
                raise PlanError(f"read: unbound variable {step['var']!r}")
            if step["key"] not in graph.known_keys:
                raise PlanError(f"unknown property key {step['key']!r}")
            node = _Read(node, step["var"], step["key"], step["bind"])
            bound.add(step["bind"])
        elif op == "filter":
            need(step, "bind")
            if step["bind"] not in bound:
                raise PlanError(f"filter: unbound {step['bind']!r}")
            other = step.get("eq_bind")
            if other is None and "eq" not in step:
                raise PlanError("filter needs 'eq' or 'eq_bind'")
            if other is not None and other not in bound:
                raise PlanError(f"filter: unbound {other!r}")
            node = _Filter(node, step["bind"], step.get("eq"), other)
        elif op == "expand":
            need(step, "var", "edge", "dir", "bind")
            if step["var"] not in bound:
                raise PlanError(f"expand: unbound variable {step['var']!r}")
            if step["dir"] not in ("in", "out"):
                raise PlanError("expand: dir must be 'in' or 'out'")
            if step["edge"] not in graph.known_labels:
                raise PlanError(f"unknown edge label {step['edge']!r}")
            nl = step.get("neighbor_label")
            if nl is not None and nl not in graph.known_labels:
                raise PlanError(f"unknown label {nl!r}")
            node = _Expand(node, step["var"], step["edge"], step["dir"],
                           step["bind"], nl)
            bound.add(step["bind"])
        elif op in ("join", "product"):
            need(step, "left", "right")
            if node is not None:
                raise PlanError(f"{op} must start its pipeline")
            left, lbound = _compile_pipeline(step["left"], graph)
            right, rbound = _compile_pipeline(step["right"], graph)
            overlap = lbound & rbound
            if overlap:
                raise PlanError(
                    "join sides rebind " + ", ".join(sorted(overlap))
                )
            if op == "join":
                on = [tuple(pair) for pair in step.get("on", ())]
                if not on:
                    raise PlanError("join needs 'on' binding pairs")
                for a, b in on:
                    if a not in lbound or b not in rbound:
                        raise PlanError(f"join: unbound pair ({a}, {b})")
                node = _Join(left, right, on)
            else:
                node = _Product(left, right)
            bound = lbound | rbound
        elif op == "project":
            need(step, "cols")
            missing = [c for c in step["cols"] if c not in bound]
            if missing:
                raise PlanError("project: unbound " + ", ".join(missing))
            node = _Project(node, list(step["cols"]))
        elif op == "group":
            need(step, "by", "agg")
            missing = [b for b in step["by"] if b not in bound]
            if missing:
                raise PlanError("group: unbound " + ", ".join(missing))
            if step["agg"] == "collect" and step.get("agg_bind") not in bound:
                raise PlanError("group collect: unbound agg_bind")
            node = _Group(node, list(step["by"]), step["agg"],
                          step.get("agg_bind"), step.get("bind", "value"))
        else:
            raise PlanError(f"unknown operator {op!r}")
    return node, bound


def compile_plan(steps, graph: PropertyGraph) -> _Op:
    node, _ = _compile_pipeline(steps, graph)
    if not isinstance(node, (_Project, _Group)):
        raise PlanError("a plan must end with project or group")
    return node


def execute(steps, graph: PropertyGraph):
    """Run a plan; returns (result rows as tuples, QueryStats)."""
    root = compile_plan(steps, graph)
    stats = QueryStats()
    ctx = _Ctx(graph, stats)
    start = time.perf_counter()
    results = list(root.rows(ctx))
    stats.wall_time = time.perf_counter() - start
    stats.rows = len(results)
    stats.operator_trace = _trace(root, ctx)
    return results, stats


def _trace(node, ctx, out=None):
    if out is None:
        out = []
    for attr in ("child", "left", "right"):
        sub = getattr(node, attr, None)
        if sub is not None:
            _trace(sub, ctx, out)
    out.append((node.desc, ctx.per_op.get(id(node), 0)))
    return out


# ------------------------------------------------------------------ workloads

def load_workload(path) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    queries = doc.get("queries") or []
    for entry in queries:
        for part in ("name", "pre", "post"):
            if part not in entry:
                raise PlanError(f"workload entry missing {part!r}")
    return queries


def workload(pre_graph: PropertyGraph, post_graph: PropertyGraph,
             queries) -> list:
    """Run each query's embedded form on the pre graph and trait form on the
    post graph; returns one comparison row per query."""
    rows = []
    for entry in queries:
        pre_results, pre_stats = execute(entry["pre"], pre_graph)
        post_results, post_stats = execute(entry["post"], post_graph)
        rows.append({
            "name": entry["name"],
            "pre_rows": pre_stats.rows,
            "post_rows": post_stats.rows,
            "pre_accesses": pre_stats.accesses,
            "post_accesses": post_stats.accesses,
            "access_ratio": (
                pre_stats.accesses / post_stats.accesses
                if post_stats.accesses else None
            ),
            "pre_time_ms": round(pre_stats.wall_time * 1000, 3),
            "post_time_ms": round(post_stats.wall_time * 1000, 3),
            "pre_cartesian": pre_stats.cartesian,
            "post_cartesian": post_stats.cartesian,
            "results_equal": _multiset(pre_results) == _multiset(post_results),
        })
    return rows


def _multiset(results):
    return sorted(results, key=lambda row: tuple(map(_sort_key, row)))
