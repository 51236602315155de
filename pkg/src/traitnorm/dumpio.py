"""Line-delimited graph serialization: one JSON object per node or edge.

Nodes are written first ordered by id, then edges ordered by id, with sorted
keys inside each record, so identical graphs always produce byte-identical
dumps.  Ids are stored explicitly and restored exactly on load.  Date values
are wrapped as {"$date": "YYYY-MM-DD"} to survive the round trip; user
property values are scalars, so the wrapper cannot collide.
"""

from __future__ import annotations

import datetime
import json

from .graph import PropertyGraph


class DumpFormatError(Exception):
    pass


def _encode_value(value):
    if isinstance(value, datetime.date):
        return {"$date": value.isoformat()}
    return value


def _decode_value(value, where: str):
    if isinstance(value, dict):
        if set(value) == {"$date"}:
            return datetime.date.fromisoformat(value["$date"])
        raise DumpFormatError(f"{where}: unexpected structured value {value!r}")
    if isinstance(value, list):
        raise DumpFormatError(f"{where}: list values are not allowed")
    return value


def dump_lines(graph: PropertyGraph):
    from .graph import ElementRef

    for nid in graph.node_ids():
        yield json.dumps(
            {
                "kind": "node",
                "id": nid,
                "labels": sorted(graph.node_labels(nid)),
                "props": {
                    k: _encode_value(v)
                    for k, v in sorted(graph.props(ElementRef("node", nid)).items())
                },
            },
            sort_keys=True,
            ensure_ascii=False,
        )
    for eid in graph.edge_ids():
        src, dst = graph.edge_endpoints(eid)
        yield json.dumps(
            {
                "kind": "edge",
                "id": eid,
                "src": src,
                "dst": dst,
                "label": graph.edge_label(eid),
                "props": {
                    k: _encode_value(v)
                    for k, v in sorted(graph.props(ElementRef("edge", eid)).items())
                },
            },
            sort_keys=True,
            ensure_ascii=False,
        )


def dump(graph: PropertyGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in dump_lines(graph):
            fh.write(line + "\n")


def dumps(graph: PropertyGraph) -> str:
    return "".join(line + "\n" for line in dump_lines(graph))


def load_dump(path) -> PropertyGraph:
    graph = PropertyGraph()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DumpFormatError(f"{where}: invalid JSON ({exc})") from None
            if not isinstance(record, dict) or "kind" not in record:
                raise DumpFormatError(f"{where}: record has no 'kind'")
            props = {
                k: _decode_value(v, where)
                for k, v in (record.get("props") or {}).items()
            }
            try:
                if record["kind"] == "node":
                    graph.create_node(
                        record["labels"], props, privileged=True,
                        _id=int(record["id"]),
                    )
                elif record["kind"] == "edge":
                    graph.create_edge(
                        int(record["src"]), int(record["dst"]),
                        record["label"], props, _id=int(record["id"]),
                    )
                else:
                    raise DumpFormatError(
                        f"{where}: unknown kind {record['kind']!r}"
                    )
            except (KeyError, ValueError) as exc:
                raise DumpFormatError(f"{where}: malformed record ({exc})") from None
    return graph
