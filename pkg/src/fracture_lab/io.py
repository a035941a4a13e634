"""Parsing and serialization for graphs, colourings, and edge colourings.

Text format for plain graphs::

    p <n> <m>
    u v          (m lines, 0 <= u < v < n)

Coloured graphs and edge colourings travel as JSON documents; see
``parse_colored`` and ``parse_edge_coloring``.
"""

from __future__ import annotations

import json

from .graphs import (
    ColoredGraph,
    ColoringError,
    EdgeColoring,
    Graph,
    VertexColoring,
    colored,
)


class FormatError(ValueError):
    """Base class for malformed serialized inputs."""


class HeaderError(FormatError):
    """The 'p <n> <m>' header line is missing or malformed."""


class VertexRangeError(FormatError):
    """An edge references a vertex id outside [0, n) or violates u < v."""


class DuplicateEdgeError(FormatError):
    """The same edge appears more than once."""


def parse_graph(text: str) -> Graph:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise HeaderError("empty input, expected a 'p <n> <m>' header")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "p":
        raise HeaderError(f"bad header line: {lines[0]!r}")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError as exc:
        raise HeaderError(f"non-integer header fields: {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise HeaderError("negative vertex or edge count")
    if len(lines) - 1 != m:
        raise HeaderError(f"header declares {m} edges, found {len(lines) - 1} edge lines")
    edges = []
    seen = set()
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"bad edge line: {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"non-integer edge line: {line!r}") from exc
        if not (0 <= u < v < n):
            raise VertexRangeError(f"edge ({u}, {v}) violates 0 <= u < v < {n}")
        if (u, v) in seen:
            raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, tuple(edges))


def serialize_graph(g: Graph) -> str:
    lines = [f"p {g.vertex_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def graph_to_obj(g: Graph) -> dict:
    return {"n": g.vertex_count, "edges": [list(e) for e in g.edges]}


def graph_from_obj(obj: dict) -> Graph:
    try:
        n = int(obj["n"])
        raw_edges = obj["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad graph object: {obj!r}") from exc
    edges = []
    seen = set()
    for item in raw_edges:
        u, v = int(item[0]), int(item[1])
        if not (0 <= u < v < n):
            raise VertexRangeError(f"edge ({u}, {v}) violates 0 <= u < v < {n}")
        if (u, v) in seen:
            raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, tuple(edges))


def serialize_colored(cg: ColoredGraph) -> str:
    doc = {
        "q": graph_to_obj(cg.q),
        "host": graph_to_obj(cg.graph),
        "assignment": list(cg.coloring.assignment),
        "surjective": cg.coloring.surjective,
    }
    return json.dumps(doc, sort_keys=True)


def parse_colored(text: str) -> ColoredGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    for key in ("q", "host", "assignment"):
        if key not in doc:
            raise FormatError(f"coloured-graph document missing field {key!r}")
    q = graph_from_obj(doc["q"])
    host = graph_from_obj(doc["host"])
    assignment = tuple(int(x) for x in doc["assignment"])
    surjective = bool(doc.get("surjective", False))
    for x in assignment:
        if not 0 <= x < q.vertex_count:
            raise VertexRangeError(f"colour {x} not a vertex of q")
    # ColoredGraph construction checks the homomorphism property (ColoringError)
    return colored(host, q, assignment, surjective)


def serialize_edge_coloring(ec: EdgeColoring) -> str:
    if ec.palette != tuple(range(ec.palette_size)):
        raise FormatError("only integer palettes 0..k-1 serialize to the wire format")
    doc = {
        "palette": ec.palette_size,
        "colors": [[u, v, c] for (u, v), c in ec.colors],
    }
    return json.dumps(doc, sort_keys=True)


def parse_edge_coloring(text: str) -> EdgeColoring:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if "palette" not in doc or "colors" not in doc:
        raise FormatError("edge-colouring document needs 'palette' and 'colors'")
    palette_size = int(doc["palette"])
    if palette_size <= 0:
        raise FormatError("palette size must be positive")
    colors = []
    seen = set()
    for item in doc["colors"]:
        u, v, c = int(item[0]), int(item[1]), int(item[2])
        if u >= v:
            raise VertexRangeError(f"edge ({u}, {v}) violates u < v")
        if not 0 <= c < palette_size:
            raise ColoringError(f"colour {c} outside palette of size {palette_size}")
        if (u, v) in seen:
            raise DuplicateEdgeError(f"duplicate edge ({u}, {v}) in colouring")
        seen.add((u, v))
        colors.append(((u, v), c))
    return EdgeColoring(tuple(range(palette_size)), tuple(colors))


__all__ = [
    "FormatError",
    "HeaderError",
    "VertexRangeError",
    "DuplicateEdgeError",
    "parse_graph",
    "serialize_graph",
    "graph_to_obj",
    "graph_from_obj",
    "parse_colored",
    "serialize_colored",
    "parse_edge_coloring",
    "serialize_edge_coloring",
]
