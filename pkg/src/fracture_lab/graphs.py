"""Immutable simple graphs, vertex/edge colourings, and basic constructions.

Graphs are undirected, loop-free, and carry dense 0-based integer vertex ids.
Every type in this module is frozen after construction, so instances are
hashable, usable as dictionary keys, and safe to share between threads.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    """Return the unordered pair (u, v) as a sorted tuple."""
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        canonical = tuple(sorted(normalize_edge(u, v) for u, v in self.edges))
        object.__setattr__(self, "edges", canonical)
        seen = set()
        for u, v in canonical:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.neighbors)

    @cached_property
    def incident_edge_ids(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the indices into ``edges`` of its incident edges."""
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for idx, (u, v) in enumerate(self.edges):
            inc[u].append(idx)
            inc[v].append(idx)
        return tuple(tuple(lst) for lst in inc)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edge_set if u != v else False

    @cached_property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def is_regular(self, k: int) -> bool:
        return all(d == k for d in self.degrees)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted vertex tuples, ordered by least vertex."""
        seen = [False] * self.vertex_count
        comps = []
        for start in range(self.vertex_count):
            if seen[start]:
                continue
            queue = deque([start])
            seen[start] = True
            comp = []
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w in self.neighbors[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @property
    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or len(self.components) == 1

    @cached_property
    def is_forest(self) -> bool:
        return self.edge_count == self.vertex_count - len(self.components)

    @property
    def is_tree(self) -> bool:
        return self.is_connected and self.is_forest and self.vertex_count >= 1

    @cached_property
    def bipartition(self) -> tuple[frozenset[int], frozenset[int]] | None:
        """A 2-colouring of the vertices, or None if the graph is not bipartite."""
        color = [-1] * self.vertex_count
        for start in range(self.vertex_count):
            if color[start] != -1:
                continue
            color[start] = 0
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for w in self.neighbors[v]:
                    if color[w] == -1:
                        color[w] = 1 - color[v]
                        queue.append(w)
                    elif color[w] == color[v]:
                        return None
        return (
            frozenset(v for v in range(self.vertex_count) if color[v] == 0),
            frozenset(v for v in range(self.vertex_count) if color[v] == 1),
        )

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition is not None

    def induced_subgraph(self, vertices: tuple[int, ...]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph with vertices relabelled 0..k-1; returns (graph, old->new)."""
        order = sorted(vertices)
        relabel = {v: i for i, v in enumerate(order)}
        vs = set(order)
        edges = tuple(
            (relabel[u], relabel[v]) for u, v in self.edges if u in vs and v in vs
        )
        return Graph(len(order), edges), relabel

    def without_edges(self, removed: frozenset[Edge] | set[Edge]) -> "Graph":
        drop = {normalize_edge(u, v) for u, v in removed}
        return Graph(self.vertex_count, tuple(e for e in self.edges if e not in drop))


def graph_from_edges(vertex_count: int, edges) -> Graph:
    return Graph(vertex_count, tuple(tuple(e) for e in edges))


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(edge_count: int) -> Graph:
    """The path with ``edge_count`` edges on edge_count + 1 vertices."""
    return Graph(edge_count + 1, tuple((i, i + 1) for i in range(edge_count)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def disjoint_union(graphs) -> Graph:
    offset = 0
    edges: list[Edge] = []
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.vertex_count
    return Graph(offset, tuple(edges))


def triangle_packing(k: int) -> Graph:
    return disjoint_union([complete_graph(3)] * k)


def p2_packing(k: int) -> Graph:
    """Disjoint union of k paths with two edges each."""
    return disjoint_union([path_graph(2)] * k)


# ---------------------------------------------------------------------------
# Colourings


@dataclass(frozen=True)
class VertexColoring:
    """A map from host vertices into a target graph Q, i.e. a Q-colouring.

    The homomorphism property (host edges land on Q-edges) depends on the host
    graph and is checked by ``validate_against`` or on ColoredGraph creation.
    """

    target: Graph
    assignment: tuple[int, ...]
    surjective: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(self.assignment))
        for q in self.assignment:
            if not 0 <= q < self.target.vertex_count:
                raise ColoringError(f"colour {q} is not a vertex of the target graph")

    def color_of(self, v: int) -> int:
        return self.assignment[v]

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        """Preimage of each target vertex, indexed by target vertex id."""
        buckets: list[list[int]] = [[] for _ in range(self.target.vertex_count)]
        for v, q in enumerate(self.assignment):
            buckets[q].append(v)
        return tuple(tuple(b) for b in buckets)

    def validate_against(self, host: Graph) -> None:
        if len(self.assignment) != host.vertex_count:
            raise ColoringError(
                f"assignment covers {len(self.assignment)} vertices, host has {host.vertex_count}"
            )
        for u, v in host.edges:
            cu, cv = self.assignment[u], self.assignment[v]
            if cu == cv or not self.target.has_edge(cu, cv):
                raise ColoringError(
                    f"host edge ({u}, {v}) maps to ({cu}, {cv}), not an edge of the target"
                )
        if self.surjective and any(len(c) == 0 for c in self.classes):
            raise ColoringError("colouring flagged surjective but misses a target vertex")


class ColoringError(ValueError):
    """A vertex or edge colouring violates its contract."""


@dataclass(frozen=True)
class ColoredGraph:
    """A host graph together with a validated Q-colouring of its vertices."""

    graph: Graph
    coloring: VertexColoring

    def __post_init__(self) -> None:
        self.coloring.validate_against(self.graph)

    @property
    def q(self) -> Graph:
        return self.coloring.target

    def color_of(self, v: int) -> int:
        return self.coloring.assignment[v]

    @cached_property
    def edge_colors(self) -> "EdgeColoring":
        """The induced edge colouring: each host edge gets the Q-edge of its endpoints."""
        colors = {}
        for u, v in self.graph.edges:
            colors[(u, v)] = normalize_edge(self.color_of(u), self.color_of(v))
        return EdgeColoring(palette=self.q.edges, colors=tuple(sorted(colors.items())))


def colored(graph: Graph, q: Graph, assignment, surjective: bool = False) -> ColoredGraph:
    return ColoredGraph(graph, VertexColoring(q, tuple(assignment), surjective))


def identity_colored(q: Graph) -> ColoredGraph:
    """Q coloured by the identity map."""
    return colored(q, q, tuple(range(q.vertex_count)))


@dataclass(frozen=True)
class EdgeColoring:
    """A total map from host edges to a fixed palette of colours.

    Palette entries are arbitrary hashables: small integers for stand-alone
    colourings, Q-edges for colourings induced by a vertex colouring.
    """

    palette: tuple
    colors: tuple  # sorted tuple of (edge, color) pairs

    def __post_init__(self) -> None:
        object.__setattr__(self, "palette", tuple(self.palette))
        object.__setattr__(self, "colors", tuple(sorted(self.colors)))
        allowed = set(self.palette)
        if len(allowed) != len(self.palette):
            raise ColoringError("palette contains repeated colours")
        for edge, color in self.colors:
            if color not in allowed:
                raise ColoringError(f"edge {edge} coloured with {color}, not in palette")

    @property
    def palette_size(self) -> int:
        return len(self.palette)

    @cached_property
    def as_dict(self) -> dict[Edge, object]:
        return dict(self.colors)

    @cached_property
    def classes(self) -> dict[object, tuple[Edge, ...]]:
        """Edges grouped by colour; every palette colour is present (possibly empty)."""
        buckets: dict[object, list[Edge]] = {c: [] for c in self.palette}
        for edge, color in self.colors:
            buckets[color].append(edge)
        return {c: tuple(es) for c, es in buckets.items()}

    def validate_total(self, host: Graph) -> None:
        mapping = self.as_dict
        for e in host.edges:
            if e not in mapping:
                raise ColoringError(f"edge {e} of the host has no colour")

    def restricted_to(self, colors_kept) -> set[Edge]:
        kept = set(colors_kept)
        return {e for e, c in self.colors if c in kept}


def edge_coloring_from_map(host: Graph, palette, mapping: dict[Edge, object]) -> EdgeColoring:
    coloring = EdgeColoring(tuple(palette), tuple(sorted(
        (normalize_edge(u, v), c) for (u, v), c in mapping.items()
    )))
    coloring.validate_total(host)
    return coloring


# ---------------------------------------------------------------------------
# Constructions


def line_graph(h: Graph) -> Graph:
    """One vertex per edge of h; vertices adjacent iff the edges share an endpoint."""
    if h.edge_count == 0:
        raise ValueError("line graph of a graph with no edges is degenerate")
    edges = []
    for i, j in combinations(range(h.edge_count), 2):
        a, b = h.edges[i], h.edges[j]
        if a[0] in b or a[1] in b:
            edges.append((i, j))
    return Graph(h.edge_count, tuple(edges))


def subdivide(h: Graph) -> tuple[Graph, dict[Edge, int]]:
    """Subdivide every edge once.

    The subdivision vertex of the i-th edge (in sorted edge order) gets id
    vertex_count + i; returns the new graph and the edge -> new-vertex map.
    """
    n = h.vertex_count
    new_edges = []
    sub_map = {}
    for i, (u, v) in enumerate(h.edges):
        s = n + i
        sub_map[(u, v)] = s
        new_edges.append((u, s))
        new_edges.append((s, v))
    return Graph(n + h.edge_count, tuple(new_edges)), sub_map


def fibered_product(g1: ColoredGraph, g2: ColoredGraph, drop_isolated: bool = False) -> ColoredGraph:
    """Categorical product over the shared target Q.

    Vertices are pairs (u, w) with matching colours; (u, w) ~ (u', w') iff both
    projections are edges. Colour-preserving homomorphism counts into the
    product multiply.
    """
    if g1.q != g2.q:
        raise ColoringError("fibered product requires both factors coloured over the same Q")
    pairs = [
        (u, w)
        for u in range(g1.graph.vertex_count)
        for w in range(g2.graph.vertex_count)
        if g1.color_of(u) == g2.color_of(w)
    ]
    index = {p: i for i, p in enumerate(pairs)}
    edges = set()
    for u, up in g1.graph.edges:
        for w, wp in g2.graph.edges:
            for a, b in ((u, up), (up, u)):
                for x, y in ((w, wp), (wp, w)):
                    if (a, x) in index and (b, y) in index:
                        edges.add(normalize_edge(index[(a, x)], index[(b, y)]))
    if drop_isolated:
        touched = sorted({v for e in edges for v in e})
        relabel = {v: i for i, v in enumerate(touched)}
        pairs = [pairs[v] for v in touched]
        edges = {(relabel[u], relabel[v]) for u, v in edges}
    assignment = tuple(g1.color_of(u) for u, _ in pairs)
    return colored(Graph(len(pairs), tuple(edges)), g1.q, assignment)


# ---------------------------------------------------------------------------
# Isomorphism


def _wl_colors(g: Graph, rounds: int = 3) -> tuple:
    """Iterated degree refinement; returns one canonical structural colour per vertex."""
    colors: list[object] = [g.degrees[v] for v in range(g.vertex_count)]
    for _ in range(rounds):
        colors = [
            (colors[v], tuple(sorted(colors[w] for w in g.neighbors[v])))
            for v in range(g.vertex_count)
        ]
    return tuple(colors)


def _rooted_tree_code(g: Graph, root: int, parent: int) -> tuple:
    children = sorted(
        _rooted_tree_code(g, w, root) for w in g.neighbors[root] if w != parent
    )
    return tuple(children)


def _tree_centers(g: Graph, comp: tuple[int, ...]) -> list[int]:
    """The one or two centre vertices of a tree component."""
    if len(comp) == 1:
        return [comp[0]]
    comp_set = set(comp)
    degree = {v: sum(1 for w in g.neighbors[v] if w in comp_set) for v in comp}
    leaves = deque(v for v in comp if degree[v] == 1)
    remaining = len(comp)
    while remaining > 2:
        for _ in range(len(leaves)):
            v = leaves.popleft()
            remaining -= 1
            degree[v] = 0
            for w in g.neighbors[v]:
                if w in comp_set and degree[w] > 1:
                    degree[w] -= 1
                    if degree[w] == 1:
                        leaves.append(w)
    return sorted(leaves)


def forest_code(g: Graph) -> tuple:
    """Canonical code of a forest: the sorted multiset of component codes."""
    codes = []
    for comp in g.components:
        centers = _tree_centers(g, comp)
        codes.append(min(_rooted_tree_code(g, c, -1) for c in centers))
    return tuple(sorted(codes))


def _connected_isomorphic(a: Graph, b: Graph) -> bool:
    """Backtracking isomorphism test for connected graphs of equal invariants."""
    n = a.vertex_count
    wl_a, wl_b = _wl_colors(a), _wl_colors(b)
    if sorted(wl_a) != sorted(wl_b):
        return False
    # masks for O(1) adjacency-consistency checks
    mask_b = [0] * n
    for u, v in b.edges:
        mask_b[u] |= 1 << v
        mask_b[v] |= 1 << u
    by_color_b: dict[object, list[int]] = {}
    for w in range(n):
        by_color_b.setdefault(wl_b[w], []).append(w)

    # order a's vertices: rarest colour first, then stay connected
    rarity = Counter(wl_a)
    start = min(range(n), key=lambda v: (rarity[wl_a[v]], -a.degree(v), v))
    order = [start]
    placed = {start}
    while len(order) < n:
        candidates = [v for v in range(n) if v not in placed and any(w in placed for w in a.neighbors[v])]
        if not candidates:  # cannot happen for connected a
            candidates = [v for v in range(n) if v not in placed]
        nxt = min(candidates, key=lambda v: (rarity[wl_a[v]], -a.degree(v), v))
        order.append(nxt)
        placed.add(nxt)

    image = [-1] * n
    used_mask = 0

    def backtrack(pos: int) -> bool:
        nonlocal used_mask
        if pos == n:
            return True
        v = order[pos]
        needed = 0
        for w in a.neighbors[v]:
            if image[w] != -1:
                needed |= 1 << image[w]
        for cand in by_color_b.get(wl_a[v], ()):
            bit = 1 << cand
            if used_mask & bit:
                continue
            if mask_b[cand] & used_mask != needed:
                continue
            image[v] = cand
            used_mask |= bit
            if backtrack(pos + 1):
                return True
            image[v] = -1
            used_mask &= ~bit
        return False

    return backtrack(0)


def is_isomorphic(a: Graph, b: Graph) -> bool:
    """Exact isomorphism test, component by component.

    Forests are compared by canonical codes; other components by backtracking
    with degree-and-neighbourhood refinement. Intended for components of at
    most ~30 vertices.
    """
    if a.vertex_count != b.vertex_count or a.edge_count != b.edge_count:
        return False
    if sorted(a.degrees) != sorted(b.degrees):
        return False
    if a.is_forest or b.is_forest:
        if a.is_forest != b.is_forest:
            return False
        return forest_code(a) == forest_code(b)

    comps_a = [a.induced_subgraph(c)[0] for c in a.components]
    comps_b = [b.induced_subgraph(c)[0] for c in b.components]

    def signature(g: Graph) -> tuple:
        return (g.vertex_count, g.edge_count, tuple(sorted(_wl_colors(g))))

    groups_a: dict[tuple, list[Graph]] = {}
    groups_b: dict[tuple, list[Graph]] = {}
    for g in comps_a:
        groups_a.setdefault(signature(g), []).append(g)
    for g in comps_b:
        groups_b.setdefault(signature(g), []).append(g)
    if set(groups_a) != set(groups_b):
        return False
    for sig, group_a in groups_a.items():
        group_b = groups_b[sig]
        if len(group_a) != len(group_b):
            return False
        # partition group_a into isomorphism classes, then match counts in b
        reps: list[Graph] = []
        count_a: list[int] = []
        for g in group_a:
            for i, rep in enumerate(reps):
                if _connected_isomorphic(g, rep):
                    count_a[i] += 1
                    break
            else:
                reps.append(g)
                count_a.append(1)
        count_b = [0] * len(reps)
        for g in group_b:
            for i, rep in enumerate(reps):
                if _connected_isomorphic(g, rep):
                    count_b[i] += 1
                    break
            else:
                return False
        if count_a != count_b:
            return False
    return True
