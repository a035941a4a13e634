"""Exact and mod-2 counting of homomorphisms, embeddings, and subgraphs.

Every counter here is an exhaustive search: results are exact integers
(arbitrary precision) with parity available alongside. These are the oracles
the rest of the library is verified against, so they favour transparent
correctness plus enough pruning to stay fast at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb, factorial

from .graphs import (
    ColoringError,
    EdgeColoring,
    Graph,
    VertexColoring,
    forest_code,
    is_isomorphic,
)


@dataclass(frozen=True)
class CountResult:
    """An exact count with its parity; parity always equals exact mod 2."""

    exact: int

    @property
    def parity(self) -> int:
        return self.exact & 1


def _check_colorings(
    pattern: Graph,
    host: Graph,
    pattern_coloring: VertexColoring | None,
    host_coloring: VertexColoring | None,
) -> None:
    if (pattern_coloring is None) != (host_coloring is None):
        raise ColoringError("supply colourings for both pattern and host, or neither")
    if pattern_coloring is not None:
        if pattern_coloring.target != host_coloring.target:
            raise ColoringError("pattern and host are coloured over different graphs")
        pattern_coloring.validate_against(pattern)
        host_coloring.validate_against(host)


def _connected_order(pattern: Graph, component: tuple[int, ...]) -> list[int]:
    """Order the component so each vertex after the first has an earlier neighbour."""
    start = max(component, key=lambda v: (pattern.degree(v), -v))
    order = [start]
    placed = {start}
    while len(order) < len(component):
        nxt = max(
            (v for v in component if v not in placed and any(w in placed for w in pattern.neighbors[v])),
            key=lambda v: (pattern.degree(v), -v),
        )
        order.append(nxt)
        placed.add(nxt)
    return order


def _hom_count_component(
    pattern: Graph,
    host: Graph,
    order: list[int],
    classes: tuple[tuple[int, ...], ...] | None,
    pattern_colors: tuple[int, ...] | None,
) -> int:
    """Homomorphisms of one pattern component, by backtracking."""
    image: dict[int, int] = {}
    neighbors = host.neighbors

    def extend(pos: int) -> int:
        if pos == len(order):
            return 1
        v = order[pos]
        placed_nb = [image[w] for w in pattern.neighbors[v] if w in image]
        if classes is not None:
            base = classes[pattern_colors[v]]
        elif placed_nb:
            base = neighbors[placed_nb[0]]
        else:
            base = range(host.vertex_count)
        total = 0
        for cand in base:
            if any(cand not in neighbors[x] for x in placed_nb):
                continue
            image[v] = cand
            total += extend(pos + 1)
        image.pop(v, None)
        return total

    return extend(0)


def count_homs(
    pattern: Graph,
    host: Graph,
    pattern_coloring: VertexColoring | None = None,
    host_coloring: VertexColoring | None = None,
) -> CountResult:
    """Count (colour-preserving) homomorphisms from pattern to host.

    Homomorphism counts factor over connected components of the pattern, so
    each component is counted independently and the results multiplied.
    """
    _check_colorings(pattern, host, pattern_coloring, host_coloring)
    classes = host_coloring.classes if host_coloring is not None else None
    pattern_colors = pattern_coloring.assignment if pattern_coloring is not None else None
    total = 1
    for comp in pattern.components:
        order = _connected_order(pattern, comp)
        part = _hom_count_component(pattern, host, order, classes, pattern_colors)
        if part == 0:
            return CountResult(0)
        total *= part
    return CountResult(total)


def count_embs(
    pattern: Graph,
    host: Graph,
    pattern_coloring: VertexColoring | None = None,
    host_coloring: VertexColoring | None = None,
) -> CountResult:
    """Count injective (colour-preserving) homomorphisms from pattern to host."""
    _check_colorings(pattern, host, pattern_coloring, host_coloring)
    if pattern.vertex_count > host.vertex_count:
        return CountResult(0)
    classes = host_coloring.classes if host_coloring is not None else None
    pattern_colors = pattern_coloring.assignment if pattern_coloring is not None else None

    order: list[int] = []
    for comp in sorted(pattern.components, key=len, reverse=True):
        order.extend(_connected_order(pattern, comp))

    neighbors = host.neighbors
    image = [-1] * pattern.vertex_count
    used: set[int] = set()

    def extend(pos: int) -> int:
        if pos == len(order):
            return 1
        v = order[pos]
        placed_nb = [image[w] for w in pattern.neighbors[v] if image[w] != -1]
        if classes is not None:
            base = classes[pattern_colors[v]]
        elif placed_nb:
            base = neighbors[placed_nb[0]]
        else:
            base = range(host.vertex_count)
        total = 0
        for cand in base:
            if cand in used:
                continue
            if any(cand not in neighbors[x] for x in placed_nb):
                continue
            image[v] = cand
            used.add(cand)
            total += extend(pos + 1)
            used.discard(cand)
            image[v] = -1
        return total

    return CountResult(extend(0))


def automorphism_count(g: Graph) -> int:
    """Size of the automorphism group, as injective self-homomorphisms."""
    return count_embs(g, g).exact


def _strip_isolated(pattern: Graph) -> tuple[Graph, int]:
    touched = sorted({v for e in pattern.edges for v in e})
    isolated = pattern.vertex_count - len(touched)
    if isolated == 0:
        return pattern, 0
    core, _ = pattern.induced_subgraph(tuple(touched))
    return core, isolated


def _images_by_vertex_set(component: Graph, host: Graph) -> dict[int, int]:
    """Map host-vertex bitmask -> number of distinct subgraph images of the component.

    Enumerates embeddings and divides the per-mask total by |Aut(component)|:
    every image is hit by exactly that many embeddings.
    """
    aut = automorphism_count(component)
    order = _connected_order(component, component.components[0])
    neighbors = host.neighbors
    image = [-1] * component.vertex_count
    counts: dict[int, int] = {}
    used_mask = 0

    def extend(pos: int) -> None:
        nonlocal used_mask
        if pos == len(order):
            counts[used_mask] = counts.get(used_mask, 0) + 1
            return
        v = order[pos]
        placed_nb = [image[w] for w in component.neighbors[v] if image[w] != -1]
        base = neighbors[placed_nb[0]] if placed_nb else range(host.vertex_count)
        for cand in base:
            bit = 1 << cand
            if used_mask & bit:
                continue
            if any(cand not in neighbors[x] for x in placed_nb):
                continue
            image[v] = cand
            used_mask |= bit
            extend(pos + 1)
            used_mask &= ~bit
            image[v] = -1

    extend(0)
    return {mask: c // aut for mask, c in counts.items()}


def count_subs(pattern: Graph, host: Graph) -> CountResult:
    """Count subgraphs of host isomorphic to pattern (vertex subset + edge subset).

    Independent of ``count_embs``: connected pieces are matched as distinct
    images per vertex set, then combined by a disjointness DP over vertex
    masks, with multiplicities of repeated pieces divided out.
    """
    core, isolated = _strip_isolated(pattern)
    spare = host.vertex_count - core.vertex_count
    if spare < isolated:
        return CountResult(0)
    isolated_ways = comb(spare, isolated)
    if core.edge_count == 0:
        return CountResult(isolated_ways)

    # group core components into isomorphism classes
    comps = [core.induced_subgraph(c)[0] for c in core.components]
    reps: list[Graph] = []
    multiplicity: list[int] = []
    for g in comps:
        for i, rep in enumerate(reps):
            if is_isomorphic(g, rep):
                multiplicity[i] += 1
                break
        else:
            reps.append(g)
            multiplicity.append(1)

    current: dict[int, int] = {0: 1}
    for rep, mult in zip(reps, multiplicity):
        images = _images_by_vertex_set(rep, host)
        if not images:
            return CountResult(0)
        # unordered selections of `mult` pairwise-disjoint images
        layer: dict[int, int] = {0: 1}
        for _ in range(mult):
            nxt: dict[int, int] = {}
            for mask, ways in layer.items():
                for img_mask, img_count in images.items():
                    if mask & img_mask:
                        continue
                    key = mask | img_mask
                    nxt[key] = nxt.get(key, 0) + ways * img_count
            layer = nxt
            if not layer:
                return CountResult(0)
        denom = factorial(mult)
        layer = {mask: ways // denom for mask, ways in layer.items()}
        merged: dict[int, int] = {}
        for mask, ways in current.items():
            for lmask, lways in layer.items():
                if mask & lmask:
                    continue
                key = mask | lmask
                merged[key] = merged.get(key, 0) + ways * lways
        current = merged
        if not current:
            return CountResult(0)

    total = sum(current.values())
    return CountResult(total * isolated_ways)


# ---------------------------------------------------------------------------
# Edge-colourful subgraphs


class _UnionFind:
    """Union-find with an undo log, tracking per-root vertex and edge counts."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.edge_count = [0] * n
        self.log: list[tuple] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def add_edge(self, u: int, v: int) -> tuple[bool, int]:
        """Record edge (u, v); returns (created_cycle, resulting root)."""
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            self.log.append(("edge", ru))
            self.edge_count[ru] += 1
            return True, ru
        if self.size[ru] < self.size[rv]:
            ru, rv = rv, ru
        self.log.append(("union", ru, rv, self.size[ru], self.edge_count[ru]))
        self.parent[rv] = ru
        self.size[ru] += self.size[rv]
        self.edge_count[ru] += self.edge_count[rv] + 1
        return False, ru

    def checkpoint(self) -> int:
        return len(self.log)

    def rollback(self, mark: int) -> None:
        while len(self.log) > mark:
            entry = self.log.pop()
            if entry[0] == "edge":
                self.edge_count[entry[1]] -= 1
            else:
                _, ru, rv, size, edges = entry
                self.parent[rv] = rv
                self.size[ru] = size
                self.edge_count[ru] = edges


def _component_edge_sizes(g: Graph) -> list[int]:
    sizes = []
    for comp in g.components:
        comp_set = set(comp)
        sizes.append(sum(1 for u, v in g.edges if u in comp_set))
    return sizes


def iter_colorful_copies(pattern: Graph, host: Graph, coloring: EdgeColoring):
    """Yield the edge sets of subgraphs of host isomorphic to pattern that use
    each palette colour exactly once.

    The pattern must have no isolated vertices (its copies are then exactly
    the unions of one-edge-per-colour selections). Enumeration iterates over
    the cartesian product of colour classes with incremental pruning, so the
    cost model is at most the product of the class sizes.
    """
    if any(d == 0 for d in pattern.degrees):
        raise ValueError("pattern with isolated vertices has no edge-determined copies")
    if coloring.palette_size != pattern.edge_count:
        raise ColoringError(
            f"palette has {coloring.palette_size} colours, pattern has {pattern.edge_count} edges"
        )
    coloring.validate_total(host)
    classes = [edges for _, edges in sorted(coloring.classes.items(), key=lambda kv: (len(kv[1]), repr(kv[0])))]
    if any(len(c) == 0 for c in classes):
        return

    pattern_is_forest = pattern.is_forest
    max_comp_edges = max(_component_edge_sizes(pattern))
    max_degree = pattern.max_degree
    n_pattern_vertices = pattern.vertex_count
    pattern_code = forest_code(pattern) if pattern_is_forest else None
    pattern_degree_multiset = sorted(pattern.degrees)

    uf = _UnionFind(host.vertex_count)
    chosen: list[tuple[int, int]] = []
    degree = [0] * host.vertex_count
    touched: list[int] = []  # stack of vertices whose degree went 0 -> 1

    def select(level: int):
        if level == len(classes):
            verts = sorted(touched)
            if len(verts) != n_pattern_vertices:
                return
            relabel = {v: i for i, v in enumerate(verts)}
            if sorted(degree[v] for v in verts) != pattern_degree_multiset:
                return
            candidate = Graph(len(verts), tuple((relabel[u], relabel[v]) for u, v in chosen))
            if pattern_is_forest:
                ok = candidate.is_forest and forest_code(candidate) == pattern_code
            else:
                ok = is_isomorphic(candidate, pattern)
            if ok:
                yield tuple(chosen)
            return
        for u, v in classes[level]:
            if degree[u] + 1 > max_degree or degree[v] + 1 > max_degree:
                continue
            new_vertices = (degree[u] == 0) + (degree[v] == 0)
            if len(touched) + new_vertices > n_pattern_vertices:
                continue
            mark = uf.checkpoint()
            cycle, root = uf.add_edge(u, v)
            if (cycle and pattern_is_forest) or uf.edge_count[root] > max_comp_edges:
                uf.rollback(mark)
                continue
            chosen.append((u, v))
            if degree[u] == 0:
                touched.append(u)
            if degree[v] == 0:
                touched.append(v)
            degree[u] += 1
            degree[v] += 1
            yield from select(level + 1)
            degree[u] -= 1
            degree[v] -= 1
            if degree[v] == 0:
                touched.pop()
            if degree[u] == 0:
                touched.pop()
            chosen.pop()
            uf.rollback(mark)

    yield from select(0)


def count_colorful_subs(pattern: Graph, host: Graph, coloring: EdgeColoring) -> CountResult:
    """Count subgraphs of host isomorphic to pattern using every colour exactly once."""
    if coloring.palette_size != pattern.edge_count:
        raise ColoringError(
            f"palette has {coloring.palette_size} colours, pattern has {pattern.edge_count} edges"
        )
    core, isolated = _strip_isolated(pattern)
    spare = host.vertex_count - core.vertex_count
    if spare < isolated:
        return CountResult(0)
    if core.edge_count == 0:
        # pattern is edgeless, so the palette is empty and the empty selection matches
        return CountResult(comb(spare, isolated))
    copies = sum(1 for _ in iter_colorful_copies(core, host, coloring))
    return CountResult(copies * comb(spare, isolated))


def brute_force_subgraph_count(pattern: Graph, host: Graph) -> int:
    """Independent oracle: enumerate edge subsets of the host directly.

    Exponential in |E(host)|; intended for cross-checking ``count_subs`` on
    tiny instances only.
    """
    core, isolated = _strip_isolated(pattern)
    spare = host.vertex_count - core.vertex_count
    if spare < isolated:
        return 0
    if core.edge_count == 0:
        return comb(spare, isolated)
    total = 0
    for subset in combinations(range(host.edge_count), core.edge_count):
        edges = [host.edges[i] for i in subset]
        verts = sorted({v for e in edges for v in e})
        if len(verts) != core.vertex_count:
            continue
        relabel = {v: i for i, v in enumerate(verts)}
        candidate = Graph(len(verts), tuple((relabel[u], relabel[v]) for u, v in edges))
        if is_isomorphic(candidate, core):
            total += 1
    return total * comb(spare, isolated)
