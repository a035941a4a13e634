"""Fractures of a graph, fractured graphs, and the fracture lattice.

A fracture of Q chooses, for each vertex, a partition of its incident edges.
Splitting every vertex into one copy per block yields the fractured graph,
which keeps one edge per edge of Q and carries a canonical Q-colouring. The
set of fractures, ordered per-vertex by partition refinement, forms a lattice
whose Mobius function is the product of partition-lattice Mobius functions;
it drives the coefficients expressing edge-colourful subgraph counts as
linear combinations of colour-preserving homomorphism counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import factorial
from typing import Callable, Iterable, Iterator

from .counting import CountResult, count_homs
from .graphs import ColoredGraph, Graph, VertexColoring, is_isomorphic, subdivide

Block = tuple[int, ...]
Partition = tuple[Block, ...]


def canonical_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    """Sort each block ascending, then blocks by least element."""
    normal = tuple(tuple(sorted(b)) for b in blocks)
    return tuple(sorted(normal, key=lambda b: b[0] if b else -1))


def set_partitions(items: tuple[int, ...], max_blocks: int | None = None) -> list[Partition]:
    """All partitions of ``items`` in a deterministic order (canonical encoding)."""
    if not items:
        return [()]
    results: list[Partition] = []

    def recurse(index: int, blocks: list[list[int]]) -> None:
        if index == len(items):
            results.append(tuple(tuple(b) for b in blocks))
            return
        item = items[index]
        for b in blocks:
            b.append(item)
            recurse(index + 1, blocks)
            b.pop()
        if max_blocks is None or len(blocks) < max_blocks:
            blocks.append([item])
            recurse(index + 1, blocks)
            blocks.pop()

    recurse(0, [])
    # items are processed in ascending order, so blocks are already canonical
    return results


@dataclass(frozen=True)
class Fracture:
    """Per-vertex partitions of the incident edges of ``base``.

    Blocks hold edge indices (positions in ``base.edges``). The stored form is
    canonical, so equal fractures compare and hash equal and can key maps.
    """

    base: Graph
    parts: tuple[Partition, ...]

    def __post_init__(self) -> None:
        if len(self.parts) != self.base.vertex_count:
            raise ValueError("fracture must give one partition per vertex")
        canon = tuple(canonical_partition(p) for p in self.parts)
        object.__setattr__(self, "parts", canon)
        for v, part in enumerate(canon):
            incident = set(self.base.incident_edge_ids[v])
            seen: set[int] = set()
            for block in part:
                if not block:
                    raise ValueError(f"empty block at vertex {v}")
                for e in block:
                    if e not in incident:
                        raise ValueError(f"edge index {e} not incident to vertex {v}")
                    if e in seen:
                        raise ValueError(f"edge index {e} repeated at vertex {v}")
                    seen.add(e)
            if seen != incident:
                raise ValueError(f"partition at vertex {v} does not cover its incident edges")

    @cached_property
    def block_of(self) -> tuple[dict[int, int], ...]:
        """Per vertex: edge index -> position of its block in the partition."""
        return tuple(
            {e: i for i, block in enumerate(part) for e in block} for part in self.parts
        )

    def block_count(self, v: int) -> int:
        return len(self.parts[v])

    @property
    def is_top(self) -> bool:
        return all(len(p) <= 1 for p in self.parts)

    def encode(self) -> list[list[list[int]]]:
        return [[list(b) for b in part] for part in self.parts]


def top_fracture(q: Graph) -> Fracture:
    """The coarsest fracture: one block per vertex, so the fractured graph is Q."""
    parts = tuple(
        (tuple(q.incident_edge_ids[v]),) if q.incident_edge_ids[v] else ()
        for v in range(q.vertex_count)
    )
    return Fracture(q, parts)


def singleton_fracture(q: Graph) -> Fracture:
    """The finest fracture: all singletons, so the fractured graph is the matching M_Q."""
    parts = tuple(
        tuple((e,) for e in q.incident_edge_ids[v]) for v in range(q.vertex_count)
    )
    return Fracture(q, parts)


def fracture_from_blocks(q: Graph, blocks: Iterable[Iterable[Iterable[int]]]) -> Fracture:
    return Fracture(q, tuple(canonical_partition(p) for p in blocks))


def enumerate_fractures(q: Graph, max_blocks: int | None = None) -> list[Fracture]:
    """All fractures of q, optionally with at most ``max_blocks`` blocks per vertex.

    The count is the product over vertices of Bell(degree); deterministic order.
    """
    per_vertex = [
        set_partitions(q.incident_edge_ids[v], max_blocks) for v in range(q.vertex_count)
    ]
    return [Fracture(q, parts) for parts in product(*per_vertex)]


@dataclass(frozen=True)
class FracturedGraph:
    """The quotient-of-matching graph of a fracture, with its canonical colouring.

    Vertex ids follow (vertex of Q, least incident edge index of the block),
    so layouts are deterministic. The edge count always equals |E(Q)|.
    """

    graph: Graph
    coloring: VertexColoring  # canonical colouring over the fracture's base
    origin: tuple[tuple[int, Block], ...]  # per new vertex: (Q-vertex, block)

    @property
    def colored(self) -> ColoredGraph:
        return ColoredGraph(self.graph, self.coloring)


def apply_fracture(q: Graph, rho: Fracture) -> FracturedGraph:
    """Split each vertex of q into one copy per block of its partition.

    Vertices of q with no incident edges do not appear in the result (the
    matching the quotient is taken of only has endpoints of edges).
    """
    if rho.base != q:
        raise ValueError("fracture belongs to a different base graph")
    origin: list[tuple[int, Block]] = []
    index: dict[tuple[int, int], int] = {}
    for v in range(q.vertex_count):
        for block_pos, block in enumerate(rho.parts[v]):
            index[(v, block_pos)] = len(origin)
            origin.append((v, block))
    edges = []
    for e, (u, v) in enumerate(q.edges):
        a = index[(u, rho.block_of[u][e])]
        b = index[(v, rho.block_of[v][e])]
        edges.append((a, b))
    graph = Graph(len(origin), tuple(edges))
    assignment = tuple(v for v, _ in origin)
    coloring = VertexColoring(q, assignment)
    coloring.validate_against(graph)
    return FracturedGraph(graph, coloring, tuple(origin))


# ---------------------------------------------------------------------------
# Lattice order and Mobius function


def _partition_refines(finer: Partition, coarser: Partition, coarser_lookup: dict[int, int]) -> bool:
    for block in finer:
        target = coarser_lookup.get(block[0])
        if target is None:
            return False
        coarse_block = coarser[target]
        if not set(block).issubset(coarse_block):
            return False
    return True


def fracture_leq(sigma: Fracture, rho: Fracture) -> bool:
    """True iff sigma refines rho at every vertex (the coarsest fracture is maximal)."""
    if sigma.base != rho.base:
        raise ValueError("fractures over different base graphs are incomparable")
    return all(
        _partition_refines(sigma.parts[v], rho.parts[v], rho.block_of[v])
        for v in range(sigma.base.vertex_count)
    )


def fracture_mobius(sigma: Fracture, rho: Fracture) -> int:
    """Mobius value of the interval [sigma, rho] in the fracture lattice.

    Product over vertices and over blocks B of rho of (-1)^(n-1) * (n-1)!
    where n is the number of sigma-blocks inside B.
    """
    if not fracture_leq(sigma, rho):
        raise ValueError("mobius value requires sigma <= rho in the fracture lattice")
    value = 1
    for v in range(sigma.base.vertex_count):
        counts = [0] * len(rho.parts[v])
        lookup = rho.block_of[v]
        for block in sigma.parts[v]:
            counts[lookup[block[0]]] += 1
        for n in counts:
            value *= (-1) ** (n - 1) * factorial(n - 1)
    return value


def coarsenings_with_mobius(sigma: Fracture) -> Iterator[tuple[Fracture, int]]:
    """All fractures rho >= sigma together with mobius(sigma, rho).

    Enumerated directly by merging blocks per vertex, so no global fracture
    enumeration is needed.
    """
    q = sigma.base
    per_vertex: list[list[tuple[Partition, int]]] = []
    for v in range(q.vertex_count):
        blocks = sigma.parts[v]
        options: list[tuple[Partition, int]] = []
        for grouping in set_partitions(tuple(range(len(blocks)))):
            merged = canonical_partition(
                tuple(sorted(e for i in group for e in blocks[i])) for group in grouping
            )
            mu = 1
            for group in grouping:
                n = len(group)
                mu *= (-1) ** (n - 1) * factorial(n - 1)
            options.append((merged, mu))
        per_vertex.append(options)
    for combo in product(*per_vertex):
        parts = tuple(part for part, _ in combo)
        mu = 1
        for _, factor in combo:
            mu *= factor
        yield Fracture(q, parts), mu


# ---------------------------------------------------------------------------
# Coefficients of the homomorphism expansion of colourful subgraph counts


CoefficientVector = dict  # Fracture -> int


def iso_to(pattern: Graph) -> Callable[[Graph], bool]:
    """Predicate: isomorphic to a fixed graph."""
    def predicate(g: Graph) -> bool:
        return is_isomorphic(g, pattern)
    return predicate


def is_triangle_packing(g: Graph) -> bool:
    """Disjoint union of triangles (at least zero of them)."""
    for comp in g.components:
        comp_set = set(comp)
        edge_count = sum(1 for u, v in g.edges if u in comp_set)
        if len(comp) != 3 or edge_count != 3:
            return False
    return True


def is_p2_packing(g: Graph) -> bool:
    """Disjoint union of paths with two edges."""
    for comp in g.components:
        comp_set = set(comp)
        edge_count = sum(1 for u, v in g.edges if u in comp_set)
        if len(comp) != 3 or edge_count != 2:
            return False
    return True


def colsub_coefficients(
    q: Graph,
    target_predicate: Callable[[Graph], bool],
    fracture_iter: Iterable[Fracture] | None = None,
) -> CoefficientVector:
    """Coefficients a with #ColSubs(target) = sum over rho of a(rho) * #Homs(fractured rho).

    a(rho) is the Mobius-weighted count of fractures sigma <= rho whose
    fractured graph satisfies the predicate (which must be isomorphism
    invariant). When ``fracture_iter`` is given it must cover every fracture
    satisfying the predicate; this allows large graphs whose full fracture
    lattice is out of reach but whose predicate support is known.
    """
    if any(d == 0 for d in q.degrees):
        raise ValueError("coefficients are defined for graphs without isolated vertices")
    source = enumerate_fractures(q) if fracture_iter is None else fracture_iter
    coefficients: CoefficientVector = {}
    for sigma in source:
        if not target_predicate(apply_fracture(q, sigma).graph):
            continue
        for rho, mu in coarsenings_with_mobius(sigma):
            coefficients[rho] = coefficients.get(rho, 0) + mu
    return {rho: a for rho, a in coefficients.items() if a != 0}


def colorful_count_via_homs(
    q: Graph,
    coefficients: CoefficientVector,
    host: ColoredGraph,
) -> CountResult:
    """Evaluate the linear combination sum a(rho) * #Homs(fractured rho -> host)."""
    total = 0
    for rho, a in coefficients.items():
        fractured = apply_fracture(q, rho)
        total += a * count_homs(
            fractured.graph, host.graph, fractured.coloring, host.coloring
        ).exact
    return CountResult(total)


def embedding_expansion_count(q: Graph, tau: Fracture, host: ColoredGraph) -> CountResult:
    """#Embs of the fractured graph of tau into the host via Mobius inversion:
    sum over rho >= tau of mobius(tau, rho) * #Homs(fractured rho -> host)."""
    total = 0
    for rho, mu in coarsenings_with_mobius(tau):
        fractured = apply_fracture(q, rho)
        total += mu * count_homs(
            fractured.graph, host.graph, fractured.coloring, host.coloring
        ).exact
    return CountResult(total)


# ---------------------------------------------------------------------------
# Odd fractures of subdivided 4-regular graphs


def _is_two_singletons(part: Partition) -> bool:
    return len(part) == 2 and all(len(b) == 1 for b in part)


def _is_two_pairs(part: Partition) -> bool:
    return len(part) == 2 and all(len(b) == 2 for b in part)


def is_odd_fracture(tau: Fracture, subdivision_vertices: Iterable[int]) -> bool:
    """Odd fractures split every subdivision vertex into singletons and every
    original vertex into two blocks of size two."""
    subdivision = set(subdivision_vertices)
    for v in range(tau.base.vertex_count):
        part = tau.parts[v]
        if v in subdivision:
            if not _is_two_singletons(part):
                return False
        else:
            if not _is_two_pairs(part):
                return False
    return True


def count_odd_fractures(h: Graph) -> int:
    """Number of odd fractures of the subdivision of a 4-regular graph h.

    Computed by counting the admissible partitions vertex by vertex and
    multiplying (the per-vertex choices are independent).
    """
    if not h.is_regular(4):
        raise ValueError("odd-fracture counting requires a 4-regular graph")

    h2, sub_map = subdivide(h)
    subdivision = set(sub_map.values())
    total = 1
    for v in range(h2.vertex_count):
        options = set_partitions(h2.incident_edge_ids[v])
        if v in subdivision:
            total *= sum(1 for p in options if _is_two_singletons(p))
        else:
            total *= sum(1 for p in options if _is_two_pairs(p))
    return total


def iter_odd_fractures(h: Graph) -> Iterator[Fracture]:
    """Yield every odd fracture of the subdivision of a 4-regular graph."""
    if not h.is_regular(4):
        raise ValueError("odd fractures require a 4-regular graph")

    h2, sub_map = subdivide(h)
    subdivision = set(sub_map.values())
    per_vertex = []
    for v in range(h2.vertex_count):
        options = set_partitions(h2.incident_edge_ids[v])
        if v in subdivision:
            per_vertex.append([p for p in options if _is_two_singletons(p)])
        else:
            per_vertex.append([p for p in options if _is_two_pairs(p)])
    for parts in product(*per_vertex):
        yield Fracture(h2, parts)


def iter_p2_fractures_low_blocks(h: Graph) -> Iterator[Fracture]:
    """Among fractures of the subdivision of 4-regular h with at most two blocks
    per vertex, yield exactly those whose fractured graph is a disjoint union
    of two-edge paths.

    Exhaustive over the full option space with component-based early pruning:
    a block of size three or more forces a fractured vertex of degree three or
    more, and a partial component that already has three edges can never
    shrink, so both are cut as soon as they appear.
    """
    if not h.is_regular(4):
        raise ValueError("requires a 4-regular graph")
    h2, sub_map = subdivide(h)
    n = h2.vertex_count
    originals = list(range(h.vertex_count))
    subdivisions = sorted(sub_map.values())

    per_vertex: list[list[Partition]] = [
        set_partitions(h2.incident_edge_ids[v], max_blocks=2) for v in range(n)
    ]
    # block position of each incident edge, per option, for O(1) lookups
    option_block_pos: list[list[dict[int, int]]] = [
        [{e: i for i, block in enumerate(opt) for e in block} for opt in per_vertex[v]]
        for v in range(n)
    ]

    from .counting import _UnionFind

    # fractured vertices: at most two blocks anywhere, so (v, block) -> 2v + pos
    uf = _UnionFind(2 * n)
    chosen_pos: list[dict[int, int] | None] = [None] * n
    parts: list[Partition | None] = [None] * n
    one_edge_components = 0

    # originals first; every h2 edge joins an original to a subdivision vertex,
    # so edges enter the union-find exactly when their subdivision end is set
    order = originals + subdivisions
    original_set = set(originals)

    def dfs(pos: int) -> Iterator[Fracture]:
        nonlocal one_edge_components
        v = order[pos] if pos < n else -1
        if pos == n:
            if one_edge_components == 0:
                yield Fracture(h2, tuple(parts))  # type: ignore[arg-type]
            return
        for opt_index, option in enumerate(per_vertex[v]):
            if any(len(block) > 2 for block in option):
                continue  # degree >= 3 in the fractured graph
            parts[v] = option
            chosen_pos[v] = option_block_pos[v][opt_index]
            if v in original_set:
                yield from dfs(pos + 1)
            else:
                mark = uf.checkpoint()
                saved_one = one_edge_components
                ok = True
                for e in h2.incident_edge_ids[v]:
                    a, b = h2.edges[e]
                    other = b if a == v else a
                    node_v = 2 * v + chosen_pos[v][e]
                    node_o = 2 * other + chosen_pos[other][e]
                    ru, rv = uf.find(node_v), uf.find(node_o)
                    before = (
                        (uf.edge_count[ru] == 1) + (uf.edge_count[rv] == 1)
                        if ru != rv
                        else (uf.edge_count[ru] == 1)
                    )
                    cycle, root = uf.add_edge(node_v, node_o)
                    if cycle or uf.edge_count[root] > 2:
                        ok = False
                        break
                    one_edge_components += (uf.edge_count[root] == 1) - before
                if ok:
                    yield from dfs(pos + 1)
                uf.rollback(mark)
                one_edge_components = saved_one
            parts[v] = None
            chosen_pos[v] = None

    yield from dfs(0)


def sample_p2_fracture_equivalence(h: Graph, trials: int, seed: int) -> tuple[int, int]:
    """Sample fractures with at most two blocks per vertex uniformly and check
    that 'fractures into a union of two-edge paths' and 'odd' agree.

    Returns (samples checked, disagreements); vectorized so a million samples
    stay cheap. The uniform space has 8 options per original vertex and 2 per
    subdivision vertex.
    """
    import numpy as np

    if not h.is_regular(4):
        raise ValueError("requires a 4-regular graph")

    h2, sub_map = subdivide(h)
    subdivision = sorted(sub_map.values())
    originals = [v for v in range(h2.vertex_count) if v not in set(subdivision)]

    orig_options = [set_partitions(h2.incident_edge_ids[v], max_blocks=2) for v in originals]
    sub_options = [set_partitions(h2.incident_edge_ids[v], max_blocks=2) for v in subdivision]
    assert all(len(o) == 8 for o in orig_options) and all(len(o) == 2 for o in sub_options)

    good_pairing = [
        np.array([_is_two_pairs(p) for p in opts], dtype=bool) for opts in orig_options
    ]
    split_sub = [
        np.array([_is_two_singletons(p) for p in opts], dtype=bool) for opts in sub_options
    ]

    rng = np.random.default_rng(seed)
    orig_draw = rng.integers(0, 8, size=(trials, len(originals)))
    sub_draw = rng.integers(0, 2, size=(trials, len(subdivision)))

    all_pairs = np.ones(trials, dtype=bool)
    for j in range(len(originals)):
        all_pairs &= good_pairing[j][orig_draw[:, j]]
    all_split = np.ones(trials, dtype=bool)
    for j in range(len(subdivision)):
        all_split &= split_sub[j][sub_draw[:, j]]
    is_odd = all_pairs & all_split

    # fast disposition: any non-pair option at an original vertex contains a
    # block of size >= 3, so the fractured graph has a vertex of degree >= 3
    # and is certainly not a union of 2-edge paths; those samples agree with
    # is_odd = False automatically. Only all-pairs samples need a full check.
    disagreements = 0
    candidates = np.nonzero(all_pairs)[0]
    for idx in candidates:
        parts: list[Partition] = [None] * h2.vertex_count  # type: ignore[list-item]
        for j, v in enumerate(originals):
            parts[v] = orig_options[j][orig_draw[idx, j]]
        for j, v in enumerate(subdivision):
            parts[v] = sub_options[j][sub_draw[idx, j]]
        tau = Fracture(h2, tuple(parts))
        fractured = apply_fracture(h2, tau).graph
        is_paths = is_p2_packing(fractured)
        if is_paths != bool(is_odd[idx]):
            disagreements += 1
    return trials, disagreements
