"""Structural invariants of trees: 2-paths, rays, forks, stars, caterpillar
gadgets, and the matching-split number.

A 2-path runs between vertices of degree != 2 through degree-2 interiors; a
ray is a 2-path from a vertex of degree > 2 (a source) down to a leaf. Forks,
stars, and caterpillar-shaped path gadgets are the three ways a tree can be
far from a matching, and the searches here find them constructively.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .graphs import Graph


def _require_tree(t: Graph) -> None:
    if not t.is_tree:
        raise ValueError("input graph is not a tree (connected and acyclic)")


def two_paths(t: Graph) -> list[tuple[int, ...]]:
    """All maximal degree-2 chains: paths x0..xa with deg(x0), deg(xa) != 2 and
    inner degrees 2. Each path is listed once, with the lexicographically
    smaller orientation first; sorted."""
    _require_tree(t)
    found = set()
    for start in range(t.vertex_count):
        if t.degree(start) == 2:
            continue
        for nxt in t.neighbors[start]:
            path = [start, nxt]
            while t.degree(path[-1]) == 2:
                prev, cur = path[-2], path[-1]
                (step,) = [w for w in t.neighbors[cur] if w != prev]
                path.append(step)
            tup = tuple(path)
            found.add(min(tup, tup[::-1]))
    return sorted(found)


@dataclass(frozen=True)
class RayReport:
    """Complete 2-path and ray structure of a tree."""

    tree: Graph
    two_paths: tuple[tuple[int, ...], ...]
    sources: tuple[int, ...]  # vertices of degree > 2
    rays: dict[int, tuple[tuple[int, ...], ...]]  # source -> rays, source first

    @cached_property
    def ray_counts(self) -> dict[tuple[int, int], int]:
        """(source, length) -> number of rays of that length at that source."""
        counts: dict[tuple[int, int], int] = {}
        for s, rays in self.rays.items():
            for r in rays:
                key = (s, len(r) - 1)
                counts[key] = counts.get(key, 0) + 1
        return counts

    def leaf_degree(self, s: int) -> int:
        return len(self.rays.get(s, ()))

    def nonleaf_degree(self, s: int) -> int:
        return self.tree.degree(s) - self.leaf_degree(s)

    def rays_of_length(self, s: int, length: int) -> int:
        return self.ray_counts.get((s, length), 0)


def ray_report(t: Graph) -> RayReport:
    """Enumerate the 2-paths and rays of a tree."""
    paths = two_paths(t)
    sources = tuple(v for v in range(t.vertex_count) if t.degree(v) > 2)
    rays: dict[int, list[tuple[int, ...]]] = {s: [] for s in sources}
    for path in paths:
        for oriented in (path, path[::-1]):
            if t.degree(oriented[0]) > 2 and t.degree(oriented[-1]) == 1:
                rays[oriented[0]].append(oriented)
    return RayReport(
        tree=t,
        two_paths=tuple(paths),
        sources=sources,
        rays={s: tuple(sorted(r)) for s, r in rays.items()},
    )


def _fork_vertices(report: RayReport, a: int, b: int) -> list[int]:
    forks = []
    for s in report.sources:
        if report.nonleaf_degree(s) != 1:
            continue
        if a != b:
            if report.rays_of_length(s, a) > 0 and report.rays_of_length(s, b) > 0:
                forks.append(s)
        else:
            if report.rays_of_length(s, a) > 1:
                forks.append(s)
    return forks


def _max_independent_subset(t: Graph, allowed: set[int]) -> tuple[int, tuple[int, ...]]:
    """Maximum independent set of ``allowed`` vertices in a tree, by rooted DP.

    Returns (size, witness). dp[v][taken] = (best size, chosen set) over the
    subtree at v, where taken says whether v itself is in the set.
    """
    if t.vertex_count == 0:
        return 0, ()
    best_total = 0
    witness: list[int] = []
    seen = [False] * t.vertex_count
    for root in range(t.vertex_count):
        if seen[root]:
            continue
        order = []
        parent = {root: -1}
        stack = [root]
        seen[root] = True
        while stack:
            v = stack.pop()
            order.append(v)
            for w in t.neighbors[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    stack.append(w)
        size_no: dict[int, int] = {}
        size_yes: dict[int, int] = {}
        pick_no: dict[int, list[int]] = {}
        pick_yes: dict[int, list[int]] = {}
        for v in reversed(order):
            children = [w for w in t.neighbors[v] if parent.get(w) == v]
            no_size, no_pick = 0, []
            for c in children:
                if size_yes[c] > size_no[c]:
                    no_size += size_yes[c]
                    no_pick += pick_yes[c]
                else:
                    no_size += size_no[c]
                    no_pick += pick_no[c]
            size_no[v], pick_no[v] = no_size, no_pick
            if v in allowed:
                yes_size, yes_pick = 1, [v]
                for c in children:
                    yes_size += size_no[c]
                    yes_pick += pick_no[c]
                size_yes[v], pick_yes[v] = yes_size, yes_pick
            else:
                size_yes[v], pick_yes[v] = -1, []
        if size_yes[root] > size_no[root]:
            best_total += size_yes[root]
            witness += pick_yes[root]
        else:
            best_total += size_no[root]
            witness += pick_no[root]
    return best_total, tuple(sorted(witness))


def fork_number(t: Graph, a: int, b: int) -> int:
    """Maximum independent set of a-b-forks: sources with exactly one non-leaf
    branch carrying rays of lengths a and b (two rays of length a when a = b)."""
    if not (1 <= a <= b):
        raise ValueError("fork lengths must satisfy 1 <= a <= b")
    report = ray_report(t)
    forks = _fork_vertices(report, a, b)
    size, _ = _max_independent_subset(t, set(forks))
    return size


def fork_witness(t: Graph, a: int, b: int) -> tuple[int, ...]:
    """A maximum independent set of a-b-forks."""
    report = ray_report(t)
    forks = _fork_vertices(report, a, b)
    _, witness = _max_independent_subset(t, set(forks))
    return witness


def star_number(t: Graph, c: int) -> int:
    """Largest number of length-c rays out of one source; values below 2 count
    as no star at all and report 0."""
    if c < 3:
        raise ValueError("star length must be at least 3")
    report = ray_report(t)
    best = max((report.rays_of_length(s, c) for s in report.sources), default=0)
    return best if best > 1 else 0


def _ray_through(t: Graph, center: int, first: int) -> tuple[int, ...] | None:
    """The 2-path leaving ``center`` through ``first``; a ray iff it ends at a leaf."""
    path = [center, first]
    while t.degree(path[-1]) == 2:
        prev, cur = path[-2], path[-1]
        (step,) = [w for w in t.neighbors[cur] if w != prev]
        path.append(step)
    return tuple(path) if t.degree(path[-1]) == 1 else None


def _tree_path(t: Graph, u: int, v: int) -> list[int]:
    parent = {u: -1}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for w in t.neighbors[x]:
            if w not in parent:
                parent[w] = x
                stack.append(w)
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return path[::-1]


def _path_is_c_gadget(t: Graph, path: list[int], d: int) -> bool:
    """Inner vertices must have degree 2 or hang only rays of length <= d."""
    on_path = set(path)
    for i in range(1, len(path) - 1):
        x = path[i]
        if t.degree(x) == 2:
            continue
        for w in t.neighbors[x]:
            if w in (path[i - 1], path[i + 1]):
                continue
            ray = _ray_through(t, x, w)
            if ray is None or len(ray) - 1 > d:
                return False
    return True


def c_number(t: Graph, d: int) -> int:
    """Length of the longest path whose inner vertices are degree 2 or sources
    whose off-path branches are all rays of length at most d."""
    if d <= 0:
        raise ValueError("order d must be positive")
    _require_tree(t)
    best = 0
    for u, v in combinations(range(t.vertex_count), 2):
        path = _tree_path(t, u, v)
        if len(path) - 1 <= best:
            continue
        if _path_is_c_gadget(t, path, d):
            best = len(path) - 1
    return best


def matching_split_number(g: Graph) -> tuple[int, tuple[int, ...]]:
    """Minimum vertex set whose removal leaves maximum degree <= 1, plus a witness.

    Iterative deepening: any vertex with two remaining neighbours forces one of
    three vertices into the splitting set, giving a 3-way branch per level.
    """
    def violating_path(removed: set[int]) -> tuple[int, int, int] | None:
        for v in range(g.vertex_count):
            if v in removed:
                continue
            live = [w for w in g.neighbors[v] if w not in removed]
            if len(live) >= 2:
                return live[0], v, live[1]
        return None

    def search(removed: set[int], budget: int) -> tuple[int, ...] | None:
        triple = violating_path(removed)
        if triple is None:
            return tuple(sorted(removed))
        if budget == 0:
            return None
        for v in triple:
            removed.add(v)
            result = search(removed, budget - 1)
            removed.discard(v)
            if result is not None:
                return result
        return None

    for k in range(g.vertex_count + 1):
        witness = search(set(), k)
        if witness is not None:
            return len(witness), witness
    raise AssertionError("unreachable: removing all vertices always splits")


@dataclass(frozen=True)
class CGadget:
    """A caterpillar-shaped path gadget inside a tree.

    ``path`` is the full vertex path; ``junction_indices`` point into it.
    Strong gadgets space their junctions more than 2*order apart, each junction
    carrying a designated ray of length exactly ``order`` that avoids its path
    neighbours; closed gadgets have non-fork extreme junctions.
    """

    tree: Graph
    order: int
    path: tuple[int, ...]
    junction_indices: tuple[int, ...]
    junction_rays: dict[int, tuple[int, ...]]  # path index -> designated ray
    strong: bool
    closed: bool

    @property
    def length(self) -> int:
        return len(self.path) - 1

    @property
    def junctions(self) -> tuple[int, ...]:
        return tuple(self.path[i] for i in self.junction_indices)


def validate_c_gadget(gadget: CGadget) -> None:
    """Re-check every stated invariant of the gadget; raises on violation."""
    t = gadget.tree
    path = list(gadget.path)
    d = gadget.order
    if not _path_is_c_gadget(t, path, d):
        raise ValueError("path is not a caterpillar gadget of the stated order")
    idx = gadget.junction_indices
    if gadget.strong:
        bounds = (0,) + idx + (len(path) - 1,)
        for i, j in zip(bounds, bounds[1:]):
            if j - i <= 2 * d:
                raise ValueError("junction spacing violates the strong condition")
        for i in idx:
            ray = gadget.junction_rays[i]
            if len(ray) - 1 != d:
                raise ValueError("designated ray has the wrong length")
            if ray[0] != path[i]:
                raise ValueError("designated ray does not start at its junction")
            if path[i - 1] in ray or path[i + 1] in ray:
                raise ValueError("designated ray runs along the path")
            if _ray_through(t, ray[0], ray[1]) != ray:
                raise ValueError("designated ray is not a ray of the tree")
    if gadget.closed:
        report = ray_report(t)
        lengths = sorted({length for (s, length) in report.ray_counts})
        for i in (idx[0], idx[-1]):
            v = path[i]
            for a in lengths:
                for b in lengths:
                    if a <= b and v in _fork_vertices(report, a, b):
                        raise ValueError("extreme junction is a fork")


def _junction_scan(t: Graph, path: list[int], d: int) -> list[int]:
    """Iterative minimum-index selection of junction candidates along a path.

    Starting from index 0, repeatedly pick the least index more than 2d past
    the previous pick whose vertex sources a length-d ray avoiding its path
    neighbours; stop when none exists.
    """
    picks = []
    last = 0
    while True:
        found = None
        for i in range(last + 2 * d + 1, len(path) - 1):
            x = path[i]
            if t.degree(x) <= 2:
                continue
            for w in t.neighbors[x]:
                if w in (path[i - 1], path[i + 1]):
                    continue
                ray = _ray_through(t, x, w)
                if ray is not None and len(ray) - 1 == d:
                    found = i
                    break
            if found is not None:
                break
        if found is None:
            return picks
        picks.append(found)
        last = found


def _designated_ray(t: Graph, path: list[int], i: int, d: int) -> tuple[int, ...]:
    x = path[i]
    for w in sorted(t.neighbors[x]):
        if w in (path[i - 1], path[i + 1]):
            continue
        ray = _ray_through(t, x, w)
        if ray is not None and len(ray) - 1 == d:
            return ray
    raise AssertionError("junction scan guaranteed a ray")


def _longest_c_gadget_path(t: Graph, d: int) -> list[int] | None:
    best: list[int] | None = None
    for u, v in combinations(range(t.vertex_count), 2):
        path = _tree_path(t, u, v)
        if best is not None and len(path) <= len(best):
            continue
        if _path_is_c_gadget(t, path, d):
            best = path
    return best


def find_closed_strong_c_gadget(t: Graph, d: int, k: int) -> CGadget | None:
    """Search for a closed strong gadget of some order d' <= d with >= k junctions.

    Mirrors the descent proof: scan the longest order-d' gadget path with the
    minimum-index procedure; with enough picks, dropping the first and last
    pick closes the gadget, otherwise a pick-free stretch is itself a gadget
    of order d' - 1 and the search descends.
    """
    _require_tree(t)
    if k < 1 or d < 1:
        raise ValueError("need k >= 1 and d >= 1")

    def attempt(path: list[int], order: int) -> CGadget | None:
        if order < 1:
            return None
        picks = _junction_scan(t, path, order)
        if len(picks) >= k + 2:
            kept = picks[1:-1]
            sub_path = path[: picks[-1] + 1]
            rays = {i: _designated_ray(t, sub_path, i, order) for i in kept}
            gadget = CGadget(
                tree=t,
                order=order,
                path=tuple(sub_path),
                junction_indices=tuple(kept),
                junction_rays=rays,
                strong=True,
                closed=True,
            )
            validate_c_gadget(gadget)
            return gadget
        # find the widest pick-free stretch and descend one order
        bounds = [0] + picks + [len(path) - 1]
        widest = max(range(len(bounds) - 1), key=lambda j: bounds[j + 1] - bounds[j])
        lo = bounds[widest] + 2 * order + 1
        hi = bounds[widest + 1] - 1
        if hi - lo < 1:
            return None
        return attempt(path[lo : hi + 1], order - 1)

    for order in range(d, 0, -1):
        path = _longest_c_gadget_path(t, order)
        if path is None:
            continue
        gadget = attempt(path, order)
        if gadget is not None:
            return gadget
    return None


@dataclass(frozen=True)
class TreeProfile:
    """Invariant table for one tree."""

    fork_numbers: dict[tuple[int, int], int]
    star_numbers: dict[int, int]
    c_numbers: dict[int, int]
    matching_split: int
    splitting_set: tuple[int, ...]

    def to_obj(self) -> dict:
        return {
            "fork_numbers": {f"{a},{b}": v for (a, b), v in sorted(self.fork_numbers.items())},
            "star_numbers": {str(c): v for c, v in sorted(self.star_numbers.items())},
            "c_numbers": {str(d): v for d, v in sorted(self.c_numbers.items())},
            "matching_split_number": self.matching_split,
            "splitting_set": list(self.splitting_set),
        }


def classify_tree(t: Graph, d_max: int = 4, a_max: int = 3) -> TreeProfile:
    """Tabulate fork, star, and caterpillar numbers plus the matching-split number."""
    _require_tree(t)
    forks = {
        (a, b): fork_number(t, a, b) for a in range(1, a_max + 1) for b in range(a, a_max + 1)
    }
    stars = {c: star_number(t, c) for c in range(3, d_max + 1)} if d_max >= 3 else {}
    cnums = {d: c_number(t, d) for d in range(1, d_max + 1)}
    msn, witness = matching_split_number(t)
    return TreeProfile(forks, stars, cnums, msn, witness)
