"""Breadth-first materialization of balls, spheres and geodesic axes.

The explorer produces exact word-metric distances for every element within a
truncation radius, plus the adjacency of the induced subgraph. Distances are
always computed by search, never by family-specific formulas; closed forms
are reserved for cross-checks in the test suite.

Vertices are numbered in discovery order, which is also distance order, so a
layer is a contiguous id range and the whole table is deterministic: two runs
over the same oracle and radius produce identical tables.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, InvalidParameter, NoAxis, NotGeodesic
from .groups import Element, GroupOracle

DEFAULT_NODE_BUDGET = 5_000_000


class BallTable:
    """All elements within a truncation radius, with distances and adjacency.

    Layers are contiguous id ranges; adjacency is stored in compressed sparse
    rows and covers exactly the edges of the induced subgraph on the ball.
    Instances are immutable after construction and safe to share.
    """

    def __init__(self, oracle, radius, reached, complete_group,
                 elements, dist, layer_start, adj_indptr, adj, id_map, packer):
        self.oracle = oracle
        self.radius = radius
        self.reached = reached
        self.complete_group = complete_group
        self.elements = elements
        self.dist = dist
        self._layer_start = layer_start
        self._adj_indptr = adj_indptr
        self._adj = adj
        self._id_map = id_map
        self._packer = packer
        self._key_index = None

    def __len__(self):
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def sphere_size(self, r: int) -> int:
        if r < 0 or r > self.reached:
            return 0
        return self._layer_start[r + 1] - self._layer_start[r]

    def ball_size(self, r: int) -> int:
        r = min(r, self.reached)
        if r < 0:
            return 0
        return self._layer_start[r + 1]

    def layer_ids(self, r: int) -> range:
        if r < 0 or r > self.reached:
            return range(0)
        return range(self._layer_start[r], self._layer_start[r + 1])

    def layer_bound(self, r: int) -> int:
        """First id strictly beyond distance r (== ball size of radius r)."""
        return self.ball_size(r)

    def distance(self, vid: int) -> int:
        return self.dist[vid]

    def element(self, vid: int) -> Element:
        return self.elements[vid]

    def neighbors(self, vid: int):
        return self._adj[self._adj_indptr[vid]:self._adj_indptr[vid + 1]]

    def degree(self, vid: int) -> int:
        return self._adj_indptr[vid + 1] - self._adj_indptr[vid]

    def id_of(self, g: Element) -> Optional[int]:
        if self._packer is None:
            return self._id_map.get(g)
        vid = self._id_map.get(self._packer(g))
        # packed encodings are only injective inside the explored window
        if vid is not None and self.elements[vid] == g:
            return vid
        return None

    def key_of(self, vid: int) -> str:
        return self.oracle.key_str(self.elements[vid])

    def id_of_key(self, key) -> Optional[int]:
        """Resolve a canonical key string; builds a full key index on first use."""
        if isinstance(key, bytes):
            key = key.decode("ascii")
        if self._key_index is None:
            key_str = self.oracle.key_str
            self._key_index = {key_str(g): i for i, g in enumerate(self.elements)}
        return self._key_index.get(key)

    def entries(self):
        """Iterate (canonical key, element, distance) in discovery order."""
        key_str = self.oracle.key_str
        for vid, g in enumerate(self.elements):
            yield key_str(g), g, self.dist[vid]

    def bfs_from(self, sources: Iterable[int], max_depth: Optional[int] = None,
                 allowed=None) -> dict:
        """Distances from a source set over the truncated graph.

        ``allowed`` restricts the search to a vertex id set (sources included);
        ``max_depth`` cuts the search off. Returns {id: distance}.
        """
        seen = {}
        frontier = []
        for s in sources:
            if s not in seen and (allowed is None or s in allowed):
                seen[s] = 0
                frontier.append(s)
        depth = 0
        indptr = self._adj_indptr
        adj = self._adj
        while frontier and (max_depth is None or depth < max_depth):
            depth += 1
            nxt = []
            for u in frontier:
                for v in adj[indptr[u]:indptr[u + 1]]:
                    if v not in seen and (allowed is None or v in allowed):
                        seen[v] = depth
                        nxt.append(v)
            frontier = nxt
        return seen

    def distance_between(self, u: int, v: int, max_depth: Optional[int] = None) -> Optional[int]:
        """Graph distance within the truncation (None if not reached)."""
        if u == v:
            return 0
        seen = {u}
        frontier = [u]
        depth = 0
        indptr = self._adj_indptr
        adj = self._adj
        while frontier and (max_depth is None or depth < max_depth):
            depth += 1
            nxt = []
            for x in frontier:
                for y in adj[indptr[x]:indptr[x + 1]]:
                    if y == v:
                        return depth
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return None

    def set_diameter(self, ids: Sequence[int]) -> int:
        """Max pairwise distance within the truncated graph.

        Exact in the word metric whenever the true diameter is at most the
        truncation radius minus the set's max distance from the identity.
        """
        best = 0
        ids = list(ids)
        for s in ids:
            dmap = self.bfs_from([s])
            for t in ids:
                d = dmap.get(t)
                if d is None:
                    raise InvalidParameter("set not connected within truncation")
                if d > best:
                    best = d
        return best

    def dump_csv(self, path) -> None:
        """Debug dump: one row per vertex (key, distance, neighbor count)."""
        with open(path, "w", encoding="ascii") as fh:
            fh.write("key,distance,neighbors\n")
            for vid, g in enumerate(self.elements):
                fh.write(f"{self.oracle.key_str(g)},{self.dist[vid]},{self.degree(vid)}\n")


def explore(oracle: GroupOracle, radius: int, budget: Optional[int] = None) -> BallTable:
    """Materialize the ball of the given radius around the identity.

    Raises BudgetExceeded if the ball would hold more than ``budget`` vertices
    (default 5e6); the error reports the last fully explored radius. A finite
    group that is exhausted early yields a table flagged ``complete_group``.
    """
    if not isinstance(radius, int) or radius < 0:
        raise InvalidParameter(f"radius must be a nonnegative integer, got {radius!r}")
    if budget is None:
        budget = DEFAULT_NODE_BUDGET
    if budget < 1:
        raise InvalidParameter("budget must be positive")

    packer = oracle.element_packer(radius)
    mult = oracle.multiply
    gens = oracle.generators
    ident = oracle.identity()

    elements = [ident]
    dist = array("i", [0])
    id_map = {(packer(ident) if packer else ident): 0}
    layer_start = [0, 1]
    adj_indptr = array("l", [0])
    adj = array("i")
    truncated = False

    frontier = [0]
    for r in range(radius + 1):
        if not frontier:
            break
        last_layer = r == radius
        nxt = []
        for u in frontier:
            gu = elements[u]
            for s in gens:
                h = mult(gu, s)
                hk = packer(h) if packer else h
                hid = id_map.get(hk)
                if hid is None:
                    if last_layer:
                        truncated = True  # distance r+1, outside the ball
                        continue
                    hid = len(elements)
                    if hid >= budget:
                        raise BudgetExceeded(budget, hid, r, radius)
                    id_map[hk] = hid
                    elements.append(h)
                    dist.append(r + 1)
                    nxt.append(hid)
                adj.append(hid)
            adj_indptr.append(len(adj))
        if not last_layer:
            layer_start.append(len(elements))
        frontier = nxt

    # a finite group exhausted early leaves one empty trailing layer
    while len(layer_start) >= 2 and layer_start[-1] == layer_start[-2]:
        layer_start.pop()
    reached = len(layer_start) - 2
    return BallTable(oracle, radius, reached, not truncated,
                     elements, dist, layer_start, adj_indptr, adj, id_map, packer)


def sphere_sizes(table: BallTable) -> list[tuple[int, int]]:
    """Sphere size for every radius 0..R; zero once a finite group is exhausted."""
    return [(r, table.sphere_size(r)) for r in range(table.radius + 1)]


@dataclass
class SphereSizeSeries:
    """Layer counts from a lean exploration that keeps no geometry.

    ``sizes[r]`` is |S(r)| for every populated layer; a finite group exhausted
    before the requested radius simply stops the list, and ``sphere`` reports
    zero beyond it (the requested radius may be astronomically large).
    """

    radius: int
    sizes: list[int]
    complete_group: bool
    nodes: int

    def sphere(self, r: int) -> int:
        return self.sizes[r] if 0 <= r < len(self.sizes) else 0

    def ball(self, r: int) -> int:
        return sum(self.sizes[: r + 1])

    def pairs(self) -> list[tuple[int, int]]:
        return list(enumerate(self.sizes))


def sphere_size_series(oracle: GroupOracle, radius: int,
                       budget: Optional[int] = None) -> SphereSizeSeries:
    """Sphere sizes up to ``radius`` without building a table.

    Keeps only a visited set (packed to integers when the family supports it),
    so it scales to balls far beyond what a full table can hold.
    """
    if not isinstance(radius, int) or radius < 0:
        raise InvalidParameter(f"radius must be a nonnegative integer, got {radius!r}")
    if budget is None:
        budget = DEFAULT_NODE_BUDGET

    lattice = oracle.lattice_steps(radius)
    if lattice is not None:
        return _lattice_series(oracle, radius, budget, *lattice)

    packer = oracle.element_packer(radius)
    mult = oracle.multiply
    gens = oracle.generators
    ident = oracle.identity()

    visited = {packer(ident) if packer else ident}
    frontier = [ident]
    sizes = [1]
    nodes = 1
    complete = False
    for r in range(1, radius + 1):
        nxt = []
        for gu in frontier:
            for s in gens:
                h = mult(gu, s)
                hk = packer(h) if packer else h
                if hk not in visited:
                    visited.add(hk)
                    nodes += 1
                    if nodes > budget:
                        raise BudgetExceeded(budget, nodes, r - 1, radius)
                    nxt.append(h)
        if not nxt:
            complete = True
            break
        sizes.append(len(nxt))
        frontier = nxt
    return SphereSizeSeries(radius, sizes, complete, nodes)


def _lattice_series(oracle, radius, budget, ident, deltas):
    """Pure-integer frontier walk for translation lattices (no oracle calls)."""
    visited = {ident}
    frontier = [ident]
    sizes = [1]
    nodes = 1
    for r in range(1, radius + 1):
        nxt = []
        for u in frontier:
            for d in deltas:
                v = u + d
                if v not in visited:
                    visited.add(v)
                    nodes += 1
                    if nodes > budget:
                        raise BudgetExceeded(budget, nodes, r - 1, radius)
                    nxt.append(v)
        if not nxt:
            break
        sizes.append(len(nxt))
        frontier = nxt
    complete = len(sizes) < radius + 1
    return SphereSizeSeries(radius, sizes, complete, nodes)


@dataclass
class GeodesicAxis:
    """Vertices of a verified bi-infinite geodesic through the identity.

    ``vertex(i)`` is the length-|i| prefix of the axis word repeated forever
    (its inverse word for negative i), and every vertex is checked to sit at
    word-metric distance exactly |i| from the identity.
    """

    base_word: tuple
    extent: int
    _vertices: tuple = field(repr=False)
    _ids: tuple = field(repr=False)

    def vertex(self, i: int) -> Element:
        return self._vertices[i + self.extent]

    def table_id(self, i: int) -> int:
        return self._ids[i + self.extent]

    def indices(self) -> range:
        return range(-self.extent, self.extent + 1)


def build_axis(oracle: GroupOracle, table: BallTable, extent: int) -> GeodesicAxis:
    """Build and verify the designated geodesic axis out to ``extent``.

    Raises NoAxis when the family has no designated axis (finite groups,
    products) and NotGeodesic if any prefix lands off its expected sphere,
    which would invalidate every consumer of the axis.
    """
    word = oracle.axis_word
    if word is None:
        raise NoAxis(f"{oracle.label()} has no designated geodesic axis")
    if extent < 0 or extent > table.reached:
        raise InvalidParameter(f"axis extent {extent} outside explored radius {table.reached}")

    inv_word = tuple(oracle.invert(s) for s in reversed(word))
    n = len(word)
    vertices = [None] * (2 * extent + 1)
    vertices[extent] = oracle.identity()
    g = oracle.identity()
    for i in range(1, extent + 1):
        g = oracle.multiply(g, word[(i - 1) % n])
        vertices[extent + i] = g
    g = oracle.identity()
    for i in range(1, extent + 1):
        g = oracle.multiply(g, inv_word[(i - 1) % n])
        vertices[extent - i] = g

    ids = []
    for idx, v in enumerate(vertices):
        expected = abs(idx - extent)
        vid = table.id_of(v)
        if vid is None or table.dist[vid] != expected:
            raise NotGeodesic(
                f"axis vertex at index {idx - extent} is not at distance {expected}"
            )
        ids.append(vid)
    return GeodesicAxis(tuple(word), extent, tuple(vertices), tuple(ids))
