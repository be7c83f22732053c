"""Labeled multigraphs, minors, structural statistics and vertex width.

A graph is a finite multigraph with 1-based vertex indices and a dense,
positional edge labeling: edge ``e`` is ``edges[e-1]`` and names Schwinger
variable ``a<e>``.  Minors relabel the surviving edges densely in their
original relative order, so variable naming stays deterministic through the
whole pipeline.  Contracting an edge set that contains a cycle yields the
designated empty graph.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import BudgetExceededError, InvalidArgumentError, SizeLimitError

PRIMITIVE_DIVERGENT_EDGE_CAP = 20


@dataclass(frozen=True)
class Graph:
    name: str
    vertex_count: int
    edges: tuple  # tuple[(u, v), ...] with 1 <= u, v <= vertex_count

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple((min(u, v), max(u, v)) for u, v in self.edges)
        )
        for u, v in self.edges:
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise InvalidArgumentError(
                    f"edge ({u},{v}) out of range for {self.vertex_count} vertices"
                )

    # -- basic statistics ------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_empty(self) -> bool:
        return self.vertex_count == 0

    def edge_labels(self):
        return range(1, len(self.edges) + 1)

    def endpoints(self, label: int):
        return self.edges[label - 1]

    def degrees(self):
        deg = [0] * (self.vertex_count + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg[1:]

    def components(self) -> int:
        if self.vertex_count == 0:
            return 0
        parent = list(range(self.vertex_count + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        n = self.vertex_count
        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                n -= 1
        return n

    def is_connected(self) -> bool:
        return self.vertex_count > 0 and self.components() == 1

    def loop_number(self) -> int:
        # Euler: h - h0 = e - v
        return len(self.edges) - self.vertex_count + self.components()

    def incident_edges(self, vertex: int):
        return [e for e in self.edge_labels() if vertex in self.endpoints(e)]

    # -- rendering and JSON ------------------------------------------------

    def render(self) -> str:
        parts = [f"v={self.vertex_count}"]
        parts.extend(
            f"e{i}={{{u},{v}}}" for i, (u, v) in enumerate(self.edges, start=1)
        )
        return "; ".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "vertices": self.vertex_count,
            "edges": [[u, v] for u, v in self.edges],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "Graph":
        return Graph(
            name=str(d.get("name", "graph")),
            vertex_count=int(d["vertices"]),
            edges=tuple((int(u), int(v)) for u, v in d["edges"]),
        )

    @staticmethod
    def load(path) -> "Graph":
        with open(path, "r", encoding="utf-8") as fh:
            return Graph.from_json_dict(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=1)
            fh.write("\n")


EMPTY_GRAPH = Graph(name="empty", vertex_count=0, edges=())


@dataclass(frozen=True)
class EdgeOrdering:
    perm: tuple  # permutation of 1..e_G

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise InvalidArgumentError(f"not a permutation of edge labels: {self.perm}")

    def __iter__(self):
        return iter(self.perm)

    def __len__(self):
        return len(self.perm)


# -- minors ---------------------------------------------------------------


def minor(g: Graph, delete=(), contract=()) -> Graph:
    """G \\ delete // contract with dense edge and vertex relabeling."""
    dset, cset = set(delete), set(contract)
    if dset & cset:
        raise InvalidArgumentError("delete and contract sets overlap")
    for e in dset | cset:
        if not 1 <= e <= g.edge_count:
            raise InvalidArgumentError(f"edge label {e} out of range")
    parent = list(range(g.vertex_count + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in cset:
        u, v = g.endpoints(e)
        ru, rv = find(u), find(v)
        if ru == rv:
            # contract set contains a cycle (h_C > 0) -> empty graph
            return EMPTY_GRAPH
        parent[ru] = rv
    reps = sorted({find(v) for v in range(1, g.vertex_count + 1)})
    vmap = {r: i + 1 for i, r in enumerate(reps)}
    new_edges = []
    for e in g.edge_labels():
        if e in dset or e in cset:
            continue
        u, v = g.endpoints(e)
        new_edges.append((vmap[find(u)], vmap[find(v)]))
    return Graph(name=f"{g.name}-minor", vertex_count=len(reps), edges=tuple(new_edges))


def delete_edges(g: Graph, labels) -> Graph:
    return minor(g, delete=labels)


def contract_edges(g: Graph, labels) -> Graph:
    return minor(g, contract=labels)


# -- graph surgery -------------------------------------------------------------


def one_vertex_join(g1: Graph, v1: int, g2: Graph, v2: int) -> Graph:
    """Glue g2 onto g1 by identifying v2 with v1; g1's edges keep their labels."""
    vmap = {}
    nxt = g1.vertex_count
    for w in range(1, g2.vertex_count + 1):
        if w == v2:
            vmap[w] = v1
        else:
            nxt += 1
            vmap[w] = nxt
    edges = g1.edges + tuple((vmap[u], vmap[w]) for u, w in g2.edges)
    return Graph(f"{g1.name}*{g2.name}", nxt, edges)


def two_vertex_join(g1: Graph, e1: int, g2: Graph, e2: int) -> Graph:
    """Identify the endpoints of g1's edge e1 with those of g2's edge e2 and
    delete both edges; g1's surviving edges come first in the labeling."""
    u1, w1 = g1.endpoints(e1)
    u2, w2 = g2.endpoints(e2)
    if u1 == w1 or u2 == w2:
        raise InvalidArgumentError("join edges must not be tadpoles")
    vmap = {}
    nxt = g1.vertex_count
    for w in range(1, g2.vertex_count + 1):
        if w == u2:
            vmap[w] = u1
        elif w == w2:
            vmap[w] = w1
        else:
            nxt += 1
            vmap[w] = nxt
    edges = tuple(uv for i, uv in enumerate(g1.edges, start=1) if i != e1) + tuple(
        (vmap[u], vmap[w]) for i, (u, w) in enumerate(g2.edges, start=1) if i != e2
    )
    return Graph(f"{g1.name}::{g2.name}", nxt, edges)


def subdivide_edge(g: Graph, e: int) -> Graph:
    """Replace edge e by two edges in series through a new vertex.

    The new edges take labels e_G+1 and e_G+2 (in that order: old-source to
    the new vertex, then new vertex to old-target); edge e is removed and the
    remaining labels shift down accordingly.
    """
    u, v = g.endpoints(e)
    nv = g.vertex_count + 1
    edges = [uv for i, uv in enumerate(g.edges, start=1) if i != e]
    edges.append((u, nv))
    edges.append((nv, v))
    return Graph(f"{g.name}-series{e}", nv, tuple(edges))


def double_edge(g: Graph, e: int) -> Graph:
    """Replace edge e by two parallel copies, labeled e_G+1 and e_G+2."""
    u, v = g.endpoints(e)
    edges = [uv for i, uv in enumerate(g.edges, start=1) if i != e]
    edges.append((u, v))
    edges.append((u, v))
    return Graph(f"{g.name}-parallel{e}", g.vertex_count, tuple(edges))


# -- structural statistics ---------------------------------------------------


def connectivity(g: Graph) -> int:
    """Minimal number of vertices whose removal disconnects g.

    For graphs without two independent vertices (complete-like), returns
    vertex_count - 1 by convention.
    """
    if not g.is_connected():
        return 0
    n = g.vertex_count
    if n <= 1:
        return n
    adj = {v: set() for v in range(1, n + 1)}
    for u, v in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    for k in range(0, n - 1):
        for cut in itertools.combinations(range(1, n + 1), k):
            remaining = [v for v in range(1, n + 1) if v not in cut]
            if len(remaining) <= 1:
                continue
            seen = {remaining[0]}
            stack = [remaining[0]]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in cut and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) < len(remaining):
                return k
    return n - 1


def _subgraph_divergence_failure(g: Graph):
    """First strict nonempty edge subset with e_gamma <= 2 h_gamma, else None.

    Plain subset enumeration; exponential but fine under the 20-edge cap.
    """
    e = g.edge_count
    endpoints = list(g.edges)
    for mask in range(1, (1 << e) - 1):
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        cnt = 0
        comps = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                u, v = endpoints[i]
                cnt += 1
                for w in (u, v):
                    if w not in parent:
                        parent[w] = w
                        comps += 1
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
                    comps -= 1
            m >>= 1
            i += 1
        h = cnt - len(parent) + comps
        if cnt <= 2 * h:
            return frozenset(
                lbl for lbl in range(1, e + 1) if mask >> (lbl - 1) & 1
            )
    return None


def is_primitive_divergent(g: Graph, edge_cap: int = PRIMITIVE_DIVERGENT_EDGE_CAP) -> bool:
    """e_G = 2 h_G and every strict subgraph satisfies e > 2h."""
    if g.edge_count > edge_cap:
        raise SizeLimitError(
            f"primitive-divergence check capped at {edge_cap} edges, got {g.edge_count}"
        )
    if not g.is_connected():
        return False
    if g.edge_count != 2 * g.loop_number():
        return False
    return _subgraph_divergence_failure(g) is None


def graph_stats(g: Graph, edge_cap: int = PRIMITIVE_DIVERGENT_EDGE_CAP) -> dict:
    degs = g.degrees()
    return {
        "e": g.edge_count,
        "v": g.vertex_count,
        "h": g.loop_number(),
        "h0": g.components(),
        "is_phi4": max(degs, default=0) <= 4,
        "is_primitive_divergent": is_primitive_divergent(g, edge_cap),
        "connectivity": connectivity(g),
    }


# -- vertex width ------------------------------------------------------------


def boundary_size(g: Graph, placed: int) -> int:
    """|V(L) ∩ V(R)| where L = edges in the bitmask ``placed``, R = the rest."""
    left = set()
    right = set()
    for i, (u, v) in enumerate(g.edges):
        if placed >> i & 1:
            left.add(u)
            left.add(v)
        else:
            right.add(u)
            right.add(v)
    return len(left & right)


def ordering_width(g: Graph, order) -> int:
    """vw(G, O): max boundary over the proper prefixes of the ordering."""
    mask = 0
    best = 0
    e = g.edge_count
    for i, lbl in enumerate(order):
        mask |= 1 << (lbl - 1)
        if i < e - 1:
            best = max(best, boundary_size(g, mask))
    return best


def vertex_width(g: Graph, budget: int = 1 << 22) -> dict:
    """Exact vertex width with a witness ordering.

    Subset DP: h[S] = best achievable max boundary when the edges of S are
    already placed and the rest is ordered optimally.  States are bitmasks of
    placed edges; the boundary depends only on the set.  Witness ties break
    toward the lexicographically smallest placed-edge sequence.  If 2^e
    exceeds the node budget, a greedy bounded search returns an upper bound
    flagged non-optimal.
    """
    if not g.is_connected():
        raise InvalidArgumentError("vertex width requires a connected graph")
    e = g.edge_count
    if e == 0:
        return {"width": 0, "witness": EdgeOrdering(()), "optimal": True}
    if (1 << e) > budget:
        return _vertex_width_greedy(g)

    bd = [0] * (1 << e)
    for mask in range(1, 1 << e):
        bd[mask] = boundary_size(g, mask)
    full = (1 << e) - 1
    bd[full] = 0

    h = [0] * (1 << e)
    # iterate masks descending by popcount via reverse integer order is not
    # topological; do explicit popcount buckets
    by_count = [[] for _ in range(e + 1)]
    for mask in range(1 << e):
        by_count[bin(mask).count("1")].append(mask)
    for size in range(e - 1, -1, -1):
        for mask in by_count[size]:
            best = None
            for i in range(e):
                if mask >> i & 1:
                    continue
                nxt = mask | (1 << i)
                cand = max(bd[nxt], h[nxt])
                if best is None or cand < best:
                    best = cand
            h[mask] = best
    width = h[0]
    order = []
    mask = 0
    for _ in range(e):
        for i in range(e):
            if mask >> i & 1:
                continue
            nxt = mask | (1 << i)
            if max(bd[nxt], h[nxt]) == h[mask]:
                order.append(i + 1)
                mask = nxt
                break
    return {"width": width, "witness": EdgeOrdering(tuple(order)), "optimal": True}


def _vertex_width_greedy(g: Graph) -> dict:
    e = g.edge_count
    order = []
    mask = 0
    width = 0
    for _ in range(e):
        best = None
        for i in range(e):
            if mask >> i & 1:
                continue
            b = boundary_size(g, mask | (1 << i))
            if best is None or b < best[0]:
                best = (b, i)
        b, i = best
        order.append(i + 1)
        mask |= 1 << i
        if len(order) < e:
            width = max(width, b)
    return {"width": width, "witness": EdgeOrdering(tuple(order)), "optimal": False}


# -- simplification -----------------------------------------------------------


def _drop_isolated(g: Graph) -> Graph:
    if g.edge_count == 0:
        return g
    used = sorted({w for uv in g.edges for w in uv})
    if len(used) == g.vertex_count:
        return g
    vmap = {w: i + 1 for i, w in enumerate(used)}
    return Graph(
        name=g.name,
        vertex_count=len(used),
        edges=tuple((vmap[u], vmap[v]) for u, v in g.edges),
    )


def simplify(g: Graph) -> Graph:
    """Remove external legs, tadpoles, series and parallel pairs to a fixed point.

    External-leg removal only applies while more than one edge remains, so a
    bare chain reduces to a single edge rather than to nothing.
    """
    current = g
    changed = True
    while changed and current.edge_count > 0:
        current = _drop_isolated(current)
        changed = False
        # tadpoles
        for e in current.edge_labels():
            u, v = current.endpoints(e)
            if u == v:
                current = minor(current, delete=[e])
                changed = True
                break
        if changed:
            continue
        degs = current.degrees()
        # external legs (degree-1 vertices), keep at least one edge
        if current.edge_count >= 2:
            leg = next((v for v in range(1, current.vertex_count + 1) if degs[v - 1] == 1), None)
            if leg is not None:
                e = current.incident_edges(leg)[0]
                current = minor(current, delete=[e])
                changed = True
                continue
        # parallel pair: two edges with identical endpoints
        seen = {}
        for e in current.edge_labels():
            key = current.endpoints(e)
            if key in seen:
                current = minor(current, delete=[e])
                changed = True
                break
            seen[key] = e
        if changed:
            continue
        # series pair at a degree-2 vertex: contract one of the two edges
        for v in range(1, current.vertex_count + 1):
            if degs[v - 1] == 2:
                inc = current.incident_edges(v)
                if len(inc) == 2:
                    current = minor(current, contract=[inc[0]])
                    changed = True
                    break
    current = _drop_isolated(current)
    return Graph(name=f"{g.name}-simplified", vertex_count=current.vertex_count, edges=current.edges)
