"""Named graph catalog with fixed, documented edge labelings.

Constructed families (K_n, K_{m,n}, wheels, zigzags, lattices) use the
labelings documented on their builders.  The entries whose labelings come
from published figures (K5, K3,3, K3,4, the 5-loop nonplanar graph) are
frozen JSON files recovered once from the quoted example polynomials; see
``_recovery`` and the regeneration test.  Catalog entries are also plain
graph files: {"name":..., "vertices":..., "edges": [[u,v],...]}.
"""

from __future__ import annotations

import json
import re
from importlib import resources

from .errors import InvalidArgumentError
from .graph import Graph

_FROZEN = {"K5": "K5", "K3,3": "K3_3", "K3,4": "K3_4", "fiveloop_np": "fiveloop_np"}


def _load_frozen(stem: str) -> Graph:
    ref = resources.files("dodgson_forge").joinpath(f"catalog/{stem}.json")
    with ref.open("r", encoding="utf-8") as fh:
        return Graph.from_json_dict(json.load(fh))


def complete_graph(n: int) -> Graph:
    """K_n, edges in lexicographic order of endpoint pairs."""
    if n < 2:
        raise InvalidArgumentError("complete graph needs n >= 2")
    return Graph(
        f"K{n}", n, tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    )


def complete_bipartite(m: int, n: int) -> Graph:
    """K_{m,n}: parts {1..m} and {m+1..m+n}, edges lexicographic."""
    return Graph(
        f"K{m},{n}",
        m + n,
        tuple((i, m + j) for i in range(1, m + 1) for j in range(1, n + 1)),
    )


def wheel(n: int) -> Graph:
    """Wheel with n spokes: rim edges 1..n around vertices 1..n (edge i joins
    i and i+1), spokes n+i from rim vertex i to the hub n+1.

    For n = 4 this reproduces the published W4 labeling: the quoted Dodgson
    polynomials (a5*a7 etc.) come out verbatim.
    """
    if n < 3:
        raise InvalidArgumentError("wheel needs n >= 3 spokes")
    rim = tuple((i, i % n + 1) for i in range(1, n + 1))
    spokes = tuple((i, n + 1) for i in range(1, n + 1))
    return Graph(f"W{n}", n + 1, rim + spokes)


def zigzag(h: int) -> Graph:
    """Zigzag with h loops: the circulant C_{h+2}(1,2) minus one vertex.

    Z3 = K4 and Z4 = W4 (as graphs); vertex width is 3 throughout.  Edges are
    labeled in lexicographic order of endpoint pairs.
    """
    if h < 3:
        raise InvalidArgumentError("zigzag needs h >= 3 loops")
    m = h + 2
    edges = set()
    for i in range(m):
        for d in (1, 2):
            a, b = i, (i + d) % m
            if a != 0 and b != 0:
                edges.add((min(a, b), max(a, b)))
    return Graph(f"zigzag_{h}", m - 1, tuple(sorted(edges)))


def sunset() -> Graph:
    return Graph("sunset", 2, ((1, 2), (1, 2), (1, 2)))


def square_lattice(n: int) -> Graph:
    """B_n: the (n+1) x (n+1) grid with n^2 boxes, row-major vertex order."""
    if n < 1:
        raise InvalidArgumentError("lattice needs n >= 1")
    side = n + 1

    def vid(r, c):
        return r * side + c + 1

    edges = []
    for r in range(side):
        for c in range(side):
            if c + 1 < side:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < side:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph(f"B{n}", side * side, tuple(sorted(edges)))


def q48() -> Graph:
    """The 7-loop graph Q48: 8 vertices, 14 edges in the published order."""
    return Graph(
        "Q48",
        8,
        (
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 1),
            (1, 3), (1, 5), (2, 6), (3, 7), (4, 6), (4, 8),
        ),
    )


def g3_8_37() -> Graph:
    """G^3_{8,37}: 9 vertices, 16 edges in the published order."""
    pairs = [
        (1, 2), (1, 3), (1, 4), (2, 5), (2, 7), (3, 4), (5, 8), (7, 8),
        (8, 9), (5, 9), (4, 9), (4, 7), (3, 5), (3, 6), (6, 7), (6, 9),
    ]
    return Graph("G3_8_37", 9, tuple(pairs))


def planar6_7v() -> Graph:
    """The planar 6-loop graph on 7 vertices with an irreducible 5-invariant."""
    pairs = [
        (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 1),
        (1, 3), (1, 4), (2, 6), (3, 5), (4, 7),
    ]
    return Graph("planar6_7v", 7, tuple(pairs))


_NAME_RULES = [
    (re.compile(r"^sunset$", re.I), lambda m: sunset()),
    (re.compile(r"^Q48$", re.I), lambda m: q48()),
    (re.compile(r"^G3_8_37$", re.I), lambda m: g3_8_37()),
    (re.compile(r"^planar6_7v$", re.I), lambda m: planar6_7v()),
    (re.compile(r"^fiveloop_np$", re.I), lambda m: _load_frozen("fiveloop_np")),
    (re.compile(r"^K_?(\d+)[,_](\d+)$", re.I), lambda m: _bipartite(int(m.group(1)), int(m.group(2)))),
    (re.compile(r"^K_?(\d+)$", re.I), lambda m: _complete(int(m.group(1)))),
    (re.compile(r"^(?:W|wheel_?)(\d+)$", re.I), lambda m: wheel(int(m.group(1)))),
    (re.compile(r"^(?:ZZ|zigzag_?)(\d+)$", re.I), lambda m: zigzag(int(m.group(1)))),
    (re.compile(r"^(?:B|lattice_?)(\d+)$", re.I), lambda m: square_lattice(int(m.group(1)))),
]


def _complete(n: int) -> Graph:
    if n == 5:
        return _load_frozen("K5")
    return complete_graph(n)


def _bipartite(m: int, n: int) -> Graph:
    if (m, n) == (3, 3):
        return _load_frozen("K3_3")
    if (m, n) == (3, 4):
        return _load_frozen("K3_4")
    return complete_bipartite(m, n)


def catalog(name: str) -> Graph:
    """Look up a catalog graph by name (e.g. K5, K3,4, wheel_4, zigzag_5)."""
    for pattern, builder in _NAME_RULES:
        m = pattern.match(name.strip())
        if m:
            return builder(m)
    raise InvalidArgumentError(f"unknown catalog name {name!r}")


def catalog_names():
    return [
        "sunset", "K<n> (K5 frozen)", "K<m>,<n> (K3,3 and K3,4 frozen)",
        "wheel_<n> / W<n>", "zigzag_<n>", "B<n> (square lattice)",
        "fiveloop_np", "Q48", "G3_8_37", "planar6_7v",
    ]
