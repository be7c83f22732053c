import random

import pytest

from dodgson_forge.graph import Graph


def rand_connected_multigraph(rng: random.Random, max_edges=8, max_vertices=6,
                              tadpole_rate=0.04):
    v = rng.randint(2, max_vertices)
    edges = [(rng.randint(1, w - 1), w) for w in range(2, v + 1)]
    target = rng.randint(v - 1, max_edges)
    while len(edges) < target:
        a, b = rng.randint(1, v), rng.randint(1, v)
        if a != b or rng.random() < tadpole_rate:
            edges.append((a, b))
    return Graph("rand", v, tuple(edges))


@pytest.fixture
def rng():
    return random.Random(20260808)
