"""Five-invariants, splits, higher invariants, denominator reduction."""

import itertools

import pytest

from dodgson_forge.catalog import catalog
from dodgson_forge.denom import (
    DenomTrace,
    denom_search,
    denominator_reduce,
    five_invariant,
    five_invariant_order_invariant,
    higher_invariant,
    is_split,
    stars_within,
    triangles_within,
)
from dodgson_forge.errors import InvalidArgumentError
from dodgson_forge.graph import Graph
from dodgson_forge.poly import MultiPoly
from conftest import rand_connected_multigraph

P = MultiPoly.parse

K5_FIVE = (
    P("a2*a6*a7*a10") * P("a6*a9^2 + a9*a2*a6 + a2*a9*a10 + a2*a7*a9 + a2*a7*a10")
).normalized()
K33_FIVE = P("a5*a9^2 + a3*a5*a9 + a5*a7*a9 + a3*a5*a7 - a3*a7*a9").normalized()
NP5_FIVE = (
    P("a7") * P("a8*a9 + a8*a10 + a9*a10") * P("a8*a6 + a10*a6 + a7*a10 + a6*a7")
).normalized()


def test_five_invariant_paper_values():
    assert five_invariant(catalog("K5"), (1, 3, 4, 5, 8)) == K5_FIVE
    assert five_invariant(catalog("K3,3"), (1, 2, 4, 6, 8)) == K33_FIVE
    assert five_invariant(catalog("fiveloop_np"), (1, 2, 3, 4, 5)) == NP5_FIVE


def test_five_invariant_repeated_labels_rejected():
    with pytest.raises(InvalidArgumentError):
        five_invariant(catalog("K5"), (1, 1, 2, 3, 4))


def test_five_invariant_all_120_orderings():
    w4 = catalog("W4")
    assert five_invariant_order_invariant(w4, (1, 2, 3, 4, 5))
    assert five_invariant_order_invariant(w4, (2, 3, 5, 7, 8))
    k5 = catalog("K5")
    assert five_invariant_order_invariant(k5, (1, 3, 4, 5, 8))


def test_five_invariant_vanishes_on_two_valent_or_two_loop():
    # subdividing one sunset edge gives a 2-valent vertex; any 5 edges
    # containing both of its edges kill the invariant
    g = Graph("gadget", 4, ((1, 2), (1, 2), (1, 3), (3, 2), (1, 4), (4, 2), (1, 2)))
    edges = (1, 2, 3, 4, 5)  # contains the parallel pair {1,2}
    assert five_invariant(g, edges).is_zero()


def test_is_split_triangle_rows():
    # a triangle inside the five edges forces the first-row vanishings
    k4 = catalog("K4")  # edges 1..3 not a triangle in lex labeling; find one
    tris = triangles_within(k4, list(k4.edge_labels()))
    assert tris
    a, b, c = tris[0]
    others = [e for e in k4.edge_labels() if e not in (a, b, c)][:2]
    rep = is_split(k4, (a, b, c, *others))
    assert rep.split
    assert rep.structural["triangles"]
    if not rep.zero:
        assert rep.verified


def test_is_split_k5_not_split():
    rep = is_split(catalog("K5"), (1, 3, 4, 5, 8))
    assert not rep.split and not rep.zero


def test_is_split_w4_all_56():
    w4 = catalog("W4")
    for combo in itertools.combinations(range(1, 9), 5):
        rep = is_split(w4, combo)
        assert rep.split or rep.zero, combo
        if rep.split and not rep.zero:
            assert rep.verified, combo


def test_split_pair_multiplies_back(rng):
    checked = 0
    while checked < 12:
        g = rand_connected_multigraph(rng, max_edges=8, max_vertices=5)
        if g.edge_count < 5:
            continue
        combo = tuple(sorted(rng.sample(list(g.edge_labels()), 5)))
        rep = is_split(g, combo)
        if rep.split and not rep.zero and rep.pair is not None:
            assert rep.verified, (g.edges, combo)
            checked += 1


def test_higher_invariant_conventions():
    w4 = catalog("W4")
    # 6Psi of a linearly reducible graph is a perfect square, 7Psi vanishes
    from dodgson_forge.poly import poly_sqrt

    six = higher_invariant(w4, (1, 2, 3, 4, 5, 6))
    assert six.is_zero() or poly_sqrt(six) is not None
    seven = higher_invariant(w4, (1, 2, 3, 4, 5, 6, 7))
    assert seven.is_zero()


def test_higher_invariant_degree_zero_gives_zero():
    # a bridge lies in every spanning tree, so no invariant involves its
    # variable; the sixth invariant in the bridge variable is 0 by convention
    g = Graph(
        "k4-bridge-tri",
        7,
        (
            (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),  # K4 block
            (4, 5),                                          # bridge = edge 7
            (5, 6), (6, 7), (5, 7),                          # triangle block
        ),
    )
    five = five_invariant(g, (1, 2, 3, 4, 5))
    assert not five.is_zero()
    assert five.degree(7) == 0
    assert higher_invariant(g, (1, 2, 3, 4, 5, 7)).is_zero()


def test_k34_contracted_seven_invariants_via_denominator_chain():
    """The printed 7-invariants of the K3,4 minors are the factor-reduced
    chain (P7 of the contracted graph); the naive iterated discriminant is
    identically zero there because the 6-invariant is a perfect square."""
    from dodgson_forge._recovery import K34_BAD1, K34_BAD2, _contracted_with_labels

    k34 = catalog("K3,4")
    m10, map10 = _contracted_with_labels(k34, 10)
    assert higher_invariant(m10, (1, 2, 3, 4, 5, 6, 7)).is_zero()
    tr = denominator_reduce(m10, list(range(1, 12)))
    p7 = dict(tr.P)[7]
    assert p7.rename_vars(map10).normalized() == K34_BAD1.normalized()
    m7, map7 = _contracted_with_labels(k34, 7)
    inv7 = {old: new for new, old in map7.items()}
    order = [inv7[e] for e in (1, 2, 3, 4, 5, 6, 10)] + [inv7[e] for e in (8, 9, 11, 12)]
    p7b = dict(denominator_reduce(m7, order).P)[7]
    assert p7b.rename_vars(map7).normalized() == K34_BAD2.normalized()


def test_fiveloop_np_trace():
    g = catalog("fiveloop_np")
    tr = denominator_reduce(g, list(range(1, 11)))
    stages = dict(tr.P)
    assert stages[7] == (P("a8*a9 + a8*a10 + a9*a10") * P("a8 + a10")).normalized()
    assert stages[8] == P("a10^2")
    assert tr.status.kind == "weight-drop" and tr.status.stage == 8


def test_k34_p8_weight_drop():
    tr = denominator_reduce(catalog("K3,4"), [1, 2, 3, 4, 5, 6, 7, 10, 8, 9, 11, 12])
    assert dict(tr.P)[8] == (P("a8*a12 - a9*a11") ** 2).normalized()
    assert tr.status.kind == "weight-drop" and tr.status.stage == 8


def test_q48_p10_verbatim():
    tr = denominator_reduce(catalog("Q48"), [1, 2, 3, 4, 9, 13, 5, 10, 11, 7])
    assert dict(tr.P)[10] == P("a6^2*a8*a14 + a8^2*a6*a12 + 3*a6*a8*a12*a14 - a12^2*a14^2")


def test_denom_trace_json_roundtrip():
    tr = denominator_reduce(catalog("fiveloop_np"), list(range(1, 11)))
    d = tr.to_json_dict()
    assert d["schema"] == "dodgson-forge/1"
    assert d["status"]["kind"] == "weight-drop"
    assert all(MultiPoly.parse(entry["text"]) is not None for entry in d["P"])


def test_denom_search_k4():
    res = denom_search(catalog("K4"))
    assert res.verdict == "denominator-reducible"
    assert res.final_denominators == [1]
    assert not res.memo_violations


def test_denom_search_w4_weight_drop_free_completion():
    res = denom_search(catalog("W4"))
    assert res.verdict == "denominator-reducible"
    assert res.final_denominators == [1]
    assert not res.weight_drop
    assert not res.memo_violations
    assert res.best.status.kind == "final-denominator" and res.best.status.d == 1


def test_denominator_divides_stage_products():
    """Every P_n divides the product of the stage-n reduction polynomials."""
    from dodgson_forge.reduction import DodgsonPool, reduce_order
    from dodgson_forge.poly import try_divide

    g = catalog("W4")
    order = list(range(1, 9))
    tr = denominator_reduce(g, order)
    states, _ = reduce_order(g, order, pool=DodgsonPool(g))
    for stage, p in tr.P:
        if p.is_constant():
            continue
        prod = MultiPoly.one()
        for sp in states[stage].polys:
            prod = prod * sp.poly
        assert try_divide(prod, p.normalized()) is not None, stage
