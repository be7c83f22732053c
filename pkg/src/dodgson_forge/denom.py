"""Five-invariants, splits, higher invariants and denominator reduction.

The five-invariant of edges (e1..e5) is the resultant
``[Psi^{e1e2,e3e4}, Psi^{e1e3,e2e4}]_{e5}``, well defined up to sign under
permutations of the five edges.  Denominator reduction iterates from
P5 = five-invariant: with P = A x^2 + B x + C in the next variable, the next
denominator is sqrt(B^2 - 4AC) when that is a perfect square, the linear
coefficient B when A = 0, and a vanishing next denominator is a weight drop
attributed to the last nonzero stage.  The subset search memoizes P on the
set of consumed edges (order-independent up to sign) and verifies that
property at every memo hit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetExceededError, InvalidArgumentError, UnsupportedDegreeError
from .graph import EdgeOrdering, Graph
from .poly import MultiPoly, poly_sqrt, resultant
from .dodgson import DodgsonKey, engine_for

# -- five-invariant ------------------------------------------------------------


def five_invariant(g: Graph, edges, normalize: bool = True) -> MultiPoly:
    """+-[Psi^{e1e2,e3e4}, Psi^{e1e3,e2e4}]_{e5}, sign-normalized by default.

    The resultant is taken in the formal degree-(1,1) sense on the Dodgson
    coefficients, g_x f_0 - g_0 f_x, even when a coefficient vanishes; the
    permutation invariance (up to sign) of the five-invariant holds for this
    convention and fails for the actual-degree Sylvester resultant.
    """
    e1, e2, e3, e4, e5 = _check_distinct(g, edges, 5)
    eng = engine_for(g)
    f0 = eng.dodgson(DodgsonKey((e1, e2), (e3, e4), (e5,)))
    fx = eng.dodgson(DodgsonKey((e1, e2, e5), (e3, e4, e5), ()))
    g0 = eng.dodgson(DodgsonKey((e1, e3), (e2, e4), (e5,)))
    gx = eng.dodgson(DodgsonKey((e1, e3, e5), (e2, e4, e5), ()))
    r = gx * f0 - g0 * fx
    return r.normalized() if normalize else r


def five_invariant_order_invariant(g: Graph, edges) -> bool:
    """Check the sign-normalized value over all 120 orderings of the edges."""
    base = five_invariant(g, edges)
    return all(
        five_invariant(g, perm) == base for perm in itertools.permutations(edges)
    )


def _check_distinct(g: Graph, edges, n):
    edges = tuple(edges)
    if len(edges) != n or len(set(edges)) != n:
        raise InvalidArgumentError(f"need {n} distinct edge labels, got {edges}")
    for e in edges:
        if not 1 <= e <= g.edge_count:
            raise InvalidArgumentError(f"edge label {e} out of range")
    return edges


# -- structural detection -------------------------------------------------------


def triangles_within(g: Graph, edges):
    """3-subsets of ``edges`` forming a triangle in g."""
    out = []
    for trip in itertools.combinations(edges, 3):
        ends = [g.endpoints(e) for e in trip]
        verts = {v for uv in ends for v in uv}
        if len(verts) == 3 and all(u != v for u, v in ends) and len(
            {frozenset(uv) for uv in ends}
        ) == 3:
            degs = {}
            for u, v in ends:
                degs[u] = degs.get(u, 0) + 1
                degs[v] = degs.get(v, 0) + 1
            if all(d == 2 for d in degs.values()):
                out.append(trip)
    return out


def stars_within(g: Graph, edges):
    """3-subsets of ``edges`` forming all edges at a 3-valent vertex of g."""
    out = []
    degs = g.degrees()
    eset = set(edges)
    for v in range(1, g.vertex_count + 1):
        if degs[v - 1] == 3:
            inc = g.incident_edges(v)
            if set(inc) <= eset and len(inc) == 3:
                out.append(tuple(sorted(inc)))
    return out


def has_two_valent_or_two_loop(g: Graph, edges):
    eset = set(edges)
    degs = g.degrees()
    for v in range(1, g.vertex_count + 1):
        if degs[v - 1] == 2:
            inc = g.incident_edges(v)
            if set(inc) <= eset:
                return True
    seen = {}
    for e in edges:
        key = g.endpoints(e)
        if key in seen:
            return True
        seen[key] = e
    return False


@dataclass
class SplitReport:
    edges: tuple
    zero: bool = False
    split: bool = False
    vanishing_term: str | None = None
    pair: tuple | None = None  # (normalized factor, normalized factor)
    structural: dict = field(default_factory=dict)
    verified: bool = False


def _split_candidates(g: Graph, edges):
    """(m, i, j, k, l) probes ordered so lemma-guaranteed vanishings go first.

    Triangles {a,b,c} among the five edges force Psi^{ab,ij}_c = 0 (the low
    term with m = c); 3-valent vertices force Psi^{abc,aij} = 0 (the high
    term with m = a).
    """
    preferred = []
    for (a, b, c) in triangles_within(g, edges):
        ij = [e for e in edges if e not in (a, b, c)]
        preferred.append((c, a, b, ij[0], ij[1]))
    for (a, b, c) in stars_within(g, edges):
        ij = [e for e in edges if e not in (a, b, c)]
        preferred.append((a, b, c, ij[0], ij[1]))
    rest = []
    for m in edges:
        others = [e for e in edges if e != m]
        i = others[0]
        for j, k, l in ((others[1], others[2], others[3]),
                        (others[2], others[1], others[3]),
                        (others[3], others[1], others[2])):
            rest.append((m, i, j, k, l))
    seen = set()
    out = []
    for cand in preferred + rest:
        m, i, j, k, l = cand
        key = (m, frozenset((frozenset((i, j)), frozenset((k, l)))))
        if key not in seen:
            seen.add(key)
            out.append(cand)
    return out


def is_split(g: Graph, edges, verify: bool = True) -> SplitReport:
    """Search the 30 Plucker terms for a vanishing one and derive the split.

    With a vanishing ``Psi^{ij,kl}_m`` the five-invariant over (i,j,k,l,m)
    collapses to ``Psi^{ik,jl}_m * Psi^{ijm,klm}``; with a vanishing
    ``Psi^{ijm,klm}`` it collapses to ``Psi^{ij,kl}_m * Psi^{ikm,jlm}``.
    Guaranteed splits from triangles / 3-valent vertices are probed first
    (the identified vanishing rows of the local lemma).  ``verify=False``
    skips computing the five-invariant and the multiply-back check, which
    keeps sweeps over large catalogs cheap.
    """
    edges = _check_distinct(g, edges, 5)
    eng = engine_for(g)
    rep = SplitReport(edges=edges)
    rep.structural = {
        "triangles": triangles_within(g, edges),
        "stars": stars_within(g, edges),
        "two_valent_or_two_loop": has_two_valent_or_two_loop(g, edges),
    }
    five = five_invariant(g, edges) if verify else None
    if verify and five.is_zero():
        rep.zero = True
        rep.split = True
        rep.verified = True
        return rep

    for m, i, j, k, l in _split_candidates(g, edges):
        low = DodgsonKey((i, j), (k, l), (m,))
        if eng.dodgson(low).is_zero():
            rep.split = True
            rep.vanishing_term = low.render()
            if verify:
                f1 = eng.dodgson(DodgsonKey((i, k), (j, l), (m,))).normalized()
                f2 = eng.dodgson(DodgsonKey((i, j, m), (k, l, m), ())).normalized()
                rep.pair = (f1, f2)
            break
        high = DodgsonKey((i, j, m), (k, l, m), ())
        if eng.dodgson(high).is_zero():
            rep.split = True
            rep.vanishing_term = high.render()
            if verify:
                f1 = eng.dodgson(low).normalized()
                f2 = eng.dodgson(DodgsonKey((i, k, m), (j, l, m), ())).normalized()
                rep.pair = (f1, f2)
            break
    if rep.split and verify:
        if five.is_zero():
            rep.verified = True
        elif rep.pair is not None:
            rep.verified = (rep.pair[0] * rep.pair[1]).normalized() == five
        rep.zero = five.is_zero()
    return rep


# -- higher invariants ----------------------------------------------------------


def _higher_disc(p: MultiPoly, var: int, stage: int) -> MultiPoly:
    """Discriminant step for higher invariants; degree-0 gives 0."""
    if p.is_zero():
        return p
    d = p.degree(var)
    if d == 0:
        return MultiPoly.zero()
    if d == 1:
        return MultiPoly.one()
    if d == 2:
        a = p.coeff_of_power(var, 2)
        b = p.coeff_of_power(var, 1)
        c = p.coeff_of_power(var, 0)
        return b * b - MultiPoly.const(4) * a * c
    if poly_sqrt(p) is not None:
        return MultiPoly.zero()  # perfect square: double roots throughout
    raise UnsupportedDegreeError(
        f"higher invariant stage {stage}: degree {d} in a{var} and not a square"
    )


def higher_invariant(g: Graph, edges) -> MultiPoly:
    """nPsi for n >= 5: iterated discriminants of the five-invariant."""
    edges = tuple(edges)
    if len(edges) < 5:
        raise InvalidArgumentError("higher invariants start at five edges")
    _check_distinct(g, edges, len(edges))
    p = five_invariant(g, edges[:5])
    for idx, var in enumerate(edges[5:], start=6):
        p = _higher_disc(p, var, idx).normalized()
    return p


# -- denominator reduction -------------------------------------------------------


@dataclass
class DenomStatus:
    kind: str  # "weight-drop" | "final-denominator" | "obstruction" | "running"
    stage: int | None = None
    d: int | None = None
    obstruction: str | None = None  # "non-square-discriminant" | "totally-quadratic"
    failed_variable: int | None = None


@dataclass
class DenomTrace:
    graph: str
    order_prefix: list
    P: list  # [(stage, MultiPoly)]
    status: DenomStatus
    variables: list  # per-stage variable consumed (aligned with P[1:])

    def to_json_dict(self) -> dict:
        return {
            "schema": "dodgson-forge/1",
            "graph": self.graph,
            "order_prefix": list(self.order_prefix),
            "P": [{"stage": s, "text": p.render()} for s, p in self.P],
            "status": {
                "kind": self.status.kind,
                "stage": self.status.stage,
                "d": self.status.d,
                "obstruction": self.status.obstruction,
                "failed_variable": self.status.failed_variable,
            },
            "variables": list(self.variables),
        }


def _reduce_step_poly(p: MultiPoly, var: int):
    """One denominator-reduction step.

    Returns ("ok", next_p) with next_p possibly zero, or
    ("non-square", None) when the discriminant is not a perfect square.
    """
    a = p.coeff_of_power(var, 2)
    b = p.coeff_of_power(var, 1)
    c = p.coeff_of_power(var, 0)
    if p.degree(var) > 2:
        return ("non-square", None)
    if not a.is_zero():
        disc = b * b - MultiPoly.const(4) * a * c
        s = poly_sqrt(disc)
        if s is None:
            return ("non-square", None)
        return ("ok", s.normalized())
    if not b.is_zero():
        return ("ok", b.normalized())
    return ("ok", MultiPoly.zero())


def _totally_quadratic(p: MultiPoly, remaining) -> bool:
    remaining = [x for x in remaining]
    return bool(remaining) and all(p.degree(x) == 2 for x in remaining)


def denominator_reduce(g: Graph, order) -> DenomTrace:
    """Run the reduction P5, P6, ... strictly along the given edge order."""
    if not g.is_connected():
        raise InvalidArgumentError("denominator reduction needs a connected graph")
    if g.edge_count < 6:
        raise InvalidArgumentError("denominator reduction needs at least 6 edges")
    seq = list(order.perm if isinstance(order, EdgeOrdering) else order)
    if len(set(seq)) != len(seq):
        raise InvalidArgumentError("order contains repeated labels")
    if len(seq) < 5:
        raise InvalidArgumentError("order must cover at least five edges")
    p5 = five_invariant(g, seq[:5])
    trace = DenomTrace(
        graph=g.name,
        order_prefix=seq[:5],
        P=[(5, p5)],
        status=DenomStatus(kind="running"),
        variables=[],
    )
    if p5.is_zero():
        trace.status = DenomStatus(kind="weight-drop", stage=5)
        return trace
    p = p5
    stage = 5
    for var in seq[5:]:
        remaining = [x for x in seq if x not in trace.order_prefix]
        verdict, nxt = _reduce_step_poly(p, var)
        if verdict == "non-square":
            kind = (
                "totally-quadratic"
                if _totally_quadratic(p, remaining)
                else "non-square-discriminant"
            )
            trace.status = DenomStatus(
                kind="obstruction", stage=stage, obstruction=kind, failed_variable=var
            )
            return trace
        if nxt.is_zero():
            trace.status = DenomStatus(kind="weight-drop", stage=stage)
            return trace
        stage += 1
        p = nxt
        trace.order_prefix.append(var)
        trace.variables.append(var)
        trace.P.append((stage, p))
    if len(trace.order_prefix) == g.edge_count and p.is_constant():
        trace.status = DenomStatus(
            kind="final-denominator", stage=stage, d=abs(p.constant_value())
        )
    else:
        trace.status = DenomStatus(kind="partial", stage=stage)
    return trace


# -- memoized subset search -------------------------------------------------------


@dataclass
class DenomSearchResult:
    graph: str
    verdict: str  # "denominator-reducible" | "not-denominator-reducible" | "unknown"
    best: DenomTrace | None
    final_denominators: list  # distinct |d| values over completing branches
    weight_drop: bool
    totally_quadratic: list  # [(frozenset consumed, MultiPoly)] exhibits
    memo_violations: list
    states_explored: int

    def to_json_dict(self) -> dict:
        return {
            "schema": "dodgson-forge/1",
            "graph": self.graph,
            "verdict": self.verdict,
            "final_denominators": sorted(self.final_denominators),
            "weight_drop": self.weight_drop,
            "totally_quadratic": [
                {"consumed": sorted(s), "text": p.render()}
                for s, p in self.totally_quadratic
            ],
            "memo_violations": self.memo_violations,
            "states_explored": self.states_explored,
            "best": self.best.to_json_dict() if self.best else None,
        }


def denom_search(g: Graph, state_budget: int = 1 << 16) -> DenomSearchResult:
    """Explore every reduction order by dynamic programming over edge subsets.

    The denominator depends on the set of consumed edges only (up to sign);
    every memo hit re-verifies that and records violations.  The verdict is
    reducible as soon as one branch consumes all edges or weight-drops.
    """
    if not g.is_connected() or g.edge_count < 6:
        raise InvalidArgumentError("search needs a connected graph with >= 6 edges")
    if g.edge_count > 18:
        raise InvalidArgumentError("exhaustive subset search capped at 18 edges")
    labels = list(g.edge_labels())
    memo = {}
    parent = {}
    violations = []
    tq = []
    finals = set()
    weight_drop_order = None  # full edge order reproducing a drop
    completed_state = None
    frontier = []
    explored = 0
    for combo in itertools.combinations(labels, 5):
        p = five_invariant(g, combo)
        s = frozenset(combo)
        if p.is_zero():
            if weight_drop_order is None:
                weight_drop_order = list(combo)
            continue
        memo[s] = p
        parent[s] = None
        frontier.append(s)
    budget_hit = False
    while frontier and not budget_hit:
        next_frontier = []
        for s in frontier:
            explored += 1
            if explored > state_budget:
                budget_hit = True
                break
            p = memo[s]
            remaining = [x for x in labels if x not in s]
            if _totally_quadratic(p, remaining):
                tq.append((s, p))
            for x in remaining:
                verdict, nxt = _reduce_step_poly(p, x)
                if verdict != "ok":
                    continue
                s2 = s | {x}
                if nxt.is_zero():
                    if weight_drop_order is None:
                        weight_drop_order = _order_to(s, parent) + [x]
                    continue
                if s2 in memo:
                    if memo[s2] != nxt:
                        violations.append(
                            {
                                "consumed": sorted(s2),
                                "stored": memo[s2].render(),
                                "recomputed": nxt.render(),
                            }
                        )
                    continue
                memo[s2] = nxt
                parent[s2] = (s, x)
                if len(s2) == len(labels):
                    finals.add(abs(nxt.constant_value()))
                    if completed_state is None:
                        completed_state = s2
                else:
                    next_frontier.append(s2)
        frontier = next_frontier
    if budget_hit:
        verdict = "unknown"
    elif completed_state is not None or weight_drop_order is not None:
        verdict = "denominator-reducible"
    else:
        verdict = "not-denominator-reducible"
    best = None
    if completed_state is not None:
        best = _trace_for_order(g, _order_to(completed_state, parent))
    elif weight_drop_order is not None:
        best = _trace_for_order(g, weight_drop_order)
    elif tq:
        s, _ = max(tq, key=lambda item: len(item[0]))
        best = _trace_for_order(g, _order_to(s, parent))
    return DenomSearchResult(
        graph=g.name,
        verdict=verdict,
        best=best,
        final_denominators=sorted(finals),
        weight_drop=weight_drop_order is not None,
        totally_quadratic=tq,
        memo_violations=violations,
        states_explored=explored,
    )


def _order_to(state, parent):
    """Reconstruct one consumption order reaching ``state``."""
    chain = []
    s = state
    while parent.get(s) is not None:
        prev, x = parent[s]
        chain.append(x)
        s = prev
    chain.reverse()
    return sorted(s) + chain


def _trace_for_order(g, order) -> DenomTrace:
    full = list(order) + [x for x in g.edge_labels() if x not in order]
    return denominator_reduce(g, full)
