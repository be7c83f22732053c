"""The linear-reduction engine: per-variable reduction with compatibility
graphs, Fubini intersection over orderings, and certification.

A stage state holds sign-normalized irreducible factors plus a compatibility
graph.  One reduction step with respect to a variable x collects the
irreducible factors of [0,f]_x, [inf,f]_x, D_x(f) and [f,g]_x over compatible
pairs, dropping constants; new compatibilities join factors of resultants
that share a parent (0 and infinity count as parents) and factors of a single
discriminant.  Factors are identified against the lazily grown pool of
Dodgson polynomials of the reduced prefix, which is what certification as
matrix type means; the basic-compatibility distance rule and the
five-invariant pattern of descent are tracked alongside.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetExceededError, InvalidArgumentError
from .graph import EdgeOrdering, Graph, vertex_width
from .poly import MultiPoly, factorize, resultant, RES_ZERO, RES_INF
from .dodgson import DodgsonKey, engine_for

# -- Dodgson pools --------------------------------------------------------------


class DodgsonPool:
    """Normalized Dodgson polynomials {Psi^{I,J}_K : I+J+K = reduced set}.

    Index sets I and J may overlap (I = J gives graph polynomials of minors).
    Pools are sharded by |I|: a nonzero Dodgson has total degree h_G - |I|,
    so a stage factor of degree d can only match the shard k = h_G - d, which
    keeps lazy identification cheap.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.engine = engine_for(graph)
        self.h = graph.loop_number()
        self._shards = {}
        self._factor_shards = {}
        self._factor_cache = {}

    def shard(self, reduced, k: int) -> dict:
        r = frozenset(reduced)
        skey = (r, k)
        if skey not in self._shards:
            table = {}
            factors = {}
            items = sorted(r)
            if 0 <= k <= len(items):
                for iset in itertools.combinations(items, k):
                    for jset in itertools.combinations(items, k):
                        if jset < iset:
                            continue  # Psi symmetric in I, J
                        kset = tuple(
                            e for e in items if e not in iset and e not in jset
                        )
                        key = DodgsonKey(iset, jset, kset)
                        val = self.engine.dodgson(key)
                        if val.is_zero():
                            continue
                        norm = val.normalized()
                        table.setdefault(norm, []).append(key)
                        for fac in self._factors_of(norm):
                            factors.setdefault(fac, []).append(key)
            self._shards[skey] = table
            self._factor_shards[skey] = factors
        return self._shards[skey]

    def _factors_of(self, norm: MultiPoly):
        if norm not in self._factor_cache:
            self._factor_cache[norm] = tuple(
                f for f, _ in factorize(norm).factors if not f.is_constant()
            )
        return self._factor_cache[norm]

    def identify(self, reduced, poly: MultiPoly):
        """(kind, keys): exact value matches, else factor-of matches.

        ``kind`` is "exact" when the polynomial equals a pool Dodgson up to
        sign, "factor" when it is an irreducible factor of one (still inside
        the Dodgson zero locus), "" when unidentified.  A nonzero Dodgson has
        degree h - |I|, so the exact match can only sit in shard h - deg and
        factor matches in that shard or lower ones.
        """
        kmax = self.h - poly.total_degree()
        exact = tuple(self.shard(reduced, kmax).get(poly, ()))
        if exact:
            return "exact", exact
        for k in range(kmax, -1, -1):
            self.shard(reduced, k)
            hit = self._factor_shards[(frozenset(reduced), k)].get(poly)
            if hit:
                return "factor", tuple(hit)
        return "", ()


# -- stage data -------------------------------------------------------------------


@dataclass
class StagePoly:
    poly: MultiPoly  # sign-normalized, content-free
    keys: tuple = ()  # exact DodgsonKey matches (may be several: coincidences)
    factor_keys: tuple = ()  # keys whose Dodgson this polynomial divides
    five_descended: bool = False
    resolved: bool = True  # factorization certified complete
    parents: tuple = ()  # provenance: parent polynomials (normalized)

    @property
    def identified(self) -> bool:
        return bool(self.keys) or bool(self.factor_keys)


@dataclass
class ReductionState:
    stage: int
    reduced_set: tuple
    polys: list  # [StagePoly] ordered by canonical text
    compat: set  # {frozenset({p, q})} over the normalized polynomials
    nonlinear: list = field(default_factory=list)  # polys of degree 2 in the step var

    def poly_set(self):
        return {sp.poly for sp in self.polys}

    def find(self, p: MultiPoly) -> StagePoly:
        for sp in self.polys:
            if sp.poly == p:
                return sp
        raise KeyError(p.render())

    def to_json_dict(self, next_var=None) -> dict:
        order = {sp.poly: i for i, sp in enumerate(self.polys)}
        return {
            "i": self.stage,
            "polys": [
                {
                    "text": sp.poly.render(),
                    "dodgson": (
                        sp.keys[0].render()
                        if sp.keys
                        else sp.factor_keys[0].render() if sp.factor_keys else None
                    ),
                    "resolved": sp.resolved,
                }
                for sp in self.polys
            ],
            "compat": sorted(
                sorted([order[a], order[b]]) for a, b in
                ((tuple(pair)[0], tuple(pair)[1]) for pair in self.compat)
            ),
            "M": horizontal_count(self, next_var) if next_var else None,
        }


def initial_state(g: Graph) -> ReductionState:
    psi = engine_for(g).psi()
    polys = []
    if not psi.is_constant():
        polys = [StagePoly(poly=psi.normalized(), keys=(DodgsonKey((), (), ()),))]
    return ReductionState(stage=0, reduced_set=(), polys=polys, compat=set())


def distance(key1: DodgsonKey, key2: DodgsonKey) -> int:
    """||(A,B),(C,D)||: min symmetric-difference pairing of index sets."""
    a, b = set(key1.I), set(key1.J)
    c, d = set(key2.I), set(key2.J)
    direct = len(a ^ c) + len(b ^ d)
    crossed = len(a ^ d) + len(b ^ c)
    return min(direct, crossed)


def five_invariant_pattern(key1: DodgsonKey, key2: DodgsonKey):
    """Detect {(Mij,Mkl),(Mik,Mjl)}; returns (M, {i,j,k,l}) or None."""
    a, b = set(key1.I), set(key1.J)
    c, d = set(key2.I), set(key2.J)
    for c2, d2 in ((c, d), (d, c)):
        m = a & b & c2 & d2
        ij, kl = a - m, b - m
        ik, jl = c2 - m, d2 - m
        if not (len(ij) == len(kl) == len(ik) == len(jl) == 2):
            continue
        if (ij | kl) != (ik | jl) or ij == ik or ij == jl:
            continue
        if len(ij & ik) == 1 and len(ij & jl) == 1 and len(kl & ik) == 1:
            return (frozenset(m), frozenset(ij | kl))
    return None


# -- the reduction step --------------------------------------------------------------


def reduce_step(
    g: Graph,
    state: ReductionState,
    x: int,
    pool: DodgsonPool | None = None,
    use_closed_forms: bool = True,
) -> ReductionState:
    """One stage of the compatibility-graph reduction with respect to a<x>."""
    if x in state.reduced_set:
        raise InvalidArgumentError(f"variable a{x} already reduced")
    new_reduced = tuple(sorted((*state.reduced_set, x)))
    products = []  # (tag, raw polynomial, closed_children or None)
    nonlinear = []
    by_poly = {sp.poly: sp for sp in state.polys}
    for sp in state.polys:
        f = sp.poly
        d = f.degree(x)
        z = resultant(RES_ZERO, f, x)
        if not z.is_zero():
            products.append((("res", frozenset([RES_ZERO, f])), z, None))
        inf = resultant(RES_INF, f, x)
        if not inf.is_zero():
            products.append((("res", frozenset([RES_INF, f])), inf, None))
        if d == 2:
            nonlinear.append(f)
            a2 = f.coeff_of_power(x, 2)
            a1 = f.coeff_of_power(x, 1)
            a0 = f.coeff_of_power(x, 0)
            disc = a1 * a1 - MultiPoly.const(4) * a2 * a0
            if not disc.is_zero():
                products.append((("disc", f), disc, None))
        elif d > 2:
            raise InvalidArgumentError(
                f"stage polynomial of degree {d} > 2 in a{x}: {f.render()}"
            )
    for pair in state.compat:
        f, h = tuple(pair)
        closed = None
        if use_closed_forms:
            closed = _closed_form_children(g, by_poly[f], by_poly[h], x, state.reduced_set)
        if closed is not None:
            products.append((("res", frozenset([f, h])), None, closed))
            continue
        r = resultant(f, h, x)
        if not r.is_zero():
            products.append((("res", frozenset([f, h])), r, None))

    # factor every product; children tagged with their parent products
    child_tags = {}
    child_meta = {}
    candidates = [sp.poly for sp in state.polys]
    for tag, raw, closed in products:
        if closed is not None:
            pieces = []
            for child, five_flag in closed:
                fz = factorize(child, candidates=candidates)
                for fac, _ in fz.factors:
                    pieces.append((fac, five_flag, fz.complete))
        else:
            fz = factorize(raw, candidates=candidates)
            five_flag = False
            if tag[0] == "res" and use_closed_forms:
                five_flag = _is_five_invariant_pair(by_poly, tag[1])
            pieces = [(fac, five_flag, fz.complete) for fac, _ in fz.factors]
        for fac, five_flag, complete in pieces:
            if fac.is_constant():
                continue
            fac = fac.normalized()
            child_tags.setdefault(fac, set()).add(tag)
            meta = child_meta.setdefault(fac, {"five": False, "unresolved": False, "parents": set()})
            meta["five"] = meta["five"] or five_flag
            meta["unresolved"] = meta["unresolved"] or not complete
            if tag[0] == "disc":
                meta["parents"].add(tag[1])
            else:
                meta["parents"].update(t for t in tag[1] if isinstance(t, MultiPoly))
            candidates.append(fac)

    # propagate five-descent and unresolved flags from parents
    for fac, meta in child_meta.items():
        for parent in meta["parents"]:
            psp = by_poly.get(parent)
            if psp is not None:
                meta["five"] = meta["five"] or psp.five_descended
                meta["unresolved"] = meta["unresolved"] or not psp.resolved

    # compatibilities: factors of two different resultants that share a
    # polynomial parent, corner pairs [0,f],[0,g] (resp. [inf,f],[inf,g])
    # whose parents f, g were compatible at the previous stage, and factors
    # of a single discriminant.  Factors of one resultant are not paired and
    # 0/infinity sharing alone links nothing (the spurious-grandparent rule).
    compat = set()
    children = sorted(child_tags, key=lambda p: p.render())
    prev_compat = state.compat
    for u, v in itertools.combinations(children, 2):
        linked = False
        for a in child_tags[u]:
            if linked:
                break
            for b in child_tags[v]:
                if _tags_linked(a, b, prev_compat):
                    linked = True
                    break
        if linked:
            compat.add(frozenset((u, v)))

    new_polys = []
    for fac in children:
        meta = child_meta[fac]
        kind, keys = pool.identify(new_reduced, fac) if pool is not None else ("", ())
        new_polys.append(
            StagePoly(
                poly=fac,
                keys=keys if kind == "exact" else (),
                factor_keys=keys if kind == "factor" else (),
                five_descended=meta["five"],
                resolved=not meta["unresolved"],
                parents=tuple(sorted((p.render() for p in meta["parents"]))),
            )
        )
    return ReductionState(
        stage=state.stage + 1,
        reduced_set=new_reduced,
        polys=new_polys,
        compat=compat,
        nonlinear=nonlinear,
    )


def _tags_linked(a, b, prev_compat) -> bool:
    if a[0] == "disc" or b[0] == "disc":
        return a[0] == "disc" and b[0] == "disc" and a[1] == b[1]
    pa, pb = a[1], b[1]
    if pa == pb:
        return False
    if any(isinstance(t, MultiPoly) for t in pa & pb):
        return True
    for sym in (RES_ZERO, RES_INF):
        if sym in pa and sym in pb:
            fa = next(t for t in pa if isinstance(t, MultiPoly))
            fb = next(t for t in pb if isinstance(t, MultiPoly))
            if frozenset((fa, fb)) in prev_compat:
                return True
    return False


def _is_five_invariant_pair(by_poly, pair) -> bool:
    members = [t for t in pair if isinstance(t, MultiPoly)]
    if len(members) != 2:
        return False
    sp1, sp2 = by_poly[members[0]], by_poly[members[1]]
    for k1 in sp1.keys:
        for k2 in sp2.keys:
            if five_invariant_pattern(k1, k2):
                return True
    return False


def _closed_form_children(g, sp1: StagePoly, sp2: StagePoly, x: int, reduced):
    """Children of [f,g]_x via the Dodgson resultant identities, if they apply.

    Returns a list of (child polynomial, five_descended flag) or None when no
    identity matches.  The children are the two Dodgson factors for the
    distance-2 patterns, or the five-invariant of the minor for the
    {(Mij,Mkl),(Mik,Mjl)} pattern.
    """
    if not sp1.keys or not sp2.keys:
        return None
    eng = engine_for(g)
    newk = tuple(sorted((*reduced, x)))
    for first, second in ((sp1, sp2), (sp2, sp1)):
        for k1 in first.keys:
            for k2 in second.keys:
                hit = _resid_children(eng, k1, k2, x, newk)
                if hit is not None:
                    return hit
    for k1 in sp1.keys:
        for k2 in sp2.keys:
            if five_invariant_pattern(k1, k2) is not None:
                r = resultant(sp1.poly, sp2.poly, x)
                if r.is_zero():
                    return []
                return [(r, True)]
    return None


def _resid_children(eng, k1: DodgsonKey, k2: DodgsonKey, x: int, newk):
    """Children of [Psi^{k1}, Psi^{k2}]_x by the two resultant identities."""
    for a1, b1 in ((set(k1.I), set(k1.J)), (set(k1.J), set(k1.I))):
        for a2, b2 in ((set(k2.I), set(k2.J)), (set(k2.J), set(k2.I))):
            # resid1: (I,J) with (Ia,Jb) -> (Ix,Jb)(Ia,Jx)
            if a1 <= a2 and b1 <= b2 and len(a2 - a1) == 1 and len(b2 - b1) == 1:
                a = next(iter(a2 - a1))
                b = next(iter(b2 - b1))
                if a not in b1 and b not in a1:
                    c1 = eng.dodgson(DodgsonKey(tuple(a1 | {x}), tuple(b1 | {b}), newk))
                    c2 = eng.dodgson(DodgsonKey(tuple(a1 | {a}), tuple(b1 | {x}), newk))
                    if c1.is_zero() or c2.is_zero():
                        return []
                    return [(c1, False), (c2, False)]
            # resid2: (Ia,J) with (Ib,J) -> (Ix,J)(Iab,Jx)
            if b1 == b2 and len(a1 ^ a2) == 2 and len(a1) == len(a2):
                inter = a1 & a2
                a = next(iter(a1 - inter))
                b = next(iter(a2 - inter))
                c1 = eng.dodgson(DodgsonKey(tuple(inter | {x}), tuple(b1), newk))
                c2 = eng.dodgson(
                    DodgsonKey(tuple(inter | {a, b}), tuple(b1 | {x}), newk)
                )
                if c1.is_zero() or c2.is_zero():
                    return []
                return [(c1, False), (c2, False)]
    return None


# -- ordering-driven reduction ----------------------------------------------------------


def horizontal_count(state: ReductionState, next_var: int) -> int:
    """M_i: factors with nonzero constant and leading term in the next variable."""
    count = 0
    for sp in state.polys:
        p = sp.poly
        if p.degree(next_var) < 1:
            continue
        if not resultant(RES_ZERO, p, next_var).is_zero() and not resultant(
            RES_INF, p, next_var
        ).is_zero():
            count += 1
    return count


def reduce_order(
    g: Graph,
    order,
    max_stage: int | None = None,
    pool: DodgsonPool | None = None,
    use_closed_forms: bool = True,
    term_budget: int = 2_000_000,
):
    """Iterate reduce_step along the order; returns (states, halted_info).

    Halts early when every remaining candidate variable sees a stage
    polynomial of degree >= 2 (nonlinear obstruction); the witnesses are the
    stage polynomials of degree >= 2 in some remaining variable.
    """
    seq = list(order.perm if isinstance(order, EdgeOrdering) else order)
    if pool is None:
        pool = DodgsonPool(g)
    state = initial_state(g)
    states = [state]
    halted = None
    for step_index, x in enumerate(seq):
        if max_stage is not None and step_index >= max_stage:
            break
        remaining = [e for e in seq[step_index:]]
        blocked = all(
            any(sp.poly.degree(v) >= 2 for sp in state.polys) for v in remaining
        )
        if blocked and remaining:
            witnesses = [
                sp.poly
                for sp in state.polys
                if any(sp.poly.degree(v) >= 2 for v in remaining)
            ]
            halted = {"stage": state.stage, "witnesses": witnesses}
            break
        state = reduce_step(g, state, x, pool=pool, use_closed_forms=use_closed_forms)
        if sum(sp.poly.num_terms() for sp in state.polys) > term_budget:
            raise BudgetExceededError(
                f"term budget exceeded at stage {state.stage}", partial=states
            )
        states.append(state)
    else:
        # check the terminal obstruction as well (all variables consumed or not)
        remaining = [e for e in seq if e not in state.reduced_set]
        if remaining and all(
            any(sp.poly.degree(v) >= 2 for sp in state.polys) for v in remaining
        ):
            witnesses = [
                sp.poly
                for sp in state.polys
                if any(sp.poly.degree(v) >= 2 for v in remaining)
            ]
            halted = {"stage": state.stage, "witnesses": witnesses}
    return states, halted


# -- Fubini intersection -------------------------------------------------------------


def _intersect_states(s1: ReductionState, s2: ReductionState) -> ReductionState:
    common = s1.poly_set() & s2.poly_set()
    polys = []
    for sp in s1.polys:
        if sp.poly in common:
            other = s2.find(sp.poly)
            polys.append(
                StagePoly(
                    poly=sp.poly,
                    keys=sp.keys or other.keys,
                    factor_keys=sp.factor_keys or other.factor_keys,
                    five_descended=sp.five_descended and other.five_descended,
                    resolved=sp.resolved and other.resolved,
                    parents=sp.parents,
                )
            )
    compat = {
        pair
        for pair in (s1.compat & s2.compat)
        if all(p in common for p in pair)
    }
    return ReductionState(
        stage=s1.stage, reduced_set=s1.reduced_set, polys=polys, compat=compat
    )


# -- certification --------------------------------------------------------------


@dataclass
class CertReport:
    graph: str
    order: list
    verdict: str  # "matrix-type" | "linearly-reducible" | "fails-at-stage"
    fail_stage: int | None
    witnesses: list  # polynomial texts for failures
    stages: list  # per-stage json dicts
    M: list  # horizontal component counts per stage
    positivity: bool
    positivity_failures: list
    ramification: dict  # {"pass": bool, "witnesses": [...], "minus_ones": [...]}
    timings: dict

    def to_json_dict(self) -> dict:
        return {
            "schema": "dodgson-forge/1",
            "graph": self.graph,
            "order": list(self.order),
            "verdict": (
                f"fails-at-stage({self.fail_stage})"
                if self.verdict == "fails-at-stage"
                else self.verdict
            ),
            "stages": self.stages,
            "M": self.M,
            "positivity": self.positivity,
            "positivity_failures": self.positivity_failures,
            "ramification": self.ramification,
            "witnesses": self.witnesses,
            "timings": self.timings,
        }


def _is_single_signed(p: MultiPoly) -> bool:
    signs = {1 if c > 0 else -1 for c in p.terms.values()}
    return len(signs) <= 1


def _iterated_leading_coefficient(p: MultiPoly, order) -> int:
    """lim' chain: first nonzero Laurent coefficient variable by variable."""
    cur = p
    for v in order:
        if cur.is_constant():
            break
        cs = cur.coeffs_in(v)
        cur = cs[min(cs)]
    return cur.constant_value()


def _ramification_stage(state: ReductionState, next_var: int, tail_order):
    """Iterated-limit values of the stage's ramification set."""
    values = []
    horizontals = [
        sp.poly for sp in state.polys if sp.poly.degree(next_var) == 1
    ]
    gens = []
    for f in horizontals:
        gens.append(resultant(RES_ZERO, f, next_var))
        gens.append(resultant(RES_INF, f, next_var))
    for pair in state.compat:
        f, h = tuple(pair)
        if f.degree(next_var) == 1 and h.degree(next_var) == 1:
            r = resultant(f, h, next_var)
            if not r.is_zero():
                gens.append(r)
    for gpoly in gens:
        if gpoly.is_zero():
            continue
        gpoly = gpoly.normalized()  # overall resultant sign is conventional
        values.append(
            (_iterated_leading_coefficient(gpoly, tail_order), gpoly.render())
        )
    return values


def linear_order_search(
    g: Graph,
    pool: DodgsonPool,
    start=None,
    node_budget: int = 400,
    use_closed_forms: bool = True,
):
    """Backtracking search for an edge order keeping every stage linear.

    Returns (order, states) or None.  Candidate next variables are those in
    which every current stage polynomial has degree <= 1, tried smallest
    boundary first (vertex-width heuristics), depth first.
    """
    from .graph import boundary_size

    nodes = 0

    def rec(state, order):
        nonlocal nodes
        if len(order) == g.edge_count:
            return order, None
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError("linear order search budget exhausted")
        remaining = [e for e in g.edge_labels() if e not in state.reduced_set]
        cands = [
            x
            for x in remaining
            if all(sp.poly.degree(x) <= 1 for sp in state.polys)
        ]
        mask = 0
        for e in state.reduced_set:
            mask |= 1 << (e - 1)
        cands.sort(key=lambda x: (boundary_size(g, mask | (1 << (x - 1))), x))
        for x in cands:
            nxt = reduce_step(g, state, x, pool=pool, use_closed_forms=use_closed_forms)
            found = rec(nxt, order + [x])
            if found is not None:
                return found
        return None

    seed = initial_state(g)
    prefix = list(start or ())
    for x in prefix:
        seed = reduce_step(g, seed, x, pool=pool, use_closed_forms=use_closed_forms)
    try:
        found = rec(seed, prefix)
    except BudgetExceededError:
        return None
    if found is None:
        return None
    order, _ = found
    return order


def certify(
    g: Graph,
    strategy: str = "search",
    order=None,
    pool: DodgsonPool | None = None,
    use_closed_forms: bool = True,
) -> CertReport:
    """Run the reduction and certify matrix type / linear reducibility.

    Strategies: "given-order" (use ``order``), "vw-witness-order" (vertex
    width witness), "search" (vw witness first, then a bounded backtracking
    search over orders that keep every stage linear in the next variable).
    """
    import time as _time

    t0 = _time.time()
    if pool is None:
        pool = DodgsonPool(g)
    tried = []
    if strategy == "given-order":
        if order is None:
            raise InvalidArgumentError("given-order strategy needs an order")
        tried.append(list(order))
    elif strategy == "vw-witness-order":
        tried.append(list(vertex_width(g)["witness"]))
    elif strategy == "search":
        tried.append(list(vertex_width(g)["witness"]))
    else:
        raise InvalidArgumentError(f"unknown strategy {strategy!r}")

    chosen = None
    states = halted = None
    for cand in tried:
        states, halted = reduce_order(g, cand, pool=pool, use_closed_forms=use_closed_forms)
        linear = halted is None and all(
            not st.nonlinear for st in states[1:]
        )
        if linear:
            chosen = cand
            break
    if chosen is None and strategy == "search":
        found = linear_order_search(g, pool, use_closed_forms=use_closed_forms)
        if found is not None:
            chosen = found
            states, halted = reduce_order(g, chosen, pool=pool, use_closed_forms=use_closed_forms)
    if chosen is None:
        chosen = tried[0]
        states, halted = reduce_order(g, chosen, pool=pool, use_closed_forms=use_closed_forms)

    t_reduce = _time.time() - t0
    seq = list(chosen)
    linear = halted is None and all(not st.nonlinear for st in states[1:])
    all_identified = all(sp.identified for st in states[1:] for sp in st.polys)
    if not linear:
        verdict = "fails-at-stage"
        fail_stage = halted["stage"] if halted else next(
            st.stage for st in states[1:] if st.nonlinear
        )
        witnesses = [p.render() for p in (halted["witnesses"] if halted else [])]
    elif all_identified:
        verdict, fail_stage, witnesses = "matrix-type", None, []
    else:
        verdict, fail_stage, witnesses = "linearly-reducible", None, []

    m_counts = []
    stage_dicts = []
    positivity = True
    positivity_failures = []
    ram_values = []
    for idx, st in enumerate(states[1:], start=1):
        next_var = seq[idx] if idx < len(seq) else None
        stage_dicts.append(st.to_json_dict(next_var=next_var))
        if next_var is not None:
            m_counts.append(horizontal_count(st, next_var))
        for sp in st.polys:
            if not _is_single_signed(sp.poly):
                positivity = False
                positivity_failures.append({"stage": st.stage, "text": sp.poly.render()})
        if next_var is not None and linear:
            tail = seq[idx + 1:]
            ram_values.extend(
                {"stage": st.stage, "value": val, "of": text}
                for val, text in _ramification_stage(st, next_var, tail)
            )
    ram_bad = [rv for rv in ram_values if abs(rv["value"]) != 1]
    ram_minus = [rv for rv in ram_values if rv["value"] == -1]
    ramification = {
        "pass": not ram_bad and not ram_minus,
        "witnesses": ram_bad,
        "minus_ones": ram_minus,
    }
    return CertReport(
        graph=g.name,
        order=seq,
        verdict=verdict,
        fail_stage=fail_stage,
        witnesses=witnesses,
        stages=stage_dicts,
        M=m_counts,
        positivity=positivity,
        positivity_failures=positivity_failures,
        ramification=ramification,
        timings={"reduce_s": round(t_reduce, 3)},
    )


def fubini_reduce(
    g: Graph,
    edge_set,
    pool: DodgsonPool | None = None,
    cap: int = 12,
    use_closed_forms: bool = True,
) -> ReductionState:
    """(S,C)_[A]: intersection over all orderings by subset dynamic programming."""
    edge_set = tuple(sorted(set(edge_set)))
    if len(edge_set) > cap:
        raise BudgetExceededError(f"Fubini subset cap {cap} exceeded")
    if pool is None:
        pool = DodgsonPool(g)
    memo = {(): initial_state(g)}

    def state_for(subset) -> ReductionState:
        if subset in memo:
            return memo[subset]
        acc = None
        for x in subset:
            prev = state_for(tuple(e for e in subset if e != x))
            nxt = reduce_step(g, prev, x, pool=pool, use_closed_forms=use_closed_forms)
            acc = nxt if acc is None else _intersect_states(acc, nxt)
        memo[subset] = acc
        return acc

    return state_for(edge_set)
