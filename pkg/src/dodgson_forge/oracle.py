"""Finite-field verification: fuzzing, point counting, the c2 congruence.

Everything here is independent of the symbolic engine's internals: numeric
determinants of the graph matrix at random points check the symbolic graph
polynomial, brute-force point counts over F_q check the denominator
reduction through the congruence  |X_G(F_q)| = +-q^2 |V(P_k)(F_q)| mod q^3.
Prime-power fields use log/antilog tables over an irreducible polynomial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BudgetExceededError, InvalidArgumentError
from .graph import Graph
from .poly import MultiPoly
from .dodgson import DodgsonKey, GraphMatrix, engine_for, incidence_rows
from ._parallel import SERIAL

DEFAULT_FUZZ_PRIME = (1 << 61) - 1  # Mersenne prime, far above any degree here
DEFAULT_EVAL_BUDGET = 10 ** 8


# -- finite fields -------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor_prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1 or not _is_prime(p):
                raise InvalidArgumentError(f"{q} is not a prime power")
            return p, k
    raise InvalidArgumentError(f"{q} is not a prime power")


class GF:
    """F_q arithmetic; elements are ints 0..q-1 (base-p digit encoding).

    For q = p this is plain modular arithmetic; for q = p^k (k <= 3 in this
    engine) multiplication goes through log/antilog tables built from a
    primitive element of F_p[x]/(f) with f irreducible of degree k.
    """

    def __init__(self, q: int):
        if q > 1 << 16:
            raise InvalidArgumentError("field tables capped at q <= 2^16")
        self.q = q
        self.p, self.k = _factor_prime_power(q)
        if self.k == 1:
            self.exp = self.log = None
        else:
            self._build_tables()

    def _poly_of(self, a: int):
        p = self.p
        out = []
        while a:
            out.append(a % p)
            a //= p
        return out

    def _mul_mod(self, a: int, b: int, modulus) -> int:
        # polynomial multiplication of digit encodings modulo ``modulus``
        p, k = self.p, self.k
        pa, pb = self._poly_of(a), self._poly_of(b)
        prod = [0] * (len(pa) + len(pb) - 1 if pa and pb else 1)
        for i, ca in enumerate(pa):
            for j, cb in enumerate(pb):
                prod[i + j] = (prod[i + j] + ca * cb) % p
        # reduce by monic modulus of degree k
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j, m in enumerate(modulus[:-1]):
                    prod[i - k + j] = (prod[i - k + j] - c * m) % p
        val = 0
        for c in reversed(prod[:k]):
            val = val * p + c
        return val

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        # find a monic irreducible of degree k: x^k + ... ; coefficients low->high
        for tail in range(p ** k):
            mod = self._poly_of(tail) + [0] * (k - len(self._poly_of(tail)))
            mod = mod + [1]
            if self._is_irreducible(mod):
                break
        else:  # pragma: no cover
            raise AssertionError("no irreducible polynomial found")
        self.modulus = mod
        # find a generator
        for gen in range(2, q):
            seen = set()
            x = 1
            for _ in range(q - 1):
                x = self._mul_mod(x, gen, mod)
                seen.add(x)
            if len(seen) == q - 1:
                break
        exp = [1] * (2 * (q - 1))
        x = 1
        for i in range(1, q - 1):
            x = self._mul_mod(x, gen, mod)
            exp[i] = x
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        log = [0] * q
        for i in range(q - 1):
            log[exp[i]] = i
        self.exp, self.log = exp, log

    def _is_irreducible(self, mod) -> bool:
        p, k = self.p, self.k
        # no roots (enough for k <= 3)
        if k > 3:
            raise InvalidArgumentError("prime powers supported up to cube")
        for a in range(p):
            v = 0
            for c in reversed(mod):
                v = (v * a + c) % p
            if v == 0:
                return False
        return True

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            s = a + b
            return s - self.q if s >= self.q else s
        p = self.p
        out = 0
        mul = 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * mul
            a //= p
            b //= p
            mul *= p
        return out

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.q
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def pow(self, a: int, e: int) -> int:
        if self.k == 1:
            return pow(a, e, self.q)
        if a == 0:
            return 0 if e else 1
        return self.exp[(self.log[a] * e) % (self.q - 1)]


# -- point counting -------------------------------------------------------------


def _to_nested(f: MultiPoly, vars_order, p: int):
    """Nested coefficient tree along vars_order; leaves embed Z -> F_p.

    An integer node means "constant in all remaining variables"; dict levels
    are never stripped, so tree depth tracks the variable list exactly.
    """
    if not vars_order:
        return f.constant_value() % p
    if f.is_zero():
        return 0
    v = vars_order[0]
    out = {}
    for e, c in f.coeffs_in(v).items():
        sub = _to_nested(c, vars_order[1:], p)
        if not (isinstance(sub, int) and sub == 0):
            out[e] = sub
    return out if out else 0


def _tree_scale(node, w, field):
    if w == 0:
        return 0
    if isinstance(node, int):
        return field.mul(node, w)
    return {e: _tree_scale(sub, w, field) for e, sub in node.items()}


def _tree_merge(a, b, field):
    if isinstance(a, int) and isinstance(b, int):
        return field.add(a, b)
    if isinstance(a, int):
        a, b = b, a
    out = dict(a)
    if isinstance(b, int):
        if b:
            out[0] = _tree_merge(out.get(0, 0), b, field)
        return out
    for e, sub in b.items():
        out[e] = _tree_merge(out[e], sub, field) if e in out else sub
    return out


def _tree_collapse(node, x, field):
    """Substitute the top variable of the tree by the field value x."""
    if isinstance(node, int):
        return node
    acc = 0
    first = True
    for e, sub in node.items():
        w = field.pow(x, e) if e else 1
        term = _tree_scale(sub, w, field)
        if first:
            acc = term
            first = False
        else:
            acc = _tree_merge(acc, term, field)
    return acc


def point_count(
    f: MultiPoly,
    q: int,
    variables=None,
    budget: int = DEFAULT_EVAL_BUDGET,
    pool=SERIAL,
) -> int:
    """Number of points of the affine zero locus of f over F_q.

    ``variables`` fixes the ambient affine space; it must cover the variables
    of f and defaults to them.  Exhaustive evaluation over the grid, caching
    coefficient subtrees variable by variable; constant subtrees prune whole
    grid slabs at once.
    """
    field = GF(q)
    fvars = f.variables()
    if variables is None:
        variables = fvars
    variables = list(variables)
    if set(fvars) - set(variables):
        raise InvalidArgumentError("variables must cover the polynomial's support")
    n = len(variables)
    if q ** n > budget:
        raise BudgetExceededError(f"{q}^{n} evaluations exceed budget {budget}")
    nested = _to_nested(f, variables, field.p)

    def count_rec(node, depth) -> int:
        if isinstance(node, int):
            return q ** (n - depth) if node == 0 else 0
        total = 0
        for x in range(q):
            total += count_rec(_tree_collapse(node, x, field), depth + 1)
        return total

    if isinstance(nested, dict) and pool.threads > 1:
        parts = pool.map(
            lambda x: count_rec(_tree_collapse(nested, x, field), 1), range(q)
        )
        return sum(parts)
    return count_rec(nested, 0)


def eval_over_field(f: MultiPoly, point: dict, field: GF) -> int:
    total = 0
    for m, c in f.terms.items():
        t = _embed_int(c, field)
        for v, e in m:
            t = field.mul(t, field.pow(point[v], e))
        total = field.add(total, t)
    return total


# -- randomized identity testing --------------------------------------------------


@dataclass
class FuzzVerdict:
    equal: bool
    trials: int
    prime: int
    witness: dict | None = None
    failure_bound: float | None = None

    def to_json_dict(self):
        return {
            "schema": "dodgson-forge/1",
            "verdict": "probable-equal" if self.equal else "unequal",
            "trials": self.trials,
            "prime": self.prime,
            "witness": self.witness,
            "failure_bound": self.failure_bound,
        }


def identity_fuzz(
    lhs: MultiPoly,
    rhs: MultiPoly,
    trials: int = 20,
    p: int = DEFAULT_FUZZ_PRIME,
    seed: int = 0,
) -> FuzzVerdict:
    """Evaluate lhs - rhs at uniform random points of F_p^n."""
    rng = random.Random(seed)
    vs = sorted(set(lhs.variables()) | set(rhs.variables()))
    deg = max(lhs.total_degree(), rhs.total_degree(), 1)
    for _ in range(trials):
        point = {v: rng.randrange(p) for v in vs}
        a = lhs.eval_mod_p(point, p)
        b = rhs.eval_mod_p(point, p)
        if a != b:
            return FuzzVerdict(
                equal=False, trials=trials, prime=p,
                witness={"point": point, "lhs": a, "rhs": b},
            )
    return FuzzVerdict(
        equal=True, trials=trials, prime=p, failure_bound=(deg / p) ** trials
    )


def det_mod_p(rows, p: int) -> int:
    a = [[x % p for x in row] for row in rows]
    n = len(a)
    det = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k] % p:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det % p
        det = det * a[k][k] % p
        inv = pow(a[k][k], p - 2, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                for j in range(k, n):
                    a[i][j] = (a[i][j] - f * a[k][j]) % p
    return det % p


def graph_matrix_det_mod_p(g: Graph, key: DodgsonKey, point: dict, p: int) -> int:
    """Numeric det M_G(I,J)|_{alpha_K=0} at an integer point (independent path)."""
    inc = incidence_rows(g)
    kset = set(key.K)
    rows_keep = [e for e in g.edge_labels() if e not in set(key.I)]
    cols_keep = [e for e in g.edge_labels() if e not in set(key.J)]
    nv = g.vertex_count - 1
    rows = []
    for e in rows_keep:
        row = [
            (point[e] if (e == f and e not in kset) else 0) for f in cols_keep
        ]
        row.extend(inc[e - 1])
        rows.append(row)
    for w in range(nv):
        row = [-inc[f - 1][w] for f in cols_keep]
        row.extend([0] * nv)
        rows.append(row)
    return det_mod_p(rows, p)


def fuzz_graph_identity(
    g: Graph, identity: str, trials: int = 20, p: int = DEFAULT_FUZZ_PRIME,
    seed: int = 0,
) -> FuzzVerdict:
    """Named graph identities, both sides evaluated numerically mod p.

    ``det_tree``: spanning-tree Psi_G against the numeric determinant of M_G.
    ``dodgson1`` / ``dodgson2``: the two quadratic Dodgson identities on
    random index choices.  ``plucker2``: the n=2 Plucker relation.
    """
    rng = random.Random(seed)
    labels = list(g.edge_labels())
    psi = engine_for(g).psi() if identity == "det_tree" else None
    for t in range(trials):
        point = {v: rng.randrange(1, p) for v in labels}
        if identity == "det_tree":
            lhs = psi.eval_mod_p(point, p)
            rhs = graph_matrix_det_mod_p(g, DodgsonKey((), (), ()), point, p)
        elif identity in ("dodgson1", "dodgson2", "plucker2"):
            need = {"dodgson1": 3, "dodgson2": 4, "plucker2": 4}[identity]
            if len(labels) < need:
                raise InvalidArgumentError("graph too small for this identity")
            chosen = rng.sample(labels, need)
            dd = lambda I, J, K=(): graph_matrix_det_mod_p(
                g, DodgsonKey(tuple(I), tuple(J), tuple(K)), point, p
            )
            if identity == "dodgson1":
                # terms in the minor S = {a,b,x} (unused special variables
                # zeroed); our conventions give the arrangement sign
                # eps = +1 iff a and b lie on the same side of x
                a, b, x = chosen
                eps = 1 if (a < x) == (b < x) else -1
                lhs = (
                    dd((a,), (b,), (x,)) * dd((x,), (x,), (a, b))
                    - dd((a,), (x,), (b,)) * dd((x,), (b,), (a,))
                ) % p
                rhs = eps * dd((), (), (a, b, x)) * dd((a, x), (b, x)) % p
            elif identity == "dodgson2":
                a, b, x, y = chosen
                a, b, x = sorted((a, b, x))  # canonical arrangement a < b < x
                lhs = (
                    dd((a,), (y,), (b, x)) * dd((b, x), (y, x), (a,))
                    - dd((a, x), (y, x), (b,)) * dd((b,), (y,), (a, x))
                ) % p
                rhs = -dd((x,), (y,), (a, b)) * dd((a, b), (y, x)) % p
            else:
                i, j, k, l = sorted(chosen)  # Plucker needs ascending indices
                lhs = (dd((i, j), (k, l)) - dd((i, k), (j, l)) + dd((i, l), (j, k))) % p
                rhs = 0
        else:
            raise InvalidArgumentError(f"unknown identity {identity!r}")
        if lhs != rhs:
            return FuzzVerdict(
                equal=False, trials=trials, prime=p,
                witness={"trial": t, "point": point, "lhs": lhs, "rhs": rhs},
            )
    return FuzzVerdict(equal=True, trials=trials, prime=p, failure_bound=None)


# -- the point-count congruence ----------------------------------------------------


@dataclass
class CongruenceReport:
    graph: str
    q: int
    stage: int
    count_graph: int
    count_denominator: int
    holds: bool
    sign: int | None

    def to_json_dict(self):
        return {
            "schema": "dodgson-forge/1",
            "graph": self.graph,
            "q": self.q,
            "stage": self.stage,
            "|X_G|": self.count_graph,
            "|V(P_k)|": self.count_denominator,
            "holds": self.holds,
            "sign": self.sign,
        }


def c2_congruence(
    g: Graph,
    p_k: MultiPoly,
    stage: int,
    q: int,
    remaining_vars,
    budget: int = DEFAULT_EVAL_BUDGET,
) -> CongruenceReport:
    """|X_G(F_q)| = +-q^2 |V(P_k)(F_q)| mod q^3, both counts affine."""
    psi = engine_for(g).psi()
    count_x = point_count(psi, q, variables=list(g.edge_labels()), budget=budget)
    count_v = point_count(p_k, q, variables=list(remaining_vars), budget=budget)
    m = q ** 3
    sign = None
    if (count_x - q * q * count_v) % m == 0:
        sign = 1
    elif (count_x + q * q * count_v) % m == 0:
        sign = -1
    return CongruenceReport(
        graph=g.name,
        q=q,
        stage=stage,
        count_graph=count_x,
        count_denominator=count_v,
        holds=sign is not None,
        sign=sign,
    )


# -- eta products (stretch goal) -----------------------------------------------------


def eta_product_coefficients(powers, nmax: int):
    """q-expansion coefficients of prod_i eta(q^{m_i})^{k_i}.

    ``powers`` is a list of (m, k); the eta prefactor contributes
    q^(sum m_i k_i / 24).  Returns a dict n -> a_n for n <= nmax.
    """
    shift_num = sum(m * k for m, k in powers)
    if shift_num % 24:
        raise InvalidArgumentError("eta product with fractional leading power")
    shift = shift_num // 24
    series = {0: 1}
    for m, k in powers:
        for _ in range(k):
            # multiply by prod_n (1 - q^(m n)) truncated
            new = dict(series)
            n = 1
            while m * n <= nmax:
                # multiply by (1 - q^(mn)): new -= q^(mn) * new_prior
                updated = dict(new)
                for d, c in new.items():
                    if d + m * n <= nmax:
                        updated[d + m * n] = updated.get(d + m * n, 0) - c
                new = updated
                n += 1
            series = new
    return {n + shift: c for n, c in series.items() if n + shift <= nmax}
