"""Exact sparse multivariate polynomials over arbitrary-precision integers.

Variables are positive integers (edge labels); the variable ``e`` renders as
``a<e>``.  A monomial is a tuple of ``(variable, exponent)`` pairs with
variables ascending and exponents >= 1; the empty tuple is the constant
monomial.  Canonical term order is graded-lexicographic descending, which
makes rendered text bit-exact and sign normalization well defined.

Besides ring arithmetic this module provides the algebraic tool kit the
reduction algorithms need: Sylvester resultants up to degree 2, quadratic
discriminants, exact polynomial square roots, a primitive-PRS gcd and a
conservative factorizer whose irreducibility certificates are deliberately
limited (see ``factorize``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    InvalidArgumentError,
    UnassignedVariableError,
    UnsupportedDegreeError,
)

Monomial = tuple  # tuple[(var, exp), ...], vars ascending

_MONO_ONE: Monomial = ()


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_div(m1: Monomial, m2: Monomial):
    """m1 / m2 or None when not divisible."""
    if not m2:
        return m1
    rest = dict(m1)
    out = []
    for v, e in m2:
        have = rest.get(v, 0)
        if have < e:
            return None
        rest[v] = have - e
    for v, e in m1:
        r = rest[v]
        if r:
            out.append((v, r))
    return tuple(out)


def _mono_key(m: Monomial):
    """Sort key: ascending order of this key == graded-lex descending."""
    return (-sum(e for _, e in m), tuple((v, -e) for v, e in m))


def _mono_degree(m: Monomial, var: int) -> int:
    for v, e in m:
        if v == var:
            return e
        if v > var:
            return 0
    return 0


class MultiPoly:
    """Immutable sparse polynomial in Z[a1, a2, ...]."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        # terms: dict monomial -> nonzero int; trusted internally, filtered here
        if terms:
            self.terms = {m: c for m, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "MultiPoly":
        return _ZERO

    @staticmethod
    def one() -> "MultiPoly":
        return _ONE

    @staticmethod
    def const(c: int) -> "MultiPoly":
        if c == 0:
            return _ZERO
        return MultiPoly({_MONO_ONE: c})

    @staticmethod
    def var(v: int, exp: int = 1, coeff: int = 1) -> "MultiPoly":
        if v < 1:
            raise InvalidArgumentError(f"variable index must be >= 1, got {v}")
        if coeff == 0:
            return _ZERO
        if exp == 0:
            return MultiPoly.const(coeff)
        return MultiPoly({((v, exp),): coeff})

    @staticmethod
    def monomial(vars_exps, coeff: int = 1) -> "MultiPoly":
        m = tuple(sorted((v, e) for v, e in vars_exps if e))
        if coeff == 0:
            return _ZERO
        return MultiPoly({m: coeff})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _MONO_ONE in self.terms)

    def constant_value(self) -> int:
        if not self.terms:
            return 0
        if self.is_constant():
            return self.terms[_MONO_ONE]
        raise InvalidArgumentError("polynomial is not constant")

    def variables(self):
        vs = set()
        for m in self.terms:
            for v, _ in m:
                vs.add(v)
        return sorted(vs)

    def degree(self, var: int) -> int:
        d = 0
        for m in self.terms:
            dm = _mono_degree(m, var)
            if dm > d:
                d = dm
        return d

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def num_terms(self) -> int:
        return len(self.terms)

    def sorted_terms(self):
        """Terms in graded-lex descending order."""
        return sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]))

    def leading(self):
        """(monomial, coeff) of the graded-lex greatest term."""
        if not self.terms:
            raise InvalidArgumentError("zero polynomial has no leading term")
        m = min(self.terms, key=_mono_key)
        return m, self.terms[m]

    def sign(self) -> int:
        """Sign of the leading coefficient (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        return 1 if self.leading()[1] > 0 else -1

    def normalized(self) -> "MultiPoly":
        """Sign-normalized copy: leading graded-lex coefficient positive."""
        if self.sign() < 0:
            return -self
        return self

    def content(self) -> int:
        """Positive integer gcd of the coefficients (0 for the zero poly)."""
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
            if g == 1:
                return 1
        return g

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, 0) + c
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return MultiPoly(out) if out else _ZERO

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if not self.terms or not other.terms:
            return _ZERO
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            m1, c1 = next(iter(a.items()))
            if not m1:
                return MultiPoly({m: c1 * c for m, c in b.items()})
            return MultiPoly({_mono_mul(m1, m): c1 * c for m, c in b.items()})
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = _mono_mul(m1, m2)
                nc = out.get(m, 0) + c1 * c2
                if nc:
                    out[m] = nc
                else:
                    del out[m]
        return MultiPoly(out) if out else _ZERO

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InvalidArgumentError("negative power")
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and (self.constant_value() == other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- structure in one variable ------------------------------------

    def coeffs_in(self, var: int):
        """dict exponent -> coefficient polynomial (with ``var`` removed)."""
        out = {}
        for m, c in self.terms.items():
            e = _mono_degree(m, var)
            rest = tuple(p for p in m if p[0] != var) if e else m
            d = out.setdefault(e, {})
            d[rest] = d.get(rest, 0) + c
        return {e: MultiPoly(d) for e, d in out.items() if any(d.values())}

    def coeff_of_power(self, var: int, exp: int) -> "MultiPoly":
        return self.coeffs_in(var).get(exp, _ZERO)

    def substitute(self, var: int, value) -> "MultiPoly":
        """Replace ``var`` by a polynomial (or integer) value."""
        value = _coerce(value)
        cs = self.coeffs_in(var)
        if list(cs) in ([], [0]):
            return self
        out = _ZERO
        for e, coeff in cs.items():
            out = out + coeff * (value ** e)
        return out

    def set_vars(self, assignment: dict) -> "MultiPoly":
        """Partial evaluation: substitute several variables at once."""
        out = self
        for v, val in assignment.items():
            out = out.substitute(v, val)
        return out

    def rename_vars(self, mapping: dict) -> "MultiPoly":
        """Injectively relabel variables; unmapped variables keep their label."""
        out = {}
        for m, c in self.terms.items():
            nm = tuple(sorted((mapping.get(v, v), e) for v, e in m))
            if nm in out:
                raise InvalidArgumentError("variable renaming is not injective")
            out[nm] = c
        return MultiPoly(out)

    def eval_int(self, point: dict) -> int:
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                if v not in point:
                    raise UnassignedVariableError(f"variable a{v} unassigned")
                t *= point[v] ** e
            total += t
        return total

    def eval_mod_p(self, point: dict, p: int) -> int:
        """Value at an integer point in F_p, Horner-style along each variable."""
        missing = [v for v in self.variables() if v not in point]
        if missing:
            raise UnassignedVariableError(f"variables unassigned: {missing}")
        return _horner_mod(self, dict(point), p)

    # -- rendering / parsing -------------------------------------------

    def render(self) -> str:
        """Canonical text: graded-lex descending, e.g. ``a1*a2 - 2*a3^2``."""
        if not self.terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            mag = abs(c)
            factors = []
            if mag != 1 or not m:
                factors.append(str(mag))
            for v, e in m:
                factors.append(f"a{v}" if e == 1 else f"a{v}^{e}")
            body = "*".join(factors)
            if i == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)

    __str__ = render

    def __repr__(self):
        return f"MultiPoly({self.render()})"

    @staticmethod
    def parse(text: str) -> "MultiPoly":
        return _parse(text)


_ZERO = MultiPoly()
_ONE = MultiPoly({_MONO_ONE: 1})


def _coerce(x) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, int):
        return MultiPoly.const(x)
    raise TypeError(f"cannot coerce {type(x)!r} to MultiPoly")


def _horner_mod(f: MultiPoly, point: dict, p: int) -> int:
    vs = f.variables()
    if not vs:
        return f.constant_value() % p
    v = vs[0]
    cs = f.coeffs_in(v)
    x = point[v] % p
    acc = 0
    for e in range(max(cs), -1, -1):
        acc = (acc * x) % p
        if e in cs:
            acc = (acc + _horner_mod(cs[e], point, p)) % p
    return acc


# -- parsing -----------------------------------------------------------


def _parse(text: str):
    pos = 0
    n = len(text)

    def skip_ws(i):
        while i < n and text[i].isspace():
            i += 1
        return i

    def parse_int(i):
        j = i
        while j < n and text[j].isdigit():
            j += 1
        if j == i:
            raise InvalidArgumentError(f"expected integer at {i} in {text!r}")
        return int(text[i:j]), j

    result = {}
    pos = skip_ws(pos)
    first = True
    while pos < n:
        sign = 1
        if text[pos] == "+":
            if first:
                raise InvalidArgumentError("leading '+' not allowed")
            pos = skip_ws(pos + 1)
        elif text[pos] == "-":
            sign = -1
            pos = skip_ws(pos + 1)
        elif not first:
            raise InvalidArgumentError(f"expected '+' or '-' at {pos} in {text!r}")
        first = False
        coeff = 1
        mono = {}
        expect_factor = True
        while expect_factor:
            pos = skip_ws(pos)
            if pos < n and text[pos].isdigit():
                c, pos = parse_int(pos)
                coeff *= c
            elif pos < n and text[pos] == "a":
                v, pos = parse_int(pos + 1)
                e = 1
                if pos < n and text[pos] == "^":
                    e, pos = parse_int(pos + 1)
                mono[v] = mono.get(v, 0) + e
            else:
                raise InvalidArgumentError(f"expected term at {pos} in {text!r}")
            pos = skip_ws(pos)
            if pos < n and text[pos] == "*":
                pos += 1
            else:
                expect_factor = False
        m = tuple(sorted((v, e) for v, e in mono.items() if e))
        nc = result.get(m, 0) + sign * coeff
        if nc:
            result[m] = nc
        else:
            result.pop(m, None)
        pos = skip_ws(pos)
    return MultiPoly(result)


# -- exact division, gcd ------------------------------------------------


def divide_exact(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """f / g when the division is exact; raises InvalidArgumentError otherwise."""
    if g.is_zero():
        raise InvalidArgumentError("division by zero polynomial")
    if f.is_zero():
        return _ZERO
    if g.is_constant():
        d = g.constant_value()
        out = {}
        for m, c in f.terms.items():
            q, r = divmod(c, d)
            if r:
                raise InvalidArgumentError("inexact integer division")
            out[m] = q
        return MultiPoly(out)
    gm, gc = g.leading()
    rem = dict(f.terms)
    quot = {}
    while rem:
        fpoly = MultiPoly(rem)
        fm, fc = fpoly.leading()
        qm = _mono_div(fm, gm)
        if qm is None:
            raise InvalidArgumentError("inexact division (monomial)")
        qc, r = divmod(fc, gc)
        if r:
            raise InvalidArgumentError("inexact division (coefficient)")
        quot[qm] = quot.get(qm, 0) + qc
        for m2, c2 in g.terms.items():
            m = _mono_mul(qm, m2)
            nc = rem.get(m, 0) - qc * c2
            if nc:
                rem[m] = nc
            else:
                rem.pop(m, None)
    return MultiPoly(quot)


def try_divide(f: MultiPoly, g: MultiPoly):
    try:
        return divide_exact(f, g)
    except InvalidArgumentError:
        return None


def _coeff_content_gcd(f: MultiPoly, var: int) -> MultiPoly:
    """gcd of the coefficient polynomials of f viewed in ``var``."""
    g = _ZERO
    for _, coeff in sorted(f.coeffs_in(var).items()):
        g = gcd(g, coeff)
        if g.is_constant() and abs(g.constant_value()) == 1:
            return _ONE
    return g


def _prem(f: MultiPoly, g: MultiPoly, var: int) -> MultiPoly:
    """Pseudo-remainder of f by g in ``var``."""
    df, dg = f.degree(var), g.degree(var)
    lc_g = g.coeff_of_power(var, dg)
    r = f
    while not r.is_zero():
        dr = r.degree(var)
        if dr < dg:
            break
        lc_r = r.coeff_of_power(var, dr)
        r = lc_g * r - MultiPoly.var(var, dr - dg) * lc_r * g
    return r


def gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """A sign-normalized greatest common divisor over Z.

    Recursive primitive pseudo-remainder sequences, one variable at a time.
    """
    if f.is_zero() and g.is_zero():
        raise InvalidArgumentError("gcd(0, 0) undefined")
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    if f.is_constant() or g.is_constant():
        if f.is_constant() and g.is_constant():
            return MultiPoly.const(math.gcd(f.constant_value(), g.constant_value()))
        const, other = (f, g) if f.is_constant() else (g, f)
        return MultiPoly.const(math.gcd(const.constant_value(), other.content()))
    vf, vg = set(f.variables()), set(g.variables())
    common = sorted(vf & vg)
    if not common:
        return MultiPoly.const(math.gcd(f.content(), g.content()))
    var = common[-1]
    cf = _coeff_content_gcd(f, var)
    cg = _coeff_content_gcd(g, var)
    cont = gcd(cf, cg)
    a = divide_exact(f, cf)
    b = divide_exact(g, cg)
    if a.degree(var) < b.degree(var):
        a, b = b, a
    while not b.is_zero():
        r = _prem(a, b, var)
        a = b
        if r.is_zero():
            b = _ZERO
        else:
            rc = _coeff_content_gcd(r, var)
            b = divide_exact(r, rc)
    if a.degree(var) == 0:
        # pseudo-remainder chain collapsed: parts are coprime in ``var``
        return cont.normalized()
    return (cont * a).normalized()


# -- resultants and discriminants ---------------------------------------

RES_ZERO = "0"
RES_INF = "inf"


def _coeff_list(f: MultiPoly, var: int):
    cs = f.coeffs_in(var)
    if not cs:
        return [_ZERO]
    d = max(cs)
    return [cs.get(i, _ZERO) for i in range(d + 1)]


def _det_small(rows):
    """Determinant of a small square matrix of MultiPoly, by expansion."""
    n = len(rows)
    if n == 0:
        return _ONE
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    det = _ZERO
    sign = 1
    for j in range(n):
        a = rows[0][j]
        if not a.is_zero():
            minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
            det = det + MultiPoly.const(sign) * a * _det_small(minor)
        sign = -sign
    return det


def resultant(f, g, var: int) -> MultiPoly:
    """Resultant [f, g]_var for degrees at most 2.

    Either argument may be the symbol ``"0"`` or ``"inf"``: ``[0, f]`` is the
    constant term of f in ``var`` and ``[inf, f]`` its leading coefficient.
    Convention: for f, g both of degree 1, ``[f, g] = g_x f_0 - g_0 f_x``;
    in general the result is ``(-1)^(deg f * deg g)`` times the Sylvester
    determinant, which makes the resultant multiplicative in each slot.
    """
    if f in (RES_ZERO, RES_INF):
        if g in (RES_ZERO, RES_INF):
            raise InvalidArgumentError("resultant of two symbols")
        cs = _coeff_list(_coerce(g), var)
        return cs[0] if f == RES_ZERO else cs[-1]
    if g in (RES_ZERO, RES_INF):
        cs = _coeff_list(_coerce(f), var)
        return cs[0] if g == RES_ZERO else cs[-1]
    f = _coerce(f)
    g = _coerce(g)
    if f.is_zero() and g.is_zero():
        raise InvalidArgumentError("resultant of two zero polynomials")
    if f.is_zero() or g.is_zero():
        return _ZERO
    fc = _coeff_list(f, var)
    gc = _coeff_list(g, var)
    n, m = len(fc) - 1, len(gc) - 1
    if n > 2 or m > 2:
        raise UnsupportedDegreeError(
            f"resultant supports degree <= 2, got deg {n} and {m} in a{var}"
        )
    if n == 0 and m == 0:
        return _ONE
    if n == 0:
        return f ** m
    if m == 0:
        return g ** n
    if n == 1 and m == 1:
        return gc[1] * fc[0] - gc[0] * fc[1]
    # Sylvester matrix: m rows of f-coefficients, n rows of g-coefficients
    size = n + m
    rows = []
    frow = list(reversed(fc))
    grow = list(reversed(gc))
    for i in range(m):
        rows.append([_ZERO] * i + frow + [_ZERO] * (size - n - 1 - i))
    for i in range(n):
        rows.append([_ZERO] * i + grow + [_ZERO] * (size - m - 1 - i))
    det = _det_small(rows)
    return -det if (n * m) % 2 else det


def discriminant(f: MultiPoly, var: int) -> MultiPoly:
    """Discriminant in ``var``: B^2 - 4AC for quadratics, 1 for degree 1."""
    d = f.degree(var)
    if d == 0:
        raise InvalidArgumentError(f"discriminant needs degree >= 1 in a{var}")
    if d == 1:
        return _ONE
    if d > 2:
        raise UnsupportedDegreeError(f"discriminant supports degree <= 2, got {d}")
    a = f.coeff_of_power(var, 2)
    b = f.coeff_of_power(var, 1)
    c = f.coeff_of_power(var, 0)
    return b * b - MultiPoly.const(4) * a * c


# -- polynomial square root ---------------------------------------------


def poly_sqrt(q: MultiPoly):
    """Exact square root: s with s*s == q (sign-normalized), else None."""
    if q.is_zero():
        return _ZERO
    if q.is_constant():
        c = q.constant_value()
        if c < 0:
            return None
        r = math.isqrt(c)
        return MultiPoly.const(r) if r * r == c else None
    if q.sign() < 0:
        return None
    degs = [(q.degree(v), v) for v in q.variables()]
    if any(d % 2 for d, _ in degs):
        return None
    _, var = max(degs)
    cs = q.coeffs_in(var)
    top = max(cs)
    half = top // 2
    lead = poly_sqrt(cs[top])
    if lead is None:
        return None
    s_coeffs = {half: lead}
    two_lead = MultiPoly.const(2) * lead
    partial = MultiPoly.var(var, half) * lead
    for k in range(half - 1, -1, -1):
        delta = q - partial * partial
        c = delta.coeff_of_power(var, half + k)
        sk = try_divide(c, two_lead)
        if sk is None:
            return None
        if not sk.is_zero():
            s_coeffs[k] = sk
            partial = partial + MultiPoly.var(var, k) * sk if k else partial + sk
    if partial * partial == q:
        return partial.normalized()
    return None


# -- conservative factorization ------------------------------------------


@dataclass
class Factorization:
    """Product decomposition: input == unit * content * prod(f^m).

    ``unit`` is +-1 and ``content`` the positive integer content (the spec'd
    type has no slot for the latter; it is 1 throughout the graph pipeline).
    Each factor is sign-normalized and content-free; ``complete`` is True only
    when every factor is certified irreducible over Q by the conservative
    rules documented in ``factorize``.
    """

    unit: int = 1
    content: int = 1
    factors: list = field(default_factory=list)  # [(MultiPoly, multiplicity)]
    complete: bool = True

    def product(self) -> MultiPoly:
        out = MultiPoly.const(self.unit * self.content)
        for f, m in self.factors:
            out = out * f ** m
        return out

    def factor_polys(self):
        return [f for f, _ in self.factors]


def _is_certified_irreducible(f: MultiPoly) -> bool:
    """True when f is a variable or linear in some variable with coprime parts."""
    vs = f.variables()
    if len(vs) == 1 and f.num_terms() == 1 and f.degree(vs[0]) == 1:
        return True
    if f.content() != 1:
        return False
    for v in vs:
        if f.degree(v) == 1:
            a = f.coeff_of_power(v, 1)
            b = f.coeff_of_power(v, 0)
            if b.is_zero():
                continue
            if gcd(a, b).is_constant():
                return True
    return False


def factorize(q: MultiPoly, candidates=()) -> Factorization:
    """Split q into sign-normalized pairwise-coprime factors.

    Strategy, in order: integer content and monomial factors; perfect-square
    detection; splitting off linear-in-one-variable factors through their
    coefficient gcd; quadratic-formula splits when the discriminant is an
    exact square; trial division by the caller's candidate pool.  Whatever
    survives is emitted as a single factor and the factorization is marked
    incomplete unless every factor is certified irreducible.
    """
    if q.is_zero():
        raise InvalidArgumentError("cannot factorize the zero polynomial")
    original = q
    result = Factorization()
    if q.sign() < 0:
        result.unit = -1
        q = -q
    c = q.content()
    if c > 1:
        result.content = c
        q = divide_exact(q, MultiPoly.const(c))

    counts: dict[MultiPoly, int] = {}

    def emit(f: MultiPoly, mult: int = 1):
        counts[f] = counts.get(f, 0) + mult

    # monomial part
    min_exp: dict[int, int] = {}
    for m in q.terms:
        d = dict(m)
        for v in list(min_exp):
            min_exp[v] = min(min_exp[v], d.get(v, 0))
        if not min_exp:
            min_exp = dict(d)
        min_exp = {v: e for v, e in min_exp.items() if e}
        if not min_exp:
            break
    for v, e in sorted(min_exp.items()):
        emit(MultiPoly.var(v), e)
    if min_exp:
        q = divide_exact(q, MultiPoly.monomial(min_exp.items()))

    norm_candidates = []
    seen = set()
    for cand in candidates:
        cn = cand.normalized()
        if not cn.is_constant() and cn not in seen:
            seen.add(cn)
            norm_candidates.append(cn)

    stack = [(q, 1)]
    while stack:
        r, mult = stack.pop()
        if r.sign() < 0:
            if mult % 2:
                result.unit = -result.unit
            r = -r
        if r.is_constant():
            val = r.constant_value()
            if val != 1:
                # residual integer content from a split; fold it in
                result.content *= val ** mult
            continue
        ic = r.content()
        if ic > 1:
            result.content *= ic ** mult
            r = divide_exact(r, MultiPoly.const(ic))
        s = poly_sqrt(r)
        if s is not None and not s.is_constant():
            stack.append((s, 2 * mult))
            continue
        done = False
        for v in r.variables():
            if r.degree(v) == 1:
                a = r.coeff_of_power(v, 1)
                b = r.coeff_of_power(v, 0)
                if b.is_zero():
                    continue
                g = gcd(a, b)
                if not g.is_constant():
                    stack.append((g, mult))
                    stack.append((divide_exact(r, g), mult))
                else:
                    emit(r, mult)
                done = True
                break
        if done:
            continue
        for v in r.variables():
            if r.degree(v) == 2:
                a = r.coeff_of_power(v, 2)
                b = r.coeff_of_power(v, 1)
                cc = r.coeff_of_power(v, 0)
                disc = b * b - MultiPoly.const(4) * a * cc
                s = poly_sqrt(disc)
                if s is None:
                    continue
                two_a_x = MultiPoly.const(2) * a * MultiPoly.var(v)
                for cand in (two_a_x + b - s, two_a_x + b + s):
                    if cand.is_zero():
                        continue
                    cand = cand.normalized()
                    # strip the full polynomial content in v (Gauss primitive
                    # part): 2A x + B -+ s is 2*lc(f)*g for a split f*g
                    pcont = _coeff_content_gcd(cand, v)
                    if not pcont.is_constant() or abs(pcont.constant_value()) != 1:
                        cand = divide_exact(cand, pcont).normalized()
                    cc2 = cand.content()
                    if cc2 > 1:
                        cand = divide_exact(cand, MultiPoly.const(cc2))
                    quo = try_divide(r, cand)
                    if quo is not None and not quo.is_zero():
                        stack.append((cand, mult))
                        stack.append((quo, mult))
                        done = True
                        break
                if done:
                    break
        if done:
            continue
        for cand in norm_candidates:
            if cand == r:
                continue
            quo = try_divide(r, cand)
            if quo is not None:
                stack.append((cand, mult))
                stack.append((quo, mult))
                done = True
                break
        if done:
            continue
        emit(r, mult)

    result.factors = sorted(
        counts.items(), key=lambda fm: (fm[0].total_degree(), fm[0].render())
    )
    result.complete = all(_is_certified_irreducible(f) for f, _ in result.factors)
    assert result.product() == original, "factorization failed to reconstruct input"
    return result
