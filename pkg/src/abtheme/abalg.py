"""The algebra generated by a, b with ``ab - ba = b^2``, truncated by weight.

Elements are kept in the normal order ``sum_j c_j(b) a^j`` (series on the
left of a-powers).  Both a and b have weight 1 and the defining relation is
homogeneous, so discarding every term ``b^nu a^j`` with ``nu + j >= W`` is
compatible with multiplication on both sides.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .scalar import ONE, ZERO, Scalar, as_scalar, format_scalar, is_unit
from .series import TruncSeries

Key = Tuple[int, int]


class WeightCapError(ValueError):
    pass


@lru_cache(maxsize=None)
def _reorder(j: int, nu: int) -> Tuple[Tuple[int, int], ...]:
    """``a^j b^nu = sum_i coeff * b^(nu+i) a^(j-i)``; returns (i, coeff) pairs.

    Coefficients are C(j, i) * nu (nu+1) ... (nu+i-1).
    """
    out = []
    rising = 1
    for i in range(j + 1):
        if i:
            rising *= nu + i - 1
        c = comb(j, i) * rising
        if c:
            out.append((i, c))
    return tuple(out)


class AbElement:
    """Immutable truncated element ``sum c[nu, j] b^nu a^j``."""

    __slots__ = ("terms", "weight_cap")

    def __init__(self, terms: Mapping[Key, object], weight_cap: int):
        self.weight_cap = weight_cap
        self.terms: Dict[Key, Scalar] = {}
        for (nu, j), c in terms.items():
            if nu < 0 or j < 0:
                raise ValueError("negative exponent in AbElement")
            c = as_scalar(c)
            if c != 0 and nu + j < weight_cap:
                self.terms[(nu, j)] = c

    # -- constructors ------------------------------------------------
    @classmethod
    def zero(cls, W: int) -> "AbElement":
        return cls({}, W)

    @classmethod
    def one(cls, W: int) -> "AbElement":
        return cls({(0, 0): ONE}, W)

    @classmethod
    def a(cls, W: int) -> "AbElement":
        return cls({(0, 1): ONE}, W)

    @classmethod
    def b(cls, W: int) -> "AbElement":
        return cls({(1, 0): ONE}, W)

    @classmethod
    def a_power(cls, n: int, W: int) -> "AbElement":
        return cls({(0, n): ONE}, W)

    @classmethod
    def from_series(cls, s: TruncSeries, W: int, a_power: int = 0) -> "AbElement":
        """``s(b) a^a_power``; coefficients beyond the series order must not be needed."""
        need = W - a_power
        if need > s.order:
            raise WeightCapError(f"series of order {s.order} too short for weight cap {W}")
        return cls({(nu, a_power): s.coeffs[nu] for nu in range(max(need, 0))}, W)

    @classmethod
    def from_a_series(cls, s: TruncSeries, W: int) -> "AbElement":
        """A power series in a alone (an element of the a-adic completion)."""
        return cls({(0, j): s.coeffs[j] for j in range(min(W, s.order))}, W)

    @classmethod
    def from_columns(cls, cols: Sequence[TruncSeries], W: int) -> "AbElement":
        """``sum_j cols[j](b) a^j``."""
        terms = {}
        for j, s in enumerate(cols):
            for nu in range(min(s.order, W - j)):
                terms[(nu, j)] = s.coeffs[nu]
        return cls(terms, W)

    # -- views -------------------------------------------------------
    def a_degree(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def column(self, j: int) -> TruncSeries:
        """The b-series multiplying ``a^j``, at order ``W - j``."""
        n = max(self.weight_cap - j, 0)
        return TruncSeries([self.terms.get((nu, j), ZERO) for nu in range(n)], n)

    def columns(self) -> List[TruncSeries]:
        return [self.column(j) for j in range(self.a_degree() + 1)]

    def coefficient(self, nu: int, j: int) -> Scalar:
        return self.terms.get((nu, j), ZERO)

    def truncate(self, W: int) -> "AbElement":
        if W > self.weight_cap:
            raise WeightCapError(f"cannot raise weight cap {self.weight_cap} to {W}")
        return AbElement(self.terms, W)

    def is_zero(self) -> bool:
        return not self.terms

    # -- arithmetic --------------------------------------------------
    def _cap(self, other: "AbElement") -> int:
        return min(self.weight_cap, other.weight_cap)

    def __add__(self, other: "AbElement") -> "AbElement":
        W = self._cap(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return AbElement(out, W)

    def __neg__(self) -> "AbElement":
        return AbElement({k: -c for k, c in self.terms.items()}, self.weight_cap)

    def __sub__(self, other: "AbElement") -> "AbElement":
        return self + (-other)

    def scale(self, c) -> "AbElement":
        c = as_scalar(c)
        return AbElement({k: v * c for k, v in self.terms.items()}, self.weight_cap)

    def __mul__(self, other):
        if isinstance(other, AbElement):
            return normal_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "AbElement":
        out = AbElement.one(self.weight_cap)
        for _ in range(n):
            out = normal_mul(out, self)
        return out

    def left_series(self, s: TruncSeries) -> "AbElement":
        """``s(b) * self``; no reordering is needed."""
        out: Dict[Key, Scalar] = {}
        sc = s.coeffs
        for (nu, j), c in self.terms.items():
            for m in range(min(len(sc), self.weight_cap - nu - j)):
                if sc[m] != 0:
                    k = (nu + m, j)
                    out[k] = out.get(k, ZERO) + sc[m] * c
        if len(sc) < self.weight_cap - min((j for _, j in self.terms), default=0):
            W = min(self.weight_cap, len(sc) + min((nu + j for nu, j in self.terms), default=0))
            return AbElement(out, max(W, 0))
        return AbElement(out, self.weight_cap)

    def __eq__(self, other):
        if isinstance(other, AbElement):
            return self.weight_cap == other.weight_cap and self.terms == other.terms
        return NotImplemented

    def agrees_with(self, other: "AbElement", W: Optional[int] = None) -> bool:
        W = min(self.weight_cap, other.weight_cap) if W is None else W
        return self.truncate(W).terms == other.truncate(W).terms

    def __hash__(self):
        return hash((self.weight_cap, frozenset(self.terms.items())))

    def __repr__(self):
        return f"AbElement({self.to_text()!r}, W={self.weight_cap})"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (nu, j) in sorted(self.terms, key=lambda k: (k[1], k[0])):
            c = self.terms[(nu, j)]
            mono = []
            if nu:
                mono.append("b" if nu == 1 else f"b^{nu}")
            if j:
                mono.append("a" if j == 1 else f"a^{j}")
            txt = format_scalar(c)
            if " " in txt:
                txt = f"({txt})"
            if not mono:
                parts.append(txt)
            elif txt == "1":
                parts.append("*".join(mono))
            elif txt == "-1":
                parts.append("-" + "*".join(mono))
            else:
                parts.append(txt + "*" + "*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")

    def display_form(self) -> Dict[int, TruncSeries]:
        """Rewrite as ``sum_nu P_nu(a) b^nu`` (b on the right), for printing.

        Returns a map ``nu -> P_nu`` with P_nu a polynomial in a stored as a
        series in the variable ``a``.  Uses ``b^m a^j = sum_i (-1)^i C(j,i)
        m^(i) a^(j-i) b^(m+i)``, the mirror of the normal-order rule.
        """
        W = self.weight_cap
        out: Dict[int, List[Scalar]] = {}
        for (nu, j), c in self.terms.items():
            for i, k in _reorder(j, nu):
                coeff = c * (k if i % 2 == 0 else -k)
                if nu + i + j - i >= W:
                    continue
                row = out.setdefault(nu + i, [ZERO] * W)
                row[j - i] = row[j - i] + coeff
        return {nu: TruncSeries(row, W, "a") for nu, row in sorted(out.items()) if any(x != 0 for x in row)}


def normal_mul(u: AbElement, v: AbElement) -> AbElement:
    """Normal-ordered product, exact below the common weight cap."""
    W = min(u.weight_cap, v.weight_cap)
    out: Dict[Key, Scalar] = {}
    vt = list(v.terms.items())
    for (n1, j1), c1 in u.terms.items():
        w1 = n1 + j1
        if w1 >= W:
            continue
        for (n2, j2), c2 in vt:
            if w1 + n2 + j2 >= W:
                continue
            c12 = c1 * c2
            for i, k in _reorder(j1, n2):
                key = (n1 + n2 + i, j1 - i + j2)
                out[key] = out.get(key, ZERO) + c12 * k
    return AbElement(out, W)


def commutator(u: AbElement, v: AbElement) -> AbElement:
    return normal_mul(u, v) - normal_mul(v, u)


def anb_closed_form(n: int, W: int) -> AbElement:
    """``a^n b = sum_{p=1}^{n+1} n!/(n-p+1)! b^p a^(n-p+1)``."""
    if n + 2 > W:
        raise WeightCapError(f"insufficient weight cap: a^{n} b needs W >= {n + 2}, got {W}")
    terms = {}
    f = 1
    for p in range(1, n + 2):
        # n!/(n-p+1)! = n (n-1) ... (n-p+2)
        terms[(p, n - p + 1)] = Fraction(f)
        f *= n - p + 1
    return AbElement(terms, W)


# -- changes of variable ------------------------------------------------

class ChangeOfVariable:
    """``theta(a) = r a + theta_2 a^2 + ...`` with r a unit; caches the inverse."""

    def __init__(self, theta: TruncSeries):
        theta = theta.with_var("a")
        if theta.order < 2:
            raise ValueError("change of variable needs order >= 2")
        if theta.coeffs[0] != 0:
            raise ValueError("change of variable must satisfy theta(0) = 0")
        if not is_unit(theta.coeffs[1]):
            raise ValueError("change of variable needs a unit linear coefficient theta'(0)")
        self.theta = theta
        self._inverse: Optional[TruncSeries] = None

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, order: int) -> "ChangeOfVariable":
        return cls(TruncSeries(coeffs, order, "a"))

    @classmethod
    def identity(cls, order: int) -> "ChangeOfVariable":
        return cls(TruncSeries([0, 1], order, "a"))

    @property
    def order(self) -> int:
        return self.theta.order

    @property
    def r(self) -> Scalar:
        return self.theta.coeffs[1]

    @property
    def eta(self) -> TruncSeries:
        if self._inverse is None:
            self._inverse = self.theta.compositional_inverse()
        return self._inverse

    def inverse(self) -> "ChangeOfVariable":
        inv = ChangeOfVariable(self.eta)
        inv._inverse = self.theta
        return inv

    def then(self, other: "ChangeOfVariable") -> "ChangeOfVariable":
        """The change of variable ``other(self(a))``."""
        return ChangeOfVariable(other.theta.compose(self.theta))

    def is_identity(self) -> bool:
        return all(c == (ONE if m == 1 else ZERO) for m, c in enumerate(self.theta.coeffs))

    def derivative(self) -> TruncSeries:
        return self.theta.derivative()

    def __repr__(self):
        return f"ChangeOfVariable({self.theta.to_text()})"


def _left_mul_beta(d: Sequence[Scalar], u: AbElement) -> AbElement:
    """``b * theta'(a) * u`` where ``d`` holds the coefficients of theta'."""
    W = u.weight_cap
    out: Dict[Key, Scalar] = {}
    for (nu, j), c in u.terms.items():
        for m, dm in enumerate(d):
            if dm == 0:
                continue
            if 1 + m + nu + j >= W:
                break
            cc = c * dm
            for i, k in _reorder(m, nu):
                key = (1 + nu + i, m - i + j)
                out[key] = out.get(key, ZERO) + cc * k
    return AbElement(out, W)


def theta_endomorphism(theta: ChangeOfVariable, u: AbElement) -> AbElement:
    """Image of ``u`` under the unital map ``a -> theta(a)``, ``b -> b theta'(a)``.

    Evaluated by Horner's rule in b: ``u = sum_nu b^nu A_nu(a)`` maps to
    ``sum_nu beta^nu A_nu(theta(a))``; each ``A_nu(theta(a))`` is a pure
    a-series, so only the multiplications by beta need reordering.
    """
    W = u.weight_cap
    if theta.order < W:
        raise WeightCapError(f"change of variable of order {theta.order} is too short for W={W}")
    th = theta.theta.truncate(W)
    dth = th.derivative().coeffs
    # powers theta(a)^j as a-series
    powers = [TruncSeries.one(W, "a")]
    for _ in range(1, W):
        powers.append(powers[-1] * th)
    by_nu: Dict[int, List[Scalar]] = {}
    for (nu, j), c in u.terms.items():
        row = by_nu.setdefault(nu, [ZERO] * W)
        pj = powers[j].coeffs
        for m in range(W):
            if pj[m] != 0:
                row[m] = row[m] + c * pj[m]
    out = AbElement.zero(W)
    top = max(by_nu, default=-1)
    for nu in range(top, -1, -1):
        out = _left_mul_beta(dth, out) if not out.is_zero() else out
        row = by_nu.get(nu)
        if row is not None:
            out = out + AbElement({(0, m): row[m] for m in range(W)}, W)
    return out


def right_divide_linear(P: AbElement, nu) -> Tuple[AbElement, TruncSeries]:
    """``P = Q (a - nu b) + R`` with R a pure series in b.

    Descends on the a-degree; the identity holds to weight ``W - 1`` since
    each step consumes one unit of weight.
    """
    nu = as_scalar(nu)
    W = P.weight_cap
    lin = AbElement({(0, 1): ONE, (1, 0): -nu}, W)
    rem = P
    q_terms: Dict[Key, Scalar] = {}
    d = rem.a_degree()
    while d >= 1:
        col = {n: c for (n, j), c in rem.terms.items() if j == d}
        lead = AbElement({(n, d - 1): c for n, c in col.items()}, W)
        for k, c in lead.terms.items():
            q_terms[k] = q_terms.get(k, ZERO) + c
        rem = rem - normal_mul(lead, lin)
        nd = rem.a_degree()
        if nd >= d:
            raise ArithmeticError("right division did not lower the a-degree")
        d = nd
    Q = AbElement(q_terms, W)
    R = TruncSeries([rem.terms.get((n, 0), ZERO) for n in range(W)], W)
    return Q, R


def standard_form_compose(lambdas: Sequence, units: Sequence[TruncSeries], W: int) -> Tuple[AbElement, AbElement]:
    """``(a - l1 b) S1^-1 (a - l2 b) ... S_{k-1}^-1 (a - lk b)`` and its monic form.

    Returns ``(product, monic)`` where ``monic = (S1 ... S_{k-1}) * product``
    has leading coefficient exactly 1 on ``a^k``.
    """
    lambdas = [as_scalar(x) for x in lambdas]
    if len(lambdas) != len(units) + 1:
        raise ValueError("need exactly one unit series between consecutive linear factors")
    for s in units:
        if s.order == 0 or s.coeffs[0] != 1:
            raise ValueError("unit normalization violated: S_j(0) must be 1")
    prod = AbElement({(0, 1): ONE, (1, 0): -lambdas[0]}, W)
    left = TruncSeries.one(W)
    for lam, s in zip(lambdas[1:], units):
        s = _extend(s, W)
        prod = normal_mul(prod, AbElement.from_series(s.invert(), W))
        prod = normal_mul(prod, AbElement({(0, 1): ONE, (1, 0): -lam}, W))
        left = left * s
    monic = prod.left_series(left)
    return prod, monic


def _extend(s: TruncSeries, W: int) -> TruncSeries:
    """Pad an exactly-known (polynomial) series with zeros up to order W."""
    if s.order >= W:
        return s.truncate(W)
    return TruncSeries(s.coeffs, W, s.var)


def monic_normalize(P: AbElement) -> AbElement:
    """Left-multiply by the inverse of the leading series so ``a^k`` has coefficient 1."""
    k = P.a_degree()
    lead = P.column(k)
    if not is_unit(lead.coeffs[0]):
        raise ArithmeticError("leading coefficient is not a unit series")
    inv = lead.invert()
    return AbElement(P.left_series(TruncSeries(inv.coeffs, P.weight_cap)).terms, P.weight_cap - k)
