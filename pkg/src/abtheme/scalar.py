"""Exact scalars: rationals and polynomials over Q in named parameters.

A scalar is either a :class:`fractions.Fraction` or a :class:`Poly`.  Polys
that turn out to be constant are always collapsed back to ``Fraction`` so
that equality is a plain ``==``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

Monomial = Tuple[Tuple[str, int], ...]


class NotInvertible(ArithmeticError):
    pass


class Poly:
    """Sparse multivariate polynomial with Fraction coefficients.

    Monomials are sorted tuples of ``(name, exponent)`` pairs; zero
    coefficients are never stored.  Construct through :func:`param` or
    arithmetic, not directly.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[Monomial, Fraction]):
        self.terms = {m: c for m, c in terms.items() if c != 0}
        self._hash = None

    # -- helpers -----------------------------------------------------
    @staticmethod
    def _wrap(terms: Dict[Monomial, Fraction]) -> "Scalar":
        terms = {m: c for m, c in terms.items() if c != 0}
        if not terms:
            return Fraction(0)
        if len(terms) == 1 and () in terms:
            return terms[()]
        return Poly(terms)

    @staticmethod
    def _terms_of(x) -> Dict[Monomial, Fraction]:
        if isinstance(x, Poly):
            return x.terms
        if isinstance(x, (int, Fraction)):
            return {(): Fraction(x)} if x != 0 else {}
        raise TypeError(f"not a scalar: {x!r}")

    @staticmethod
    def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
        if not m1:
            return m2
        if not m2:
            return m1
        d = dict(m1)
        for name, e in m2:
            d[name] = d.get(name, 0) + e
        return tuple(sorted(d.items()))

    def variables(self) -> set:
        return {name for m in self.terms for name, _ in m}

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    # -- arithmetic --------------------------------------------------
    def __add__(self, other):
        try:
            o = Poly._terms_of(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.items():
            out[m] = out.get(m, 0) + c
        return Poly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            o = Poly._terms_of(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.items():
            out[m] = out.get(m, 0) - c
        return Poly._wrap(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = Poly._terms_of(other)
        except TypeError:
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.items():
                m = Poly._mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._wrap(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            raise NotInvertible(f"division by non-constant polynomial {other}")
        if other == 0:
            raise ZeroDivisionError("division by zero scalar")
        inv = 1 / Fraction(other)
        return Poly._wrap({m: c * inv for m, c in self.terms.items()})

    def __rtruediv__(self, other):
        raise NotInvertible(f"division by non-constant polynomial {self}")

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a natural exponent")
        out: Scalar = Fraction(1)
        base: Scalar = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return False  # canonical Polys are never constant
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"Poly({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    def substitute(self, values: Dict[str, "Scalar"]) -> "Scalar":
        out: Scalar = Fraction(0)
        for m, c in self.terms.items():
            t: Scalar = c
            for name, e in m:
                t = t * (values[name] ** e if name in values else param(name) ** e)
            out = out + t
        return out


Scalar = Union[Fraction, Poly]

ZERO = Fraction(0)
ONE = Fraction(1)


def param(name: str) -> Poly:
    return Poly({((name, 1),): Fraction(1)})


def as_scalar(x) -> Scalar:
    if isinstance(x, Poly):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to a scalar")


def is_unit(x: Scalar) -> bool:
    return not isinstance(x, Poly) and x != 0


def inverse(x: Scalar) -> Fraction:
    if isinstance(x, Poly):
        raise NotInvertible(f"{x} is not a unit scalar")
    if x == 0:
        raise NotInvertible("zero is not a unit scalar")
    return 1 / x


def is_constant(x: Scalar) -> bool:
    return not isinstance(x, Poly)


def variables(x: Scalar) -> set:
    return x.variables() if isinstance(x, Poly) else set()


def scalar_pow(x: Scalar, n: int) -> Scalar:
    if n >= 0:
        return x ** n
    return inverse(x) ** (-n)


def rising(x: Scalar, n: int) -> Scalar:
    """Rising factorial x (x+1) ... (x+n-1); empty product is 1."""
    out: Scalar = ONE
    for i in range(n):
        out = out * (x + i)
    return out


def _format_fraction(c: Fraction) -> str:
    return str(c)


def format_scalar(x: Scalar) -> str:
    if not isinstance(x, Poly):
        return _format_fraction(Fraction(x))
    parts = []
    # highest total degree first, then lexicographic
    for m in sorted(x.terms, key=lambda m: (-sum(e for _, e in m), m)):
        c = x.terms[m]
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)
        if not mono:
            body = _format_fraction(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{_format_fraction(abs(c))}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def scalar_sum(xs: Iterable[Scalar]) -> Scalar:
    out: Scalar = ZERO
    for x in xs:
        out = out + x
    return out
