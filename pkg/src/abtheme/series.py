"""Truncated formal power series in one variable over exact scalars."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .scalar import ONE, ZERO, NotInvertible, Scalar, as_scalar, format_scalar, inverse, is_unit


class SeriesError(ArithmeticError):
    pass


INFINITE = float("inf")


class TruncSeries:
    """``sum c_m x^m`` known modulo ``x^order``.

    Immutable.  Binary operations truncate to the smaller of the two orders.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable, order: Optional[int] = None, var: str = "b"):
        cs = [as_scalar(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("negative truncation order")
            cs = cs[:order] + [ZERO] * (order - len(cs))
        self.coeffs = tuple(cs)
        self.var = var

    # -- constructors ------------------------------------------------
    @classmethod
    def zero(cls, order: int, var: str = "b") -> "TruncSeries":
        return cls((), order, var)

    @classmethod
    def one(cls, order: int, var: str = "b") -> "TruncSeries":
        return cls((ONE,), order, var)

    @classmethod
    def constant(cls, c, order: int, var: str = "b") -> "TruncSeries":
        return cls((c,), order, var)

    @classmethod
    def monomial(cls, n: int, order: int, c=ONE, var: str = "b") -> "TruncSeries":
        if n >= order:
            return cls.zero(order, var)
        return cls([ZERO] * n + [c], order, var)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, m: int) -> Scalar:
        if m >= len(self.coeffs):
            raise SeriesError(f"coefficient {m} is beyond truncation order {self.order}")
        return self.coeffs[m]

    def coeff(self, m: int) -> Scalar:
        return self[m]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def valuation(self):
        for m, c in enumerate(self.coeffs):
            if c != 0:
                return m
        return INFINITE

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise SeriesError(f"cannot raise truncation order {self.order} to {order}")
        return TruncSeries(self.coeffs[:order], var=self.var)

    def with_var(self, var: str) -> "TruncSeries":
        return TruncSeries(self.coeffs, var=var)

    # -- ring operations ---------------------------------------------
    def _common(self, other: "TruncSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.constant(other, self.order, self.var)
        n = self._common(other)
        return TruncSeries([self.coeffs[i] + other.coeffs[i] for i in range(n)], var=self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], var=self.var)

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.constant(other, self.order, self.var)
        n = self._common(other)
        return TruncSeries([self.coeffs[i] - other.coeffs[i] for i in range(n)], var=self.var)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        c = as_scalar(c)
        if c == 0:
            return TruncSeries.zero(self.order, self.var)
        return TruncSeries([x * c for x in self.coeffs], var=self.var)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        n = self._common(other)
        a, b = self.coeffs, other.coeffs
        nz_a = [(i, a[i]) for i in range(n) if a[i] != 0]
        nz_b = [(j, b[j]) for j in range(n) if b[j] != 0]
        out = [ZERO] * n
        for i, x in nz_a:
            for j, y in nz_b:
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + x * y
        return TruncSeries(out, var=self.var)

    __rmul__ = __mul__

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``x^k`` keeping the order."""
        if k == 0:
            return self
        return TruncSeries([ZERO] * k + list(self.coeffs[: max(self.order - k, 0)]), self.order, self.var)

    def mul_power(self, k: int) -> "TruncSeries":
        """Multiply by ``x^k``; the order rises by ``k``."""
        return TruncSeries([ZERO] * k + list(self.coeffs), self.order + k, self.var)

    def unshift(self, k: int) -> "TruncSeries":
        """Exact division by ``x^k``; the order drops by ``k``."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise SeriesError(f"series not divisible by {self.var}^{k}")
        return TruncSeries(self.coeffs[k:], var=self.var)

    def invert(self) -> "TruncSeries":
        c0 = self.coeffs[0] if self.coeffs else ZERO
        if not is_unit(c0):
            v = self.valuation()
            raise NotInvertible(f"series is not invertible: valuation {v}, constant term {format_scalar(c0)}")
        inv0 = inverse(c0)
        n = self.order
        out = [ZERO] * n
        out[0] = inv0
        a = self.coeffs
        for m in range(1, n):
            acc = ZERO
            for i in range(1, m + 1):
                if a[i] != 0:
                    acc = acc + a[i] * out[m - i]
            out[m] = -acc * inv0
        return TruncSeries(out, var=self.var)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.invert()
        return self.scale(inverse(as_scalar(other)))

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        out = TruncSeries.one(self.order, self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def agrees_with(self, other: "TruncSeries", order: Optional[int] = None) -> bool:
        n = min(self.order, other.order) if order is None else order
        return self.coeffs[:n] == other.coeffs[:n]

    def __hash__(self):
        return hash(self.coeffs)

    # -- calculus ----------------------------------------------------
    def derivative(self) -> "TruncSeries":
        return TruncSeries([m * self.coeffs[m] for m in range(1, self.order)], var=self.var)

    def primitive(self) -> "TruncSeries":
        """Primitive with zero constant term; order rises by one."""
        return TruncSeries([ZERO] + [c / (m + 1) for m, c in enumerate(self.coeffs)], var=self.var)

    def exp(self) -> "TruncSeries":
        if self.order and self.coeffs[0] != 0:
            raise SeriesError("exp undefined: nonzero constant term")
        # y' = s' y
        n = self.order
        ds = self.derivative().coeffs
        out = [ZERO] * n
        if n:
            out[0] = ONE
        for m in range(1, n):
            acc = ZERO
            for i in range(m):
                if ds[i] != 0:
                    acc = acc + ds[i] * out[m - 1 - i]
            out[m] = acc / m
        return TruncSeries(out, var=self.var)

    def log(self) -> "TruncSeries":
        """Logarithm of a series with constant term 1."""
        if not self.order or self.coeffs[0] != 1:
            raise SeriesError("log needs constant term 1")
        return (self.derivative() * self.truncate(self.order - 1).invert()).primitive()

    def power(self, q) -> "TruncSeries":
        """``self**q`` for rational ``q`` when the constant term is 1."""
        q = as_scalar(q)
        if not self.order or self.coeffs[0] != 1:
            raise SeriesError("rational powers need constant term 1")
        # (1 + x) y' = q x' y  solved coefficientwise
        n = self.order
        a = self.coeffs
        out = [ZERO] * n
        out[0] = ONE
        for m in range(1, n):
            acc = ZERO
            for i in range(1, m + 1):
                if a[i] != 0:
                    acc = acc + a[i] * out[m - i] * (q * i - (m - i))
            out[m] = acc / m
        return TruncSeries(out, var=self.var)

    # -- composition ---------------------------------------------------
    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        """``self(inner(x))``; requires ``inner(0) = 0``."""
        if inner.order and inner.coeffs[0] != 0:
            raise SeriesError("composition undefined: inner series has nonzero constant term")
        n = min(self.order, inner.order)
        out = TruncSeries.zero(n, inner.var)
        # Horner from the top
        for c in reversed(self.coeffs[:n]):
            out = out * inner.truncate(n) + c
        return out

    def compositional_inverse(self) -> "TruncSeries":
        if self.order and self.coeffs[0] != 0:
            raise SeriesError("composition undefined: series has nonzero constant term")
        if self.order < 2 or not is_unit(self.coeffs[1]):
            raise NotInvertible("not invertible for composition: linear coefficient is not a unit")
        n = self.order
        r_inv = inverse(self.coeffs[1])
        # solve self(eta(x)) = x order by order
        eta = [ZERO] * n
        eta[1] = r_inv
        for m in range(2, n):
            trial = TruncSeries(eta[:m] + [ZERO], m + 1, self.var)
            got = self.truncate(m + 1).compose(trial)
            eta[m] = -got.coeffs[m] * r_inv
        return TruncSeries(eta, var=self.var)

    # -- display -----------------------------------------------------
    def __repr__(self):
        return f"TruncSeries({self.to_text()!r}, order={self.order})"

    def to_text(self) -> str:
        parts = []
        for m, c in enumerate(self.coeffs):
            if c == 0:
                continue
            txt = format_scalar(c)
            if " " in txt:
                txt = f"({txt})"
            if m == 0:
                parts.append(txt)
            else:
                mono = self.var if m == 1 else f"{self.var}^{m}"
                if txt == "1":
                    parts.append(mono)
                elif txt == "-1":
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{txt}*{mono}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O({self.var}^{self.order})"


def series(coeffs: Sequence, order: int, var: str = "b") -> TruncSeries:
    return TruncSeries(coeffs, order, var)


# -- the three coefficient ODEs used to normalize rank-2 bases ----------

def _solve_first_order(rhs: TruncSeries, mult: Optional[TruncSeries] = None) -> TruncSeries:
    """Solve ``(1 + b*mult) y + b y' = rhs`` coefficientwise.

    Coefficient recurrence: ``(n+1) y_n = rhs_n - sum_i mult_i y_{n-1-i}``.
    """
    n = rhs.order
    out = [ZERO] * n
    m = mult.coeffs if mult is not None else ()
    for k in range(n):
        acc = rhs.coeffs[k]
        for i in range(min(k, len(m))):
            if m[i] != 0:
                acc = acc - m[i] * out[k - 1 - i]
        out[k] = acc / (k + 1)
    return TruncSeries(out, var=rhs.var)


def solve_ode(kind: str, *inputs: TruncSeries) -> TruncSeries:
    """Solve one of the normalizing ODEs.

    ``A``:       ``(1 + b S) U + b U' = -S``           inputs ``(S,)``
    ``Aprime``:  ``G + b G' = -S exp(Sigma)``          inputs ``(S,)``, Sigma the zero-constant primitive of S
    ``B``:       ``b V' + V = -U (1 + b T) - T``       inputs ``(U, T)``
    """
    if kind == "A":
        (s,) = inputs
        sigma = s.primitive().truncate(s.order)
        gamma = solve_ode("Aprime", s)
        return gamma * (-sigma).exp()
    if kind == "Aprime":
        (s,) = inputs
        sigma = s.primitive().truncate(s.order)
        return _solve_first_order(-(s * sigma.exp()))
    if kind == "B":
        u, t = inputs
        rhs = -(u * (t.shift(1) + 1)) - t
        return _solve_first_order(rhs)
    raise ValueError(f"unknown ODE kind {kind!r}")


def ode_residual(kind: str, solution: TruncSeries, *inputs: TruncSeries) -> TruncSeries:
    """Left side minus right side of the defining equation, at order ``N-1``."""
    n = solution.order - 1
    y = solution.truncate(n)
    dy = solution.derivative()
    if kind == "A":
        (s,) = inputs
        s = s.truncate(n)
        return y + s.shift(1) * y + dy.shift(1) + s
    if kind == "Aprime":
        (s,) = inputs
        sigma = s.primitive().truncate(n)
        return y + dy.shift(1) + s.truncate(n) * sigma.exp()
    if kind == "B":
        u, t = (x.truncate(n) for x in inputs)
        return dy.shift(1) + y + u * (t.shift(1) + 1) + t
    raise ValueError(f"unknown ODE kind {kind!r}")
