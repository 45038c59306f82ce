"""The model module Xi over base exponent lam0, and matrix (a,b)-modules.

An element of Xi is ``sum_j g_j(b) x_j`` with ``x_j = s^(lam0-1) (Log s)^j / j!``.
In this model ``a`` is multiplication by ``s`` and ``b`` is the primitive
vanishing at 0, which gives

    a . (g x_j) = (lam0 b g + b^2 g') x_j + b g x_(j-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .abalg import AbElement
from .scalar import (ONE, ZERO, NotInvertible, Scalar, as_scalar, format_scalar, inverse,
                     is_constant, is_unit)
from .series import INFINITE, TruncSeries, solve_ode


class SpanError(ArithmeticError):
    """Raised when a vector is not in a span, or precision runs out."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class XiElement:
    __slots__ = ("lam0", "comps", "order")

    def __init__(self, lam0, comps: Sequence[TruncSeries], order: Optional[int] = None):
        lam0 = as_scalar(lam0)
        if not is_constant(lam0) or lam0 <= 0:
            raise ValueError(f"base exponent must be a positive rational, got {format_scalar(lam0)}")
        if not comps:
            raise ValueError("XiElement needs at least one component")
        if order is None:
            order = min(c.order for c in comps)
        self.lam0 = lam0
        self.order = order
        if any(c.order < order for c in comps):
            raise ValueError("component known to lower order than the element")
        self.comps = tuple(c.truncate(order) for c in comps)

    @classmethod
    def zero(cls, lam0, L: int, N: int) -> "XiElement":
        return cls(lam0, [TruncSeries.zero(N) for _ in range(L)], N)

    @classmethod
    def basis(cls, lam0, j: int, L: int, N: int) -> "XiElement":
        comps = [TruncSeries.zero(N) for _ in range(L)]
        comps[j] = TruncSeries.one(N)
        return cls(lam0, comps, N)

    @property
    def log_bound(self) -> int:
        return len(self.comps)

    def top_index(self) -> int:
        for j in range(len(self.comps) - 1, -1, -1):
            if not self.comps[j].is_zero():
                return j
        return -1

    def is_zero(self) -> bool:
        return self.top_index() < 0

    def _check(self, other: "XiElement"):
        if self.lam0 != other.lam0 or len(self.comps) != len(other.comps):
            raise ValueError("Xi elements over different bases")

    def __add__(self, other: "XiElement") -> "XiElement":
        self._check(other)
        return XiElement(self.lam0, [x + y for x, y in zip(self.comps, other.comps)])

    def __sub__(self, other: "XiElement") -> "XiElement":
        self._check(other)
        return XiElement(self.lam0, [x - y for x, y in zip(self.comps, other.comps)])

    def __neg__(self):
        return XiElement(self.lam0, [-c for c in self.comps], self.order)

    def scale(self, c) -> "XiElement":
        return XiElement(self.lam0, [g.scale(c) for g in self.comps], self.order)

    def series_action(self, S: TruncSeries) -> "XiElement":
        return XiElement(self.lam0, [S * g for g in self.comps])

    def b_action(self, n: int = 1) -> "XiElement":
        return XiElement(self.lam0, [g.shift(n) for g in self.comps], self.order)

    def a_action(self) -> "XiElement":
        N = self.order
        out = []
        L = len(self.comps)
        for j, g in enumerate(self.comps):
            h = g.scale(self.lam0).shift(1) + g.derivative().mul_power(2).truncate(N)
            if j + 1 < L:
                h = h + self.comps[j + 1].shift(1)
            out.append(h.truncate(N))
        return XiElement(self.lam0, out, N)

    def ab_action(self, u: AbElement) -> "XiElement":
        """Action of a normal-ordered element ``sum c_j(b) a^j``."""
        out = XiElement.zero(self.lam0, len(self.comps), self.order)
        cur = self
        for j in range(u.a_degree() + 1):
            col = u.column(j)
            if not col.is_zero():
                out = out + cur.series_action(_pad(col, self.order))
            if j < u.a_degree():
                cur = cur.a_action()
        # terms of weight >= W were dropped from u; beyond that order the result is unknown
        return out.truncate(min(self.order, u.weight_cap))

    def truncate(self, N: int) -> "XiElement":
        return XiElement(self.lam0, [c.truncate(N) for c in self.comps], N)

    def with_log_bound(self, L: int) -> "XiElement":
        if L < self.top_index() + 1:
            raise ValueError("log bound smaller than the element's log degree")
        comps = list(self.comps[:L]) + [TruncSeries.zero(self.order) for _ in range(L - len(self.comps))]
        return XiElement(self.lam0, comps, self.order)

    def components_slice(self, lo: int, hi: int) -> "XiElement":
        """Keep components lo..hi-1 and reindex them from 0 (quotient by lower logs)."""
        return XiElement(self.lam0, self.comps[lo:hi], self.order)

    def __eq__(self, other):
        if not isinstance(other, XiElement):
            return NotImplemented
        return self.lam0 == other.lam0 and self.order == other.order and self.comps == other.comps

    def agrees_with(self, other: "XiElement") -> bool:
        self._check(other)
        return all(x.agrees_with(y) for x, y in zip(self.comps, other.comps))

    def __hash__(self):
        return hash((self.lam0, self.order, self.comps))

    def to_text(self) -> str:
        parts = []
        for j, g in enumerate(self.comps):
            if not g.is_zero():
                parts.append(f"({g.to_text()})*x{j}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"XiElement(lam0={format_scalar(self.lam0)}, {self.to_text()})"


def _pad(s: TruncSeries, N: int) -> TruncSeries:
    if s.order >= N:
        return s.truncate(N)
    # only legitimate for series known to vanish beyond their order, e.g. shifted exact data
    return TruncSeries(s.coeffs, N, s.var)


def monomial_to_abstract(m: int, i: int, lam0, N: int, L: Optional[int] = None) -> XiElement:
    """``s^(lam0+m-1) (Log s)^i / i!`` as ``a^m x_i``."""
    L = i + 1 if L is None else L
    x = XiElement.basis(lam0, i, L, N)
    for _ in range(m):
        x = x.a_action()
    return x


# -- function model ----------------------------------------------------
# A function is a dict (m, i) -> c meaning c * s^(lam0+m-1) (Log s)^i / i!.

FunctionTerms = Dict[Tuple[int, int], Scalar]


def function_to_abstract(terms: FunctionTerms, lam0, N: int, L: int) -> XiElement:
    out = XiElement.zero(lam0, L, N)
    cache: Dict[int, List[XiElement]] = {}
    for (m, i), c in terms.items():
        if m >= N or c == 0:
            continue
        if i not in cache:
            x = XiElement.basis(lam0, i, L, N)
            cache[i] = [x]
        chain = cache[i]
        while len(chain) <= m:
            chain.append(chain[-1].a_action())
        out = out + chain[m].scale(c)
    return out


def abstract_to_function(x: XiElement) -> FunctionTerms:
    """Expand into s-monomials; exact below s-degree ``lam0 - 1 + order``.

    Uses ``b (s^(mu-1) L_j) = s^mu sum_i (-1)^(j-i) L_i / mu^(j-i+1)`` with
    ``L_j = (Log s)^j / j!``.
    """
    out: FunctionTerms = {}
    lam0 = x.lam0
    for j, g in enumerate(x.comps):
        # vec holds the current b^n x_j as dict log-index -> coeff at s-shift n
        vec = {j: ONE}
        for n in range(x.order):
            if n > 0:
                mu = lam0 + n - 1
                new: Dict[int, Scalar] = {}
                for jj, c in vec.items():
                    for i in range(jj + 1):
                        k = jj - i
                        coeff = c * (ONE if k % 2 == 0 else -ONE) / mu ** (k + 1)
                        new[i] = new.get(i, ZERO) + coeff
                vec = new
            gn = g.coeffs[n]
            if gn == 0:
                continue
            for i, c in vec.items():
                if c != 0:
                    out[(n, i)] = out.get((n, i), ZERO) + gn * c
    return {k: v for k, v in out.items() if v != 0}


# -- span solving over the truncated DVR C[[b]] --------------------------

@dataclass
class SpanSolution:
    coefficients: List[TruncSeries]
    effective_order: int
    valuation_loss: int


def _lead(s: TruncSeries) -> Tuple[float, Scalar]:
    v = s.valuation()
    return v, (s.coeffs[v] if v != INFINITE else ZERO)


def express_in_span(x: XiElement, basis: Sequence[XiElement]) -> SpanSolution:
    """Coefficients c_i(b) with ``x = sum c_i basis_i`` at the reachable order."""
    for y in basis:
        x._check(y)
    try:
        return solve_in_span(list(x.comps), [list(y.comps) for y in basis])
    except SpanError as err:
        if err.residual is not None:
            err.residual = XiElement(x.lam0, err.residual)
        raise


def solve_in_span(vec: Sequence[TruncSeries], basis: Sequence[Sequence[TruncSeries]]) -> SpanSolution:
    """Same as :func:`express_in_span` on raw coordinate vectors.

    Column echelon elimination with pivots of least valuation; every division
    by a pivot of valuation e costs e orders of precision, which the series
    arithmetic records.  Non-unit (parametric) pivots are rejected.
    """
    k = len(basis)
    if not k:
        if all(c.is_zero() for c in vec):
            return SpanSolution([], min(c.order for c in vec), 0)
        raise SpanError("not in span at available order", list(vec))
    L = len(vec)
    cols = [list(y) for y in basis]
    N = min([c.order for c in vec] + [c.order for y in basis for c in y])
    T = [[TruncSeries.one(N) if i == c else TruncSeries.zero(N) for c in range(k)] for i in range(k)]
    pivots: List[Tuple[int, int, int]] = []  # (row, col, valuation)
    free = list(range(k))
    loss = 0
    for r in range(L - 1, -1, -1):
        cand = []
        for c in free:
            v, lc = _lead(cols[c][r])
            if v != INFINITE:
                cand.append((v, 0 if is_unit(lc) else 1, c))
        if not cand:
            continue
        cand.sort()
        v, nonunit, pc = cand[0]
        if nonunit:
            raise NotInvertible("pivot with a non-unit leading coefficient; specialize the parameters")
        v = int(v)
        loss += v
        pu = cols[pc][r].unshift(v)
        for c in free:
            if c == pc or cols[c][r].is_zero():
                continue
            q = cols[c][r].unshift(v) / pu
            cols[c] = [cc - q * pp for cc, pp in zip(cols[c], cols[pc])]
            for row in T:
                row[c] = row[c] - q * row[pc]
        free.remove(pc)
        pivots.append((r, pc, v))
    resid = list(vec)
    d: Dict[int, TruncSeries] = {}
    for r, pc, v in pivots:
        xr = resid[r]
        if not xr.is_zero() and xr.valuation() < v:
            raise SpanError("not in span at available order", resid)
        if xr.order - v <= 0:
            raise SpanError("effective order exhausted")
        q = xr.unshift(v) / cols[pc][r].unshift(v)
        d[pc] = q
        resid = [rr - q * cc for rr, cc in zip(resid, cols[pc])]
    for rr in resid:
        if not rr.is_zero():
            raise SpanError("not in span at available order", resid)
    coeffs = []
    for i in range(k):
        acc = None
        for c, q in d.items():
            term = T[i][c] * q
            acc = term if acc is None else acc + term
        coeffs.append(acc if acc is not None else TruncSeries.zero(N))
    eff = min(c.order for c in coeffs)
    if eff <= 0:
        raise SpanError("effective order exhausted")
    return SpanSolution([c.truncate(eff) for c in coeffs], eff, loss)


def echelon_basis(gens: Sequence[Sequence[TruncSeries]]) -> Tuple[List[List[TruncSeries]], List[int]]:
    """Reduce a generating family of a C[[b]]-lattice to a column echelon basis.

    Returns the basis vectors and their pivot valuations; the lattice index
    (colength in the ambient free module) is the sum of the valuations.
    """
    cols = [list(g) for g in gens]
    if not cols:
        return [], []
    L = len(cols[0])
    free = list(range(len(cols)))
    out, vals = [], []
    for r in range(L - 1, -1, -1):
        cand = []
        for c in free:
            v, lc = _lead(cols[c][r])
            if v != INFINITE:
                cand.append((v, 0 if is_unit(lc) else 1, c))
        if not cand:
            continue
        cand.sort()
        v, nonunit, pc = cand[0]
        if nonunit:
            raise NotInvertible("pivot with a non-unit leading coefficient; specialize the parameters")
        v = int(v)
        pu = cols[pc][r].unshift(v)
        for c in free:
            if c == pc or cols[c][r].is_zero():
                continue
            q = cols[c][r].unshift(v) / pu
            cols[c] = [cc - q * pp for cc, pp in zip(cols[c], cols[pc])]
        free.remove(pc)
        out.append(cols[pc])
        vals.append(v)
    return out, vals


def recombine(coeffs: Sequence[TruncSeries], basis: Sequence[XiElement]) -> XiElement:
    out = None
    for c, y in zip(coeffs, basis):
        term = y.series_action(c)
        out = term if out is None else out + term
    return out


# -- matrix (a,b)-modules ------------------------------------------------

class ABModule:
    """Free C[[b]]-module with basis e_1..e_k and ``a e_j = sum_i A[i][j] e_i``.

    Elements are coordinate lists of series; the a-action follows the
    Leibniz rule ``a (S e) = S (a e) + b^2 S' e``.
    """

    def __init__(self, matrix: Sequence[Sequence[TruncSeries]]):
        k = len(matrix)
        if k == 0 or any(len(row) != k for row in matrix):
            raise ValueError("action matrix must be square and nonempty")
        self.matrix = [list(row) for row in matrix]
        self.rank = k
        self.order = min(s.order for row in matrix for s in row)

    def entry(self, i: int, j: int) -> TruncSeries:
        return self.matrix[i][j]

    def is_simple_pole(self) -> bool:
        return all(s.is_zero() or s.valuation() >= 1 for row in self.matrix for s in row)

    def a_action(self, vec: Sequence[TruncSeries]) -> List[TruncSeries]:
        k = self.rank
        N = min([self.order] + [v.order for v in vec])
        out = [vec[i].derivative().mul_power(2).truncate(N) for i in range(k)]
        for j in range(k):
            if vec[j].is_zero():
                continue
            for i in range(k):
                out[i] = out[i] + (vec[j] * self.matrix[i][j])
        return [o.truncate(min(o.order, N)) for o in out]

    def mod_b_matrix(self) -> List[List[Scalar]]:
        return [[s.coeffs[0] for s in row] for row in self.matrix]

    def residue_matrix(self) -> List[List[Scalar]]:
        """Coefficient of b in the action matrix: the action of b^-1 a on E/bE."""
        return [[s.coeffs[1] if s.order > 1 else ZERO for s in row] for row in self.matrix]

    def truncate(self, N: int) -> "ABModule":
        return type(self)([[s.truncate(N) for s in row] for row in self.matrix])

    def __repr__(self):
        rows = ["[" + ", ".join(s.to_text() for s in row) + "]" for row in self.matrix]
        return f"{type(self).__name__}([{'; '.join(rows)}])"


class SimplePoleModule(ABModule):
    def __init__(self, matrix):
        super().__init__(matrix)
        if not self.is_simple_pole():
            raise ValueError("not simple pole: some action entry has a nonzero constant term")

    @classmethod
    def e_lambda(cls, lam, N: int) -> "SimplePoleModule":
        return cls([[TruncSeries.monomial(1, N, as_scalar(lam))]])

    @classmethod
    def xi(cls, lam0, L: int, N: int) -> "SimplePoleModule":
        """Xi^(L-1) over lam0 as a matrix module: A_jj = lam0 b, A_(j-1,j) = b."""
        lam0 = as_scalar(lam0)
        M = [[TruncSeries.zero(N) for _ in range(L)] for _ in range(L)]
        for j in range(L):
            M[j][j] = TruncSeries.monomial(1, N, lam0)
            if j:
                M[j - 1][j] = TruncSeries.monomial(1, N)
        return cls(M)

    @classmethod
    def direct_sum(cls, *mods: ABModule) -> "SimplePoleModule":
        k = sum(m.rank for m in mods)
        N = min(m.order for m in mods)
        M = [[TruncSeries.zero(N) for _ in range(k)] for _ in range(k)]
        off = 0
        for m in mods:
            for i in range(m.rank):
                for j in range(m.rank):
                    M[off + i][off + j] = m.matrix[i][j].truncate(N)
            off += m.rank
        return cls(M)


# -- exact scalar linear algebra ---------------------------------------

def rank_of_matrix(rows: Sequence[Sequence[Scalar]]) -> int:
    return len(row_echelon([list(r) for r in rows])[1])


def row_echelon(rows: List[List[Scalar]]) -> Tuple[List[List[Scalar]], List[int]]:
    """Reduced row echelon form over Q (unit pivots only); returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncol = len(rows[0])
    pivcols = []
    r = 0
    for c in range(ncol):
        p = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                if not is_unit(rows[i][c]):
                    raise NotInvertible("parametric pivot in scalar elimination")
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = inverse(rows[r][c])
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        pivcols.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivcols


def solve_sparse(equations: Sequence[Dict[object, Scalar]], rhs: Sequence[Scalar],
                 key=None) -> Optional[Dict[object, Scalar]]:
    """Solve a sparse linear system exactly; free variables are set to 0.

    Each equation is a dict variable -> coefficient.  Pivots must be units;
    among those, the variable maximizing ``key`` is preferred.  Returns None
    when the system is inconsistent.
    """
    pivots: Dict[object, Tuple[Dict[object, Scalar], Scalar]] = {}
    order: List[object] = []
    for eq, r in zip(equations, rhs):
        eq = {v: c for v, c in eq.items() if c != 0}
        r = as_scalar(r)
        # reduce by existing pivots
        changed = True
        while changed:
            changed = False
            for v in list(eq):
                if v in pivots and eq.get(v, 0) != 0:
                    prow, pr = pivots[v]
                    f = eq[v]
                    for w, cw in prow.items():
                        nv = eq.get(w, ZERO) - f * cw
                        if nv == 0:
                            eq.pop(w, None)
                        else:
                            eq[w] = nv
                    r = r - f * pr
                    changed = True
        if not eq:
            if r != 0:
                return None
            continue
        units = [v for v, c in eq.items() if is_unit(c)]
        if not units:
            raise NotInvertible("parametric pivot in sparse elimination")
        pv = max(units, key=key) if key is not None else units[0]
        inv = inverse(eq[pv])
        prow = {w: c * inv for w, c in eq.items()}
        pr = r * inv
        # eliminate pv from existing pivot rows
        for v in order:
            row, rr = pivots[v]
            if pv in row:
                f = row[pv]
                for w, cw in prow.items():
                    nv = row.get(w, ZERO) - f * cw
                    if nv == 0:
                        row.pop(w, None)
                    else:
                        row[w] = nv
                pivots[v] = (row, rr - f * pr)
        pivots[pv] = (prow, pr)
        order.append(pv)
    sol: Dict[object, Scalar] = {}
    for v in order:
        # free variables are zero, so each pivot takes its reduced right-hand side
        sol[v] = pivots[v][1]
    return sol


# -- realizing a presentation inside Xi --------------------------------

def _a_power_table(lam0: Scalar, n: int, kmax: int) -> List[List[Scalar]]:
    """K[i][l] with ``a^i (b^n x_j) = b^(n+i) sum_l K[i][l] x_(j-l)``."""
    K = [[ONE]]
    for i in range(kmax):
        prev = K[-1]
        row = [ZERO] * (len(prev) + 1)
        for l, c in enumerate(prev):
            row[l] = row[l] + (lam0 + n + i) * c
            row[l + 1] = row[l + 1] + c
        K.append(row)
    return K


def indicial_values(Q: AbElement, lam0, N: int) -> List[int]:
    """Valuations v < N at which the top-log equation of ``Q phi = 0`` can start."""
    lam0 = as_scalar(lam0)
    terms = Q.terms
    w = min(nu + i for nu, i in terms)
    out = []
    for n in range(N):
        K = _a_power_table(lam0, n, Q.a_degree())
        val = sum((c * K[i][0] for (nu, i), c in terms.items() if nu + i == w), ZERO)
        if val == 0:
            out.append(n)
    return out


@dataclass
class Realization:
    element: XiElement
    top_valuation: int
    effective_order: int


def realize_in_xi(Q: AbElement, lam0, N: int, rank: Optional[int] = None) -> Realization:
    """Find phi in Xi_lam0 of log degree k-1 with ``Q phi = 0``.

    ``rank`` defaults to the a-degree of Q; pass it when Q is a unit multiple
    of a monic presentation (an a-series rather than a polynomial).

    The top-log component is normalized to ``b^v + (higher terms)`` and the
    first consistent v is used; remaining free coordinates are set to zero.
    Any such phi has rank k, so ``A phi`` is isomorphic to ``A / A Q``.
    """
    lam0 = as_scalar(lam0)
    deg = Q.a_degree()
    k = deg if rank is None else rank
    W = Q.weight_cap
    wmin = min(nu + i for nu, i in Q.terms)
    M = min(W, N + wmin)
    n_unknown = M - wmin
    if n_unknown <= 0:
        raise SpanError("effective order exhausted")
    tables = [_a_power_table(lam0, n, deg) for n in range(n_unknown)]
    # column contributions: (j, n) -> {(comp, m): coeff}
    contrib: Dict[Tuple[int, int], Dict[Tuple[int, int], Scalar]] = {}
    for j in range(k):
        for n in range(n_unknown):
            col: Dict[Tuple[int, int], Scalar] = {}
            K = tables[n]
            for (nu, i), c in Q.terms.items():
                m = nu + n + i
                if m >= M:
                    continue
                for l in range(min(i, j) + 1):
                    kv = K[i][l]
                    if kv != 0:
                        key = (j - l, m)
                        col[key] = col.get(key, ZERO) + c * kv
            contrib[(j, n)] = col
    for v in indicial_values(Q, lam0, n_unknown):
        eqs: Dict[Tuple[int, int], Dict[Tuple[int, int], Scalar]] = {}
        rhs: Dict[Tuple[int, int], Scalar] = {}
        for (j, n), col in contrib.items():
            if j == k - 1 and n <= v:
                if n == v:
                    for key, c in col.items():
                        rhs[key] = rhs.get(key, ZERO) - c
                continue
            for key, c in col.items():
                eqs.setdefault(key, {})[(j, n)] = c
        keys = sorted(set(eqs) | set(rhs), key=lambda t: (t[1], -t[0]))
        sol = solve_sparse([eqs.get(t, {}) for t in keys], [rhs.get(t, ZERO) for t in keys],
                           key=lambda var: (var[1], var[0]))
        if sol is None:
            continue
        comps = []
        for j in range(k):
            coeffs = [sol.get((j, n), ZERO) for n in range(n_unknown)]
            if j == k - 1:
                coeffs[v] = ONE
            comps.append(TruncSeries(coeffs, n_unknown))
        return Realization(XiElement(lam0, comps, n_unknown), v, n_unknown)
    raise SpanError("no realization of the presentation in this Xi at available order")


@dataclass
class JordanBasis:
    module: SimplePoleModule
    eps1: List[TruncSeries]
    eps2: List[TruncSeries]
    U: TruncSeries
    V: TruncSeries

    def residuals(self, lam) -> Tuple[List[TruncSeries], List[TruncSeries]]:
        """``a eps1 - lam b eps1 - b eps2`` and ``a eps2 - lam b eps2``."""
        m = self.module
        r1 = [x - y.scale(lam).shift(1) - z.shift(1)
              for x, y, z in zip(m.a_action(self.eps1), self.eps1, self.eps2)]
        r2 = [x - y.scale(lam).shift(1) for x, y in zip(m.a_action(self.eps2), self.eps2)]
        return r1, r2


def jordan_basis_rank2(lam, S: TruncSeries, T: TruncSeries) -> JordanBasis:
    """Normalize ``a e1 = lam b e1 + b e2 + b^2 S e1 + b^2 T e2``, ``a e2 = lam b e2``.

    ``eps1 = (1 + b U) e1 + b V e2`` with U from ODE (A) and V from (B);
    ``eps2 = e2``.  Module coordinates are kept at the order of S and T.
    """
    lam = as_scalar(lam)
    N = min(S.order, T.order)
    S, T = S.truncate(N), T.truncate(N)
    M = N
    A = [[TruncSeries.monomial(1, M, lam) + S.shift(2), TruncSeries.zero(M)],
         [TruncSeries.monomial(1, M) + T.shift(2), TruncSeries.monomial(1, M, lam)]]
    mod = SimplePoleModule(A)
    U = solve_ode("A", S)
    V = solve_ode("B", U, T)
    n = min(U.order + 1, V.order + 1, M)
    eps1 = [TruncSeries.one(n) + U.shift(1).truncate(n), V.shift(1).truncate(n)]
    eps2 = [TruncSeries.zero(n), TruncSeries.one(n)]
    return JordanBasis(mod, eps1, eps2, U, V)
