"""Changes of variable theta_*: a acts through theta(a), b through b theta'(a).

Three levels are provided: presentations (apply Theta to an annihilator),
matrix modules (alpha and beta as operators on coordinates, re-expanded in
powers of beta), and the Xi function model (substitute s = psi(t) with
psi the compositional inverse of theta).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .abalg import AbElement, ChangeOfVariable, _left_mul_beta, theta_endomorphism
from .scalar import ONE, ZERO, Scalar, format_scalar, inverse, scalar_pow, variables
from .series import TruncSeries
from .theme import (EMPTY, RANK3_ASSUMPTION, ThemeError, ThemeReport, a_powers, analyze, b_inverse_a,
                    char_poly_plus, induced_residue, lattices_equal, rank_of, saturate_lattice)
from .ximodel import (ABModule, SimplePoleModule, XiElement, abstract_to_function,
                      express_in_span, function_to_abstract, realize_in_xi)

Vector = List[TruncSeries]


# -- presentation level ------------------------------------------------------

def presentation_image(P: AbElement, theta: ChangeOfVariable) -> AbElement:
    """``Theta_(theta^-1)(P)``: annihilates the same generator read in theta_*(E).

    It is an a-series, a unit of the completed algebra times a monic
    presentation of rank ``P.a_degree()``.
    """
    W = P.weight_cap
    if theta.order < W:
        theta = _extend_cov(theta, W)
    return theta_endomorphism(theta.inverse(), P)


def pushforward_presentation(P: AbElement, theta: ChangeOfVariable, lam0, N: Optional[int] = None) -> AbElement:
    """Monic presentation of theta_*(A/AP).

    The unit factor of :func:`presentation_image` is removed by realizing it
    in Xi over ``lam0`` and taking the monic annihilator of the solution.
    """
    from .theme import annihilator_of
    k = P.a_degree()
    N = P.weight_cap - k if N is None else N
    psi = realize_in_xi(presentation_image(P, theta), lam0, N, rank=k).element
    return annihilator_of(psi, k).element


def _extend_cov(theta: ChangeOfVariable, W: int) -> ChangeOfVariable:
    # callers pass exact (polynomial) changes of variable here
    return ChangeOfVariable(TruncSeries(theta.theta.coeffs, W, "a"))


def pushforward_generator_by_presentation(phi: XiElement, theta: ChangeOfVariable,
                                          annihilator: Optional[AbElement] = None) -> XiElement:
    """Realize theta_*(A phi) inside Xi over the same base by solving ``Q psi = 0``."""
    from .theme import annihilator_of
    P = annihilator if annihilator is not None else annihilator_of(phi).element
    Q = presentation_image(P, theta)
    return realize_in_xi(Q, phi.lam0, phi.order, rank=P.a_degree()).element


# -- matrix level --------------------------------------------------------------

class CovAction:
    """alpha = theta(a) and beta = b theta'(a) on the coordinates of a simple-pole module."""

    def __init__(self, module: ABModule, theta: ChangeOfVariable, N: Optional[int] = None):
        if not module.is_simple_pole():
            raise ValueError("not simple pole: the a-series would not converge b-adically")
        self.N = module.order if N is None else N
        self.module = module
        th = theta.theta if theta.order >= self.N + 1 else _extend_cov(theta, self.N + 1).theta
        self.theta_coeffs = list(th.coeffs[: self.N + 1])
        self.dtheta_coeffs = list(th.derivative().coeffs[: self.N])
        self.r = theta.r
        self._beta_powers: Optional[List[List[Vector]]] = None

    def basis_vector(self, l: int) -> Vector:
        return [TruncSeries.one(self.N) if i == l else TruncSeries.zero(self.N) for i in range(self.module.rank)]

    def a_series(self, v: Vector, coeffs: Sequence[Scalar]) -> Vector:
        n = min([self.N] + [x.order for x in v])
        out = [TruncSeries.zero(n) for _ in v]
        cur = [c.truncate(n) for c in v]
        for c in coeffs:
            if all(x.is_zero() for x in cur):
                break
            if c != 0:
                out = [o + x.scale(c) for o, x in zip(out, cur)]
            cur = self.module.a_action(cur)
        return out

    def alpha(self, v: Vector) -> Vector:
        return self.a_series(v, self.theta_coeffs)

    def beta(self, v: Vector) -> Vector:
        return [x.shift(1) for x in self.a_series(v, self.dtheta_coeffs)]

    def beta_powers(self) -> List[List[Vector]]:
        """``B[q][l] = beta^q e_l`` for q < N."""
        if self._beta_powers is None:
            k = self.module.rank
            B = [[self.basis_vector(l) for l in range(k)]]
            for q in range(1, self.N):
                B.append([self.beta(v) for v in B[-1]])
            self._beta_powers = B
        return self._beta_powers

    def beta_coordinates(self, w: Vector) -> List[TruncSeries]:
        """Series c_l(beta) with ``w = sum_l c_l(beta) e_l``; triangular since beta^q e_l = r^q b^q e_l + ..."""
        B = self.beta_powers()
        k = self.module.rank
        w = [x.truncate(self.N) for x in w]
        coords = [[ZERO] * self.N for _ in range(k)]
        rinv = inverse(self.r)
        for q in range(self.N):
            for l in range(k):
                c = w[l].coeffs[q]
                if c == 0:
                    continue
                c = c * rinv ** q
                coords[l][q] = c
                w = [x - y.scale(c) for x, y in zip(w, B[q][l])]
        if any(not x.is_zero() for x in w):
            raise ArithmeticError("beta re-expansion left a residual")
        return [TruncSeries(c, self.N) for c in coords]

    def from_beta_coordinates(self, coords: Sequence[TruncSeries]) -> Vector:
        B = self.beta_powers()
        k = self.module.rank
        out = [TruncSeries.zero(self.N) for _ in range(k)]
        for l, c in enumerate(coords):
            for q in range(min(c.order, self.N)):
                if c.coeffs[q] != 0:
                    out = [o + y.scale(c.coeffs[q]) for o, y in zip(out, B[q][l])]
        return out

    def pushed_matrix(self) -> List[List[TruncSeries]]:
        k = self.module.rank
        cols = [self.beta_coordinates(self.alpha(self.basis_vector(j))) for j in range(k)]
        return [[cols[j][i] for j in range(k)] for i in range(k)]


def pushforward_simple_pole(E: ABModule, theta: ChangeOfVariable) -> SimplePoleModule:
    """Matrix of alpha in the C[[beta]]-basis e_1..e_k (beta written as b)."""
    return SimplePoleModule(CovAction(E, theta).pushed_matrix())


def rebase_b_powers(lam, theta: ChangeOfVariable, n: int, N: int) -> TruncSeries:
    """chi_n with ``b^n e_lam = beta^n chi_n(beta) e_lam``."""
    if n >= N:
        raise ValueError("need n < N")
    act = CovAction(SimplePoleModule.e_lambda(lam, N), theta)
    c = act.beta_coordinates([TruncSeries.monomial(n, N)])[0]
    return c.unshift(n)


@dataclass
class EigenvectorResult:
    S: TruncSeries
    R: TruncSeries
    residual_zero: bool


def eigenvector_after_cov(lam, theta: ChangeOfVariable, N: int) -> EigenvectorResult:
    """S_theta = exp(-int R_theta), where ``alpha e = lam beta e + beta^2 R_theta(beta) e``."""
    act = CovAction(SimplePoleModule.e_lambda(lam, N), theta)
    e = act.basis_vector(0)
    c = act.beta_coordinates(act.alpha(e))[0]
    R = (c - TruncSeries.monomial(1, N, lam)).unshift(2)
    S = R.primitive().scale(-1).exp()
    v = act.from_beta_coordinates([S])
    lhs = act.alpha(v)
    rhs = [x.scale(lam) for x in act.beta(v)]
    ok = all((x - y).truncate(S.order).is_zero() for x, y in zip(lhs, rhs))
    return EigenvectorResult(S, R, ok)


# -- the S_l(beta) alpha^l expansion --------------------------------------------

def _right_mul_a_series(u: AbElement, s: Sequence[Scalar]) -> AbElement:
    W = u.weight_cap
    out: Dict[Tuple[int, int], Scalar] = {}
    for (nu, j), c in u.terms.items():
        for m, sm in enumerate(s):
            if nu + j + m >= W:
                break
            if sm != 0:
                key = (nu, j + m)
                out[key] = out.get(key, ZERO) + c * sm
    return AbElement(out, W)


def rebase_series(S: TruncSeries, theta: ChangeOfVariable, W: int) -> Dict[int, TruncSeries]:
    """``S(b) = sum_l S_l(beta) alpha^l`` in the weight-truncated algebra.

    Weight-by-weight elimination: ``beta^nu alpha^l`` has leading part
    ``r^(nu+l) b^nu a^l``, so each weight level is solved by a diagonal scaling.
    """
    th = theta.theta if theta.order >= W else _extend_cov(theta, W).theta
    th = th.truncate(W)
    dth = th.derivative().coeffs
    pw = [TruncSeries.one(W, "a")]
    for _ in range(1, W):
        pw.append(pw[-1] * th)
    betas = [AbElement.one(W)]
    for _ in range(1, W):
        betas.append(_left_mul_beta(dth, betas[-1]))
    target = AbElement.from_series(S if S.order >= W else TruncSeries(S.coeffs, W), W)
    coeffs: Dict[Tuple[int, int], Scalar] = {}
    r = theta.r
    for w in range(W):
        for nu in range(w + 1):
            l = w - nu
            c = target.coefficient(nu, l)
            if c == 0:
                continue
            d = c * inverse(r) ** w
            coeffs[(nu, l)] = d
            target = target - _right_mul_a_series(betas[nu], pw[l].coeffs).scale(d)
    if not target.is_zero():
        raise ArithmeticError("weight elimination left a residual")
    out: Dict[int, TruncSeries] = {}
    for l in range(W):
        row = [coeffs.get((nu, l), ZERO) for nu in range(W - l)]
        out[l] = TruncSeries(row, W - l, "beta")
    return out


def reconstruct_from_rebased(parts: Dict[int, TruncSeries], theta: ChangeOfVariable, W: int) -> AbElement:
    th = theta.theta if theta.order >= W else _extend_cov(theta, W).theta
    th = th.truncate(W)
    dth = th.derivative().coeffs
    out = AbElement.zero(W)
    power = TruncSeries.one(W, "a")
    for l in range(W):
        Sl = parts.get(l)
        if Sl is not None and not Sl.is_zero():
            acc = AbElement.zero(W)
            for nu in range(Sl.order - 1, -1, -1):
                acc = _left_mul_beta(dth, acc) if not acc.is_zero() else acc
                if Sl.coeffs[nu] != 0:
                    acc = acc + AbElement.one(W).scale(Sl.coeffs[nu])
            out = out + _right_mul_a_series(acc, power.coeffs)
        power = power * th
    return out


# -- Xi substitution -----------------------------------------------------------

def pushforward_xi_substitution(phi: XiElement, psi: TruncSeries, N: Optional[int] = None) -> XiElement:
    """Re-expand phi after ``s = psi(t)``; the result lives in Xi over the same base, in t.

    ``s^(mu-1) = c^(mu-1) t^(mu-1) h(t)^(mu-1)`` with ``psi = c t h``, and
    ``Log s = Log t + log c + log h``.  The global factor ``c^(lam0-1)`` and the
    constant ``log c`` are dropped: both are automorphisms of Xi (a scaling and
    a shift of the log variable) commuting with a and b.
    """
    psi = psi.with_var("t")
    if psi.coeffs[0] != 0:
        raise ValueError("composition undefined: psi(0) != 0")
    c = psi.coeffs[1]
    cinv = inverse(c)
    N = min(phi.order, psi.order - 1) if N is None else N
    h = psi.unshift(1).scale(cinv).truncate(N)
    ell = h.log()
    ell_pows = [TruncSeries.one(N, "t")]
    L = phi.log_bound
    for _ in range(1, L):
        ell_pows.append(ell_pows[-1] * ell)
    terms = abstract_to_function(phi)
    lam0 = phi.lam0
    hpow: Dict[int, TruncSeries] = {}
    out: Dict[Tuple[int, int], Scalar] = {}
    for (m, i), coef in terms.items():
        if m >= N:
            continue
        if m not in hpow:
            hpow[m] = h.power(lam0 - 1 + m)
        base = hpow[m].scale(coef * c ** m)
        for l in range(i + 1):
            G = base * ell_pows[i - l].scale(ONE / factorial(i - l))
            for d in range(N - m):
                g = G.coeffs[d]
                if g != 0:
                    key = (m + d, l)
                    out[key] = out.get(key, ZERO) + g
    return function_to_abstract(out, lam0, N, L)


# -- thematic basis -------------------------------------------------------------

@dataclass
class ThematicBasisWitness:
    matrix: List[List[Scalar]]
    triangular: bool
    diagonal: List[Scalar]
    unitriangular: bool


def verify_thematic_basis(phi: XiElement, theta: ChangeOfVariable, k: Optional[int] = None) -> ThematicBasisWitness:
    """Transition matrix from {a^i phi} to {alpha^j phi} modulo beta."""
    k = rank_of(phi) if k is None else k
    phi = phi.components_slice(0, max(k, rank_of(phi)))
    N = phi.order
    pw = a_powers(phi, N)
    basis = pw[:k]
    th = theta.theta if theta.order >= N else _extend_cov(theta, N).theta
    power = TruncSeries.one(N, "a")
    M = [[ZERO] * k for _ in range(k)]
    for j in range(k):
        target = XiElement.zero(phi.lam0, phi.log_bound, N)
        for m in range(N):
            if power.coeffs[m] != 0:
                target = target + pw[m].scale(power.coeffs[m])
        try:
            sol = express_in_span(target, basis)
        except Exception as err:
            raise ThemeError("not k-thematic") from err
        for i in range(k):
            M[i][j] = sol.coefficients[i].coeffs[0]
        power = power * th.truncate(N)
    tri = all(M[i][j] == 0 for i in range(k) for j in range(k) if i < j)
    diag = [M[i][i] for i in range(k)]
    uni = tri and all(d == 1 for d in diag)
    return ThematicBasisWitness(M, tri, diag, uni)


# -- verification of the parameter transformation -------------------------------

@dataclass
class PushforwardReport:
    original: ThemeReport
    pushed: ThemeReport
    pushed_other: Optional[ThemeReport]
    r: Scalar
    expected: List[Optional[Scalar]]
    matches: List[bool]
    invariants_equal: bool
    routes_agree: Optional[bool]
    constant_in_parameters: Optional[bool]
    diffs: List[str] = field(default_factory=list)
    assumptions: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.invariants_equal and all(self.matches) and self.routes_agree is not False
                and self.constant_in_parameters is not False)

    def to_json(self) -> dict:
        def fmt(x):
            return None if x is EMPTY else format_scalar(x)
        d = {
            "original": self.original.to_json(),
            "pushed": self.pushed.to_json(),
            "r": format_scalar(self.r),
            "expected_params": [fmt(x) for x in self.expected],
            "matches": self.matches,
            "invariants_equal": self.invariants_equal,
            "routes_agree": self.routes_agree,
            "constant_in_parameters": self.constant_in_parameters,
            "diffs": self.diffs,
            "assumptions": self.assumptions,
            "ok": self.ok,
        }
        if self.pushed_other is not None:
            d["pushed_substitution"] = self.pushed_other.to_json()
        return d

    def to_text(self) -> str:
        def fmt(x):
            return "∅" if x is EMPTY else format_scalar(x)
        lines = ["original:"]
        lines += ["  " + s for s in self.original.to_text().splitlines()]
        lines.append("pushed:")
        lines += ["  " + s for s in self.pushed.to_text().splitlines()]
        lines.append(f"r: {format_scalar(self.r)}")
        lines.append("expected parameters: " + (", ".join(fmt(x) for x in self.expected) or "-"))
        lines.append("parameter matches: " + (", ".join(str(m).lower() for m in self.matches) or "-"))
        lines.append(f"invariants equal: {str(self.invariants_equal).lower()}")
        if self.routes_agree is not None:
            lines.append(f"routes agree: {str(self.routes_agree).lower()}")
        if self.constant_in_parameters is not None:
            lines.append(f"parameters constant in theta: {str(self.constant_in_parameters).lower()}")
        if self.original.rank == 1:
            lines.append(f"isomorphic to E_lambda: {str(self.invariants_equal and self.pushed.rank == 1).lower()}")
        for dline in self.diffs:
            lines.append(f"diff: {dline}")
        for a in self.assumptions:
            lines.append(f"assumption: {a}")
        return "\n".join(lines)


def verify_parameter_transform(phi: XiElement, theta: ChangeOfVariable,
                               routes: Sequence[str] = ("presentation", "substitution"),
                               theta_params: Sequence[str] = (),
                               phi_hi: Optional[XiElement] = None) -> PushforwardReport:
    """Analyze phi and theta_*(A phi) and compare.

    With the new a-action theta(a), a parameter alpha_j multiplies by
    r^(-p_j): for theta = r a the presentation letters rescale as
    a = a'/r, b = b'/r.  ``phi_hi``, the same generator at a higher order,
    feeds the presentation route, which loses precision in the annihilator.
    """
    original = analyze(phi)
    reports = {}
    if "presentation" in routes:
        src = phi if phi_hi is None else phi_hi
        ann = original.annihilator if phi_hi is None else None
        reports["presentation"] = analyze(pushforward_generator_by_presentation(src, theta, ann))
    if "substitution" in routes:
        reports["substitution"] = analyze(pushforward_xi_substitution(phi, theta.eta))
    first = reports[routes[0]]
    other = reports[routes[1]] if len(routes) > 1 else None
    r = theta.r
    diffs: List[str] = []
    expected = [EMPTY if a is EMPTY else a * scalar_pow(inverse(r), p) for a, p in zip(original.params, original.gaps)]
    matches = [x == y for x, y in zip(first.params, expected)] if len(first.params) == len(expected) else [False]
    for j, (x, y) in enumerate(zip(first.params, expected)):
        if x != y:
            diffs.append(f"parameter {j + 1}: pushed {_fmt(x)} expected {_fmt(y)}")
    inv_eq = (first.rank == original.rank and first.lambdas == original.lambdas and first.gaps == original.gaps)
    if not inv_eq:
        diffs.append(f"invariants: pushed {first.emitted()} original {original.emitted()}")
    agree = None
    if other is not None:
        agree = first.emitted() == other.emitted()
        if not agree:
            diffs.append(f"routes: {routes[0]} {first.emitted()} vs {routes[1]} {other.emitted()}")
    const = None
    if theta_params and r == 1:
        const = all(x is EMPTY or not (variables(x) & set(theta_params)) for x in first.params)
        if not const:
            diffs.append("pushed parameters depend on the change of variable")
    assumptions = list(first.assumptions)
    if original.rank >= 3 and original.rank3 is not None and first.rank3 is not None:
        if (original.rank3.u, original.rank3.alpha) != (first.rank3.u, first.rank3.alpha):
            assumptions.append(f"normal form ({_fmt(original.rank3.u)}, {_fmt(original.rank3.alpha)}) -> "
                               f"({_fmt(first.rank3.u)}, {_fmt(first.rank3.alpha)}): " + RANK3_ASSUMPTION)
    return PushforwardReport(original, first, other, r, expected, matches, inv_eq, agree, const, diffs, assumptions)


def _fmt(x) -> str:
    return "∅" if x is EMPTY else format_scalar(x)


# -- saturation compatibility ------------------------------------------------------

def cov_saturation_operator(act: CovAction) -> Callable[[Vector], Vector]:
    """``beta^-1 alpha = theta'(a)^-1 b^-1 theta(a)`` on the ambient coordinates."""
    inv = TruncSeries(act.dtheta_coeffs, act.N, "a").invert().coeffs

    def T(v: Vector) -> Vector:
        return act.a_series([x.unshift(1) for x in act.alpha(v)], inv)
    return T


@dataclass
class SaturationCheck:
    simple_pole: bool
    residue_equal: bool
    saturation_equal: bool
    bernstein: List[Scalar]
    bernstein_pushed: List[Scalar]

    @property
    def ok(self) -> bool:
        return (self.simple_pole and self.residue_equal and self.saturation_equal
                and self.bernstein == self.bernstein_pushed)


def saturation_compatibility(E: ABModule, theta: ChangeOfVariable, gens: Sequence[Vector]) -> SaturationCheck:
    """Compare theta_* with saturation for the lattice spanned by ``gens`` inside E.

    Both saturations live in the same ambient space: one iterates b^-1 a,
    the other beta^-1 alpha, and the results are compared by containment.
    """
    act = CovAction(E, theta)
    try:
        pushed = SimplePoleModule(act.pushed_matrix())
        simple = True
    except ValueError:
        return SaturationCheck(False, False, False, [], [])
    residue_equal = pushed.residue_matrix() == E.residue_matrix()
    T = b_inverse_a(E)
    Tb = cov_saturation_operator(act)
    S1 = saturate_lattice(gens, T)
    S2 = saturate_lattice(gens, Tb)
    same = lattices_equal(S1, S2)
    return SaturationCheck(simple, residue_equal, same,
                           char_poly_plus(induced_residue(S1, T)),
                           char_poly_plus(induced_residue(S2, Tb)))
