"""Analysis of [lambda]-primitive themes: rank, annihilator, Jordan-Hoelder
filtration, fundamental invariants, parameters, saturation and the
Bernstein polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .abalg import AbElement, right_divide_linear, standard_form_compose
from .scalar import ONE, ZERO, Scalar, as_scalar, format_scalar, inverse, is_constant
from .series import TruncSeries
from .ximodel import (ABModule, SpanError, XiElement, echelon_basis, express_in_span,
                      monomial_to_abstract, rank_of_matrix, realize_in_xi, solve_in_span)

EMPTY = None  # the parameter of a rank-2 theme with p = 0

RANK3_ASSUMPTION = "non-isomorphic under the [B.09b] Prop 3.3.6 uniqueness assumption"


class ThemeError(ArithmeticError):
    pass


class OrderInsufficient(ArithmeticError):
    pass


def rank_of(phi: XiElement) -> int:
    top = phi.top_index()
    if top < 0:
        raise ThemeError("zero generator")
    return top + 1


def a_powers(phi: XiElement, n: int) -> List[XiElement]:
    out = [phi]
    for _ in range(n - 1):
        out.append(out[-1].a_action())
    return out


@dataclass
class Annihilator:
    element: AbElement
    effective_order: int


def annihilator_of(phi: XiElement, k: Optional[int] = None) -> Annihilator:
    """Monic ``P = a^k - sum c_j(b) a^j`` with ``P phi = 0``."""
    k = rank_of(phi) if k is None else k
    pw = a_powers(phi, k + 1)
    try:
        sol = express_in_span(pw[k], pw[:k])
    except SpanError as err:
        raise ThemeError(f"generator does not have rank {k} at this order") from err
    W = min(c.order + j for j, c in enumerate(sol.coefficients))
    W = max(W, k + 1)
    terms = {(0, k): ONE}
    for j, c in enumerate(sol.coefficients):
        for nu in range(min(c.order, W - j)):
            if c.coeffs[nu] != 0:
                terms[(nu, j)] = -c.coeffs[nu]
    return Annihilator(AbElement(terms, W), sol.effective_order)


def top_lambda(phi: XiElement) -> Scalar:
    top = phi.comps[rank_of(phi) - 1]
    return phi.lam0 + int(top.valuation())


# -- Jordan-Hoelder filtration -------------------------------------------

@dataclass
class Stage:
    generator: XiElement
    exponent: Scalar


def _mod_b_class_generator(kappa: List[XiElement]) -> XiElement:
    """Pick a kappa_i with nonzero class modulo aF + bF, or fail."""
    n = len(kappa)
    cols = []
    for y in kappa:
        sol = express_in_span(y.a_action(), kappa)
        cols.append([c.coeffs[0] for c in sol.coefficients])
    C0 = [[cols[j][i] for j in range(n)] for i in range(n)]  # columns are images
    r = rank_of_matrix([[C0[i][j] for i in range(n)] for j in range(n)])
    if n - r != 1:
        raise ThemeError(f"stage module is not monogenic (dim E/(aE+bE) = {n - r})")
    cand = []
    for i in range(n):
        ext = [[C0[a][j] for a in range(n)] for j in range(n)] + [[ONE if a == i else ZERO for a in range(n)]]
        if rank_of_matrix(ext) > r:
            y = kappa[i]
            vmin = min(c.valuation() for c in y.comps)
            cand.append((vmin, y.top_index(), i))
    cand.sort()
    return kappa[cand[0][2]]


def descend(phi: XiElement) -> XiElement:
    """A generator of ``(A phi) cap Xi^(j-2)`` where j is the rank of phi."""
    j = rank_of(phi)
    pw = a_powers(phi, j)
    t = [y.comps[j - 1] for y in pw]
    v = int(t[0].valuation())
    t0 = t[0].unshift(v)
    kappa = []
    for i in range(1, j):
        q = t[i].unshift(v) / t0
        y = pw[i] - phi.series_action(q)
        if not y.comps[j - 1].is_zero():
            raise ThemeError("top-log elimination failed")
        kappa.append(y.components_slice(0, j - 1))
    if j == 2:
        return kappa[0]
    return _mod_b_class_generator(kappa)


def jh_filtration(phi: XiElement) -> List[Stage]:
    """Stages bottom-up: generator of F_j and lambda_j for j = 1..k."""
    cur = phi.components_slice(0, rank_of(phi))
    stages = []
    while True:
        stages.append(Stage(cur, top_lambda(cur)))
        if rank_of(cur) == 1:
            break
        cur = descend(cur)
    stages.reverse()
    for lo, hi in zip(stages, stages[1:]):
        p = hi.exponent - lo.exponent + 1
        if not is_constant(p) or p < 0 or Fraction(p).denominator != 1:
            raise ThemeError(f"not a theme: gap {format_scalar(p)} is not a natural number")
    return stages


def fundamental_invariants(phi: XiElement) -> Tuple[Scalar, List[int]]:
    stages = jh_filtration(phi)
    lams = [s.exponent for s in stages]
    return lams[0], [int(hi - lo + 1) for lo, hi in zip(lams, lams[1:])]


def is_monogenic(module: ABModule) -> Tuple[bool, Optional[int]]:
    """dim E/(aE + bE) = 1, with the index of a witness basis vector."""
    k = module.rank
    A0 = module.mod_b_matrix()
    cols = [[A0[i][j] for i in range(k)] for j in range(k)]
    r = rank_of_matrix(cols)
    if k - r != 1:
        return False, None
    for i in range(k):
        if rank_of_matrix(cols + [[ONE if a == i else ZERO for a in range(k)]]) > r:
            return True, i
    return False, None


# -- parameters ------------------------------------------------------------

@dataclass
class Rank2Parameter:
    lam1: Scalar
    lam2: Scalar
    p: int
    alpha: Optional[Scalar]
    unit: TruncSeries
    annihilator: AbElement
    effective_order: int


def _eigen_normalized(psi: XiElement) -> XiElement:
    """Rescale by a unit of C[[b]] so the top log component is exactly b^v.

    The image in the rank-1 quotient is then an a-eigenvector, which is what
    makes the annihilator right-divisible by (a - lam2 b).
    """
    top = psi.comps[-1]
    v = top.valuation()
    t = top.unshift(v)
    if all(c == 0 for c in t.coeffs[1:]):
        return psi if t.coeffs[0] == 1 else psi.scale(inverse(t.coeffs[0]))
    return psi.series_action(t.invert())


def extract_rank2_parameter(psi: XiElement) -> Rank2Parameter:
    psi = psi.components_slice(0, rank_of(psi))
    if rank_of(psi) != 2:
        raise ThemeError("rank-2 generator expected")
    psi = _eigen_normalized(psi)
    ann = annihilator_of(psi, 2)
    P = ann.element
    lam2 = top_lambda(psi)
    Q, R = right_divide_linear(P, lam2)
    W = P.weight_cap
    if not R.truncate(W - 1).is_zero():
        raise ThemeError("not a theme / truncation insufficient: nonzero remainder in right division")
    if Q.coefficient(0, 1) != 1 or any(j > 1 or (j == 1 and nu > 0) for nu, j in Q.terms):
        raise ThemeError("unexpected quotient shape in right division")
    n = W - 1
    q0 = TruncSeries([Q.coefficient(nu, 0) for nu in range(n)], n)
    lam1 = -q0.coeffs[1]
    h = (q0 + TruncSeries.monomial(1, n, lam1)).unshift(2).scale(-1)
    S = h.primitive().exp()
    p = lam2 - lam1 + 1
    if not is_constant(p) or Fraction(p).denominator != 1 or p < 0:
        raise ThemeError(f"not a theme: gap {format_scalar(p)} is not a natural number")
    p = int(p)
    alpha = EMPTY
    if p >= 1:
        if S.order <= p:
            raise OrderInsufficient("order too small to read the parameter")
        alpha = S.coeffs[p]
        if alpha == 0:
            raise ThemeError("not a theme: vanishing parameter")
    return Rank2Parameter(lam1, lam2, p, alpha, S, P, min(ann.effective_order, S.order))


def principal_parameters(phi: XiElement, stages: Optional[List[Stage]] = None) -> List[Tuple[int, Optional[Scalar]]]:
    stages = jh_filtration(phi) if stages is None else stages
    out = []
    for j in range(1, len(stages)):
        gen = stages[j].generator  # generator of F_(j+1), log components 0..j
        quot = gen.components_slice(j - 1, j + 1)
        par = extract_rank2_parameter(quot)
        out.append((par.p, par.alpha))
    return out


def isomorphism_test_rank2(phi1: XiElement, phi2: XiElement) -> bool:
    p1 = extract_rank2_parameter(phi1)
    p2 = extract_rank2_parameter(phi2)
    return (p1.lam1, p1.p, p1.alpha) == (p2.lam1, p2.p, p2.alpha)


# -- reports -------------------------------------------------------------

@dataclass
class ThemeReport:
    rank: int
    lam0: Scalar
    lambdas: List[Scalar]
    gaps: List[int]
    params: List[Optional[Scalar]]
    annihilator: AbElement
    effective_order: int
    assumptions: List[str] = field(default_factory=list)
    rank3: Optional["Rank3NormalForm"] = None

    @property
    def lam1(self) -> Scalar:
        return self.lambdas[0]

    def emitted(self) -> dict:
        """The data compared between truncation orders."""
        d = {
            "rank": self.rank,
            "lambdas": [format_scalar(x) for x in self.lambdas],
            "p": list(self.gaps),
            "principal_params": [None if a is EMPTY else format_scalar(a) for a in self.params],
        }
        if self.rank3 is not None:
            d["normal_form"] = {"u": format_scalar(self.rank3.u), "alpha": format_scalar(self.rank3.alpha)}
        return d

    def to_json(self) -> dict:
        d = {
            "rank": self.rank,
            "lambda0": format_scalar(self.lam0),
            "lambda1": format_scalar(self.lam1),
            "lambdas": [format_scalar(x) for x in self.lambdas],
            "p": list(self.gaps),
            "principal_params": [None if a is EMPTY else format_scalar(a) for a in self.params],
            "annihilator": self.annihilator.to_text(),
            "effective_order": self.effective_order,
            "assumptions": list(self.assumptions),
        }
        if self.rank3 is not None:
            d["normal_form"] = self.rank3.to_json()
        return d

    def to_text(self) -> str:
        lines = [
            f"rank: {self.rank}",
            f"lambda0: {format_scalar(self.lam0)}",
            "lambdas: " + ", ".join(format_scalar(x) for x in self.lambdas),
            "p: " + (", ".join(str(p) for p in self.gaps) or "-"),
            "principal parameters: " + (", ".join("∅" if a is EMPTY else format_scalar(a) for a in self.params) or "-"),
            f"annihilator: {self.annihilator.to_text()}",
            f"effective order: {self.effective_order}",
        ]
        if self.rank3 is not None:
            lines.append(f"normal form: u = {format_scalar(self.rank3.u)}, alpha = {format_scalar(self.rank3.alpha)}")
        for a in self.assumptions:
            lines.append(f"assumption: {a}")
        return "\n".join(lines)


def analyze(phi: XiElement) -> ThemeReport:
    k = rank_of(phi)
    phi = phi.components_slice(0, k)
    stages = jh_filtration(phi)
    lams = [s.exponent for s in stages]
    gaps = [int(hi - lo + 1) for lo, hi in zip(lams, lams[1:])]
    params = [a for _, a in principal_parameters(phi, stages)]
    ann = annihilator_of(phi, k)
    # the exponents must peel off the annihilator from the right once the
    # generator maps to an eigenvector of the top quotient
    norm = _eigen_normalized(phi)
    _check_peeling(ann.element if norm is phi else annihilator_of(norm, k).element, lams)
    assumptions = []
    if lams[0] <= 1:
        assumptions.append("lambda1 <= 1: outside the range lambda1 > 1 of the rank-2 classification")
    rank3 = None
    if k == 3:
        rank3 = rank3_normal_form(phi, stages)
        assumptions.append("rank-3 normal form (u, alpha) is read as an isomorphism invariant "
                           "(uniqueness of the normal form is assumed, not checked)")
    return ThemeReport(k, phi.lam0, lams, gaps, params, ann.element, ann.effective_order, assumptions, rank3)


def _check_peeling(P: AbElement, lams: Sequence[Scalar]):
    """The top exponent lambda_k must be a right factor of the annihilator."""
    _, R = right_divide_linear(P, lams[-1])
    if not R.truncate(max(P.weight_cap - 1, 0)).is_zero():
        raise ThemeError("annihilator has no right factor a - lambda_k b")


def analyze_with_margin(build: Callable[[int], XiElement], order: int = 24, margin: int = 6) -> ThemeReport:
    """Analyze at ``order`` and ``order + margin``; emitted data must agree."""
    r1 = analyze(build(order))
    if margin:
        r2 = analyze(build(order + margin))
        if r1.emitted() != r2.emitted():
            raise OrderInsufficient(f"order insufficient: {r1.emitted()} != {r2.emitted()}")
    return r1


# -- rank 3 ----------------------------------------------------------------

@dataclass
class Rank3NormalForm:
    lambdas: List[Scalar]
    S1: TruncSeries
    S2: TruncSeries
    generator: XiElement
    u: Scalar
    alpha: Scalar

    def to_json(self) -> dict:
        return {
            "u": format_scalar(self.u),
            "alpha": format_scalar(self.alpha),
            "S1": self.S1.to_text(),
            "S2": self.S2.to_text(),
        }


def rank3_normal_form(e: XiElement, stages: Optional[List[Stage]] = None) -> Rank3NormalForm:
    """Normalize a rank-3 generator so its annihilator is
    ``(a - l1 b) S1^-1 (a - l2 b) S2^-1 (a - l3 b)`` with pure top components
    at the two upper levels and ``S2 = 1 + alpha2 b^p2`` (or 1 when p2 = 0).

    u and alpha are the coefficients of b and b^2 in S1.
    """
    e = e.components_slice(0, rank_of(e))
    if rank_of(e) != 3:
        raise ThemeError("rank-3 generator expected")
    stages = jh_filtration(e) if stages is None else stages
    l1, l2, l3 = [s.exponent for s in stages]
    p2 = int(l3 - l2 + 1)
    top = e.comps[2]
    v3 = int(top.valuation())
    N3 = top.unshift(v3).scale(inverse(top.coeffs[v3]))
    eps0 = e.series_action(N3.invert())
    f0 = _minus_lambda_b(eps0, l3)
    if not f0.comps[2].is_zero():
        raise ThemeError("top component survived a - lambda3 b")
    t = f0.comps[1]
    v2 = int(t.valuation())
    if e.lam0 + v2 != l2:
        raise ThemeError("middle generator does not realize lambda2")
    n = t.order
    tv = t.coeffs[v2]
    tgt = [ZERO] * n
    tgt[v2] = tv
    alpha2 = None
    if p2 >= 1:
        alpha2 = t.coeffs[v2 + p2] / tv
        tgt[v2 + p2] = tv * alpha2
    y = [ZERO] * (n - 1)
    for m in range(n - 1):
        rhs = tgt[m + 1] - t.coeffs[m + 1]
        if m == v3:
            if rhs != 0:
                raise ThemeError("resonant coefficient cannot be normalized")
            continue
        y[m] = rhs / (m - v3)
    Y = TruncSeries(y, n - 1)
    U = Y.unshift(v2) / t.unshift(v2)
    eps = eps0 + f0.series_action(U)
    f = _minus_lambda_b(eps, l3)
    target = TruncSeries(tgt, n)
    if not f.comps[1].agrees_with(target):
        raise ThemeError("middle normalization failed")
    S2 = TruncSeries.one(f.order) if alpha2 is None else TruncSeries.monomial(p2, f.order, alpha2) + TruncSeries.one(f.order)
    f2 = f.series_action(S2.invert()).components_slice(0, 2)
    par = extract_rank2_parameter(f2)
    if par.lam1 != l1:
        raise ThemeError("bottom exponent mismatch in rank-3 normal form")
    S1 = par.unit
    return Rank3NormalForm([l1, l2, l3], S1, S2, eps, S1.coeffs[1], S1.coeffs[2])


def _minus_lambda_b(x: XiElement, lam) -> XiElement:
    return x.a_action() - x.b_action().scale(lam)


@dataclass
class Rank3FamilySpec:
    lam: Scalar
    eta0: Scalar
    eta1: Scalar
    xi: Optional[TruncSeries] = None
    zeta: Optional[TruncSeries] = None

    def __post_init__(self):
        self.lam = as_scalar(self.lam)
        self.eta0 = as_scalar(self.eta0)
        self.eta1 = as_scalar(self.eta1)
        if not is_constant(self.lam) or self.lam <= 2:
            raise ValueError("rank-3 family needs lambda > 2")
        if self.eta0 == 0:
            raise ValueError("rank-3 family needs eta0 != 0")

    def generator(self, N: int) -> XiElement:
        """``s^(l-1) L^2 + xi s^(l-1) L + (eta0 + eta1 b) s^(l-3) + zeta s^(l-1)`` over lam0 = l - 2."""
        lam0 = self.lam - 2
        e = monomial_to_abstract(2, 2, lam0, N, 3)
        if self.xi is not None:
            e = e + monomial_to_abstract(2, 1, lam0, N, 3).series_action(_fit(self.xi, N))
        if self.zeta is not None:
            e = e + monomial_to_abstract(2, 0, lam0, N, 3).series_action(_fit(self.zeta, N))
        low = TruncSeries([self.eta0, self.eta1], N)
        return e + XiElement.basis(lam0, 0, 3, N).series_action(low)

    def closed_form(self) -> Tuple[Scalar, Scalar]:
        """``4 eta0 u = eta1 + 2 eta0 xi'(0)`` and ``4 eta0 alpha = (l-1)(l-2)``.

        The xi'(0) term matters once xi is not constant; u does not
        depend on xi(0), on higher xi coefficients or on zeta.
        """
        lam = self.lam
        dxi = self.xi.coeffs[1] if self.xi is not None and self.xi.order > 1 else ZERO
        return self.eta1 / (4 * self.eta0) + dxi / 2, (lam - 1) * (lam - 2) / (4 * self.eta0)


def _fit(s: TruncSeries, N: int) -> TruncSeries:
    return s.truncate(N) if s.order >= N else TruncSeries(s.coeffs, N)


def w_coefficient(spec: Rank3FamilySpec, N: int = 12) -> Scalar:
    """Coefficient of s^(l+1) in ``(a - (l+1) b) N2^-1 (a - l b) e``.

    N2 is the unit part of the log-1 component of ``(a - l b) e``.
    """
    lam = spec.lam
    lam0 = lam - 2
    e = spec.generator(N)
    g = _minus_lambda_b(e, lam)
    if not g.comps[2].is_zero():
        raise ThemeError("log-2 component survived a - lambda b")
    t = g.comps[1]
    v = int(t.valuation())
    N2 = t.unshift(v).scale(inverse(t.coeffs[v]))
    h = _minus_lambda_b(g.series_action(N2.invert()), lam + 1)
    if not h.comps[1].is_zero():
        raise ThemeError("log-1 component survived a - (lambda+1) b")
    c = h.comps[0].coeffs[4]
    return c / _rising(lam0, 4)


def expected_w(lam) -> Scalar:
    """The value the s^(l+1) coefficient collapses to, free of xi and eta1.

    With the log term normalized to ``s^l Log s / l`` this is 1/(l (l+1)),
    the value needed for ``4 eta0 alpha = (l-1)(l-2)``.
    """
    lam = as_scalar(lam)
    return 1 / (lam * (lam + 1))


def _rising(x, n):
    out = ONE
    for i in range(n):
        out = out * (x + i)
    return out


@dataclass
class Rank3Result:
    u: Scalar
    alpha: Scalar
    closed_u: Scalar
    closed_alpha: Scalar
    w: Scalar
    normal_form: Rank3NormalForm


def rank3_family_analysis(spec: Rank3FamilySpec, N: int = 24) -> Rank3Result:
    e = spec.generator(N)
    nf = rank3_normal_form(e)
    cu, ca = spec.closed_form()
    w = w_coefficient(spec, N)
    if w != expected_w(spec.lam):
        raise ThemeError(f"derivation/truncation fault: w = {format_scalar(w)}")
    if (nf.u, nf.alpha) != (cu, ca):
        raise ThemeError(
            f"derivation/truncation fault: pipeline (u, alpha) = ({format_scalar(nf.u)}, {format_scalar(nf.alpha)})"
            f" but closed form gives ({format_scalar(cu)}, {format_scalar(ca)})")
    return Rank3Result(nf.u, nf.alpha, cu, ca, w, nf)


# -- presentations ---------------------------------------------------------

@dataclass
class Presentation:
    lambdas: List[Scalar]
    units: List[TruncSeries]

    def __post_init__(self):
        self.lambdas = [as_scalar(x) for x in self.lambdas]
        if len(self.lambdas) != len(self.units) + 1:
            raise ValueError("need one unit series between consecutive linear factors")
        for s in self.units:
            if s.coeffs[0] != 1:
                raise ValueError("unit normalization violated: S_j(0) must be 1")

    @property
    def rank(self) -> int:
        return len(self.lambdas)

    def elements(self, W: int) -> Tuple[AbElement, AbElement]:
        return standard_form_compose(self.lambdas, self.units, W)

    def default_lam0(self) -> Scalar:
        """Largest admissible base exponent in the class of the lambdas."""
        k = self.rank
        lo = min(self.lambdas) - (k - 1)
        if lo > 0:
            return lo
        frac = Fraction(lo) - (Fraction(lo).numerator // Fraction(lo).denominator)
        return frac if frac > 0 else Fraction(1)


def companion_module(P: AbElement) -> ABModule:
    """``A / A P`` on the basis 1, a, ..., a^(k-1) for monic P."""
    k = P.a_degree()
    W = P.weight_cap
    N = W - k
    M = [[TruncSeries.zero(N) for _ in range(k)] for _ in range(k)]
    for i in range(k - 1):
        M[i + 1][i] = TruncSeries.one(N)
    for j in range(k):
        M[j][k - 1] = P.column(j).scale(-1).truncate(N)
    return ABModule(M)


@dataclass
class PresentedTheme:
    presentation: Optional[Presentation]
    monic: AbElement
    module: ABModule
    generator: XiElement
    effective_order: int


def theme_from_presentation(P: Presentation, N: int, lam0=None) -> PresentedTheme:
    lam0 = P.default_lam0() if lam0 is None else as_scalar(lam0)
    W = N + P.rank
    _, monic = P.elements(W)
    real = realize_in_xi(monic, lam0, N)
    return PresentedTheme(P, monic, companion_module(monic), real.element, real.effective_order)


def theme_from_annihilator(Q: AbElement, lam0, N: int) -> XiElement:
    return realize_in_xi(Q, lam0, N).element


# -- saturation and Bernstein polynomial ----------------------------------

Vector = List[TruncSeries]


def _index(vals: Sequence[int]) -> int:
    return sum(vals)


def saturate_lattice(gens: Sequence[Vector], T: Callable[[Vector], Vector], max_steps: Optional[int] = None) -> List[Vector]:
    """Smallest T-stable lattice containing ``gens``; T must map the ambient lattice to itself."""
    basis, vals = echelon_basis(gens)
    k = len(gens[0])
    if len(basis) != k:
        raise ThemeError("generators do not span a full-rank lattice")
    steps = max_steps if max_steps is not None else k * basis[0][0].order
    for _ in range(steps):
        new, nvals = echelon_basis(basis + [T(v) for v in basis])
        if len(new) != k:
            raise ThemeError("lattice lost rank during saturation")
        if _index(nvals) == _index(vals):
            return basis
        basis, vals = new, nvals
    raise ThemeError("input not regular at this order: saturation did not stabilize")


def lattice_contains(big: Sequence[Vector], small: Sequence[Vector]) -> bool:
    for v in small:
        try:
            solve_in_span(v, big)
        except SpanError:
            return False
    return True


def lattices_equal(L1: Sequence[Vector], L2: Sequence[Vector]) -> bool:
    return lattice_contains(L1, L2) and lattice_contains(L2, L1)


def induced_residue(basis: Sequence[Vector], T: Callable[[Vector], Vector]) -> List[List[Scalar]]:
    """Matrix of T on L / bL in the given basis."""
    k = len(basis)
    M = [[ZERO] * k for _ in range(k)]
    for j, v in enumerate(basis):
        sol = solve_in_span(T(v), basis)
        for i, c in enumerate(sol.coefficients):
            M[i][j] = c.coeffs[0]
    return M


def char_poly_plus(M: Sequence[Sequence[Scalar]]) -> List[Scalar]:
    """Coefficients (constant first) of det(x I + M), by Faddeev-LeVerrier on -M."""
    n = len(M)
    A = [[-M[i][j] for j in range(n)] for i in range(n)]
    # det(xI - A) with A = -M
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    Mk = [[ZERO] * n for _ in range(n)]
    c = ONE
    for k in range(1, n + 1):
        # Mk = A * M_{k-1} + c_{n-k+1} I
        prod = [[sum((A[i][l] * Mk[l][j] for l in range(n)), ZERO) for j in range(n)] for i in range(n)]
        Mk = [[prod[i][j] + (c if i == j else ZERO) for j in range(n)] for i in range(n)]
        AM = [[sum((A[i][l] * Mk[l][j] for l in range(n)), ZERO) for j in range(n)] for i in range(n)]
        tr = sum((AM[i][i] for i in range(n)), ZERO)
        c = -tr / k
        coeffs[n - k] = c
    return coeffs


def format_poly_x(coeffs: Sequence[Scalar]) -> str:
    parts = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if c == 0:
            continue
        txt = format_scalar(c)
        if " " in txt:
            txt = f"({txt})"
        mono = "" if d == 0 else ("x" if d == 1 else f"x^{d}")
        if not mono:
            parts.append(txt)
        elif txt == "1":
            parts.append(mono)
        else:
            parts.append(f"{txt}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def b_inverse_a(module: ABModule) -> Callable[[Vector], Vector]:
    def T(v: Vector) -> Vector:
        return [c.unshift(1) for c in module.a_action(v)]
    return T


def saturate(module: ABModule, gens: Sequence[Vector]) -> List[Vector]:
    """Saturation by b^-1 a of the (a,b)-submodule spanned by ``gens`` in a simple-pole ambient."""
    if not module.is_simple_pole():
        raise ThemeError("ambient module must be simple pole")
    return saturate_lattice(gens, b_inverse_a(module))


def bernstein_polynomial(module: ABModule, gens: Optional[Sequence[Vector]] = None) -> List[Scalar]:
    """det(x I + M), M the action of b^-1 a on E#/bE#; E defaults to the ambient module."""
    if gens is None:
        N = module.order
        gens = [[TruncSeries.one(N) if i == j else TruncSeries.zero(N) for i in range(module.rank)]
                for j in range(module.rank)]
    T = b_inverse_a(module)
    sat = saturate(module, gens)
    return char_poly_plus(induced_residue(sat, T))


def theme_lattice(phi: XiElement) -> List[Vector]:
    """The thematic basis phi, a phi, ... as coordinate vectors in Xi."""
    k = rank_of(phi)
    phi = phi.components_slice(0, k)
    return [list(y.comps) for y in a_powers(phi, k)]
