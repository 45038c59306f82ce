"""Small input language for generators, presentations and changes of variable.

    param sigma;
    series S = 1 + b;
    generator e = s^(5/2)*L^2 + (1 + 2*b)*s^(1/2);
    presentation P = [5/2, 9/2] [1 + 5*b^3];
    cov c = subst t*(1 + sigma*t);
    analyze e;
    pushforward e by c;

``s^(q)*L^j`` stands for s^q (Log s)^j / j!.  The base exponent of a
generator is the smallest q plus one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .abalg import ChangeOfVariable
from .scalar import ONE, ZERO, Scalar, param
from .series import TruncSeries
from .theme import Presentation, theme_from_presentation
from .ximodel import XiElement, monomial_to_abstract


class DslError(Exception):
    """Input error with a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        where = f"line {line}, column {col}: " if col else (f"line {line}: " if line else "")
        super().__init__(where + message)


# -- tokens ----------------------------------------------------------------

KEYWORDS = {"param", "series", "generator", "presentation", "cov", "theta", "subst",
            "analyze", "annihilator", "pushforward", "by"}

_TOKEN = re.compile(r"\s*(?:(?P<comment>#[^\n]*)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                    r"|(?P<op>[-+*/^(),;=\[\]]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            if rest.strip() == "":
                break
            skip = len(rest) - len(rest.lstrip())
            bad = pos + skip
            line += text.count("\n", pos, bad)
            if "\n" in text[pos:bad]:
                line_start = text.rindex("\n", pos, bad) + 1
            raise DslError(f"unexpected character {text[bad]!r}", line, bad - line_start + 1)
        start = m.start(m.lastgroup)
        nl = text.count("\n", pos, start)
        if nl:
            line += nl
            line_start = text.rindex("\n", pos, start) + 1
        kind = m.lastgroup
        if kind != "comment":
            out.append(Token(kind, m.group(kind), line, start - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, len(text) - line_start + 1))
    return out


# -- abstract syntax ---------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Name:
    id: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Mul:
    factors: Tuple["Expr", ...]


@dataclass(frozen=True)
class Add:
    terms: Tuple[Tuple[str, "Expr"], ...]


Expr = Union[Num, Name, Neg, Pow, Mul, Add]


@dataclass(frozen=True)
class XiTerm:
    coeff: Optional[Expr]
    q: Fraction
    j: int


@dataclass(frozen=True)
class XiExpr:
    terms: Tuple[Tuple[str, XiTerm], ...]


@dataclass(frozen=True)
class ParamDecl:
    names: Tuple[str, ...]


@dataclass(frozen=True)
class SeriesDecl:
    name: str
    expr: Expr


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    expr: XiExpr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PresentationDecl:
    name: str
    lambdas: Tuple[Expr, ...]
    units: Tuple[Expr, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CovDecl:
    name: str
    kind: str  # "theta" or "subst"
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Command:
    kind: str
    target: str
    by: Optional[str] = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Decl = Union[ParamDecl, SeriesDecl, GeneratorDecl, PresentationDecl, CovDecl]


@dataclass(frozen=True)
class SourceDocument:
    decls: Tuple[Decl, ...]
    commands: Tuple[Command, ...]


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise DslError(f"{msg}, found {found}", tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            self.error(f"expected {text!r}")
        return tok

    def ident(self) -> Token:
        tok = self.tok
        if tok.kind != "name" or tok.text in KEYWORDS:
            self.error("expected a name")
        self.i += 1
        return tok

    def nat(self) -> int:
        tok = self.tok
        if tok.kind != "num":
            self.error("expected a natural number")
        self.i += 1
        return int(tok.text)

    def rational(self) -> Fraction:
        sign = -1 if self.accept("-") else 1
        n = self.nat()
        d = 1
        if self.accept("/"):
            d = self.nat()
            if d == 0:
                self.error("zero denominator", self.toks[self.i - 1])
        return sign * Fraction(n, d)

    # documents
    def document(self) -> SourceDocument:
        decls, cmds = [], []
        while self.tok.kind != "eof":
            word = self.tok.text if self.tok.kind == "name" else ""
            if word in ("param", "series", "generator", "presentation", "cov"):
                if cmds:
                    self.error("declarations must precede commands")
                decls.append(self.declaration())
            elif word in ("analyze", "annihilator", "pushforward"):
                cmds.append(self.command())
            else:
                self.error("expected a declaration or a command")
        return SourceDocument(tuple(decls), tuple(cmds))

    def declaration(self) -> Decl:
        kw = self.tok
        self.i += 1
        if kw.text == "param":
            names = [self.ident().text]
            while self.accept(","):
                names.append(self.ident().text)
            self.expect(";")
            return ParamDecl(tuple(names))
        name = self.ident().text
        self.expect("=")
        if kw.text == "series":
            e = self.expr()
            self.expect(";")
            return SeriesDecl(name, e)
        if kw.text == "generator":
            e = self.xi_expr()
            self.expect(";")
            return GeneratorDecl(name, e, kw.line)
        if kw.text == "presentation":
            lams = self.bracket_list()
            units = self.bracket_list()
            self.expect(";")
            return PresentationDecl(name, lams, units, kw.line)
        kind = self.tok.text
        if kind not in ("theta", "subst"):
            self.error("expected 'theta' or 'subst'")
        self.i += 1
        e = self.expr()
        self.expect(";")
        return CovDecl(name, kind, e, kw.line)

    def bracket_list(self) -> Tuple[Expr, ...]:
        self.expect("[")
        items = []
        if not self.accept("]"):
            items.append(self.expr())
            while self.accept(","):
                items.append(self.expr())
            self.expect("]")
        return tuple(items)

    def command(self) -> Command:
        kw = self.tok
        self.i += 1
        target = self.ident()
        by = None
        if kw.text == "pushforward":
            self.expect("by")
            by = self.ident().text
        self.expect(";")
        return Command(kw.text, target.text, by, target.line, target.col)

    # expressions
    def expr(self) -> Expr:
        terms = [("+", self.term())]
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            sign = self.tok.text
            self.i += 1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 else Add(tuple(terms))

    def term(self) -> Expr:
        factors = [self.unary()]
        while self.tok.text == "*" and self.tok.kind == "op":
            self.i += 1
            factors.append(self.unary())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        while self.tok.text == "^" and self.tok.kind == "op":
            self.i += 1
            base = Pow(base, self.nat())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            value = Fraction(int(tok.text))
            if self.tok.text == "/" and self.peek().kind == "num":
                self.i += 1
                d = self.nat()
                if d == 0:
                    self.error("zero denominator", self.toks[self.i - 1])
                value = value / d
            return Num(value)
        if tok.kind == "name" and tok.text not in KEYWORDS:
            self.i += 1
            return Name(tok.text, tok.line, tok.col)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.error("expected a number, a name or '('")

    def xi_expr(self) -> XiExpr:
        sign = "-" if self.accept("-") else "+"
        terms = [(sign, self.xi_term())]
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            sign = self.tok.text
            self.i += 1
            terms.append((sign, self.xi_term()))
        return XiExpr(tuple(terms))

    def _at_monomial(self) -> bool:
        return self.tok.text == "s" and self.peek().text == "^"

    def xi_term(self) -> XiTerm:
        coeff = None
        if not self._at_monomial():
            factors = [self.unary()]
            while not self._at_monomial():
                if self.accept("*"):
                    if self._at_monomial():
                        break
                    factors.append(self.unary())
                else:
                    self.error("expected a monomial s^(q)")
            coeff = factors[0] if len(factors) == 1 else Mul(tuple(factors))
        self.expect("s")
        self.expect("^")
        self.expect("(")
        q = self.rational()
        self.expect(")")
        j = 0
        if self.tok.text == "*" and self.peek().text == "L":
            self.i += 2
            self.expect("^")
            j = self.nat()
        return XiTerm(coeff, q, j)


def parse(text: str) -> SourceDocument:
    return _Parser(text).document()


# -- printer -----------------------------------------------------------------

def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def print_expr(e: Expr, ctx: int = 0) -> str:
    """ctx: 0 sum position, 1 factor position, 2 power base."""
    if isinstance(e, Num):
        txt = _frac(e.value)
        return f"({txt})" if ctx >= 2 and e.value.denominator != 1 else txt
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Neg):
        # unary minus binds tighter than * and +
        txt = "-" + print_expr(e.arg, 2 if isinstance(e.arg, (Mul, Add)) else 1)
        return f"({txt})" if ctx >= 2 else txt
    if isinstance(e, Pow):
        return f"{print_expr(e.base, 2)}^{e.exp}"
    if isinstance(e, Mul):
        txt = "*".join(print_expr(f, 2 if isinstance(f, Mul) else 1) for f in e.factors)
        return f"({txt})" if ctx >= 2 else txt
    if isinstance(e, Add):
        parts = [print_expr(e.terms[0][1], 1 if not isinstance(e.terms[0][1], Add) else 2)]
        for sign, t in e.terms[1:]:
            parts.append(f" {sign} {print_expr(t, 2 if isinstance(t, Add) else 1)}")
        txt = "".join(parts)
        return f"({txt})" if ctx >= 1 else txt
    raise TypeError(e)


def print_xi(x: XiExpr) -> str:
    out = []
    for n, (sign, t) in enumerate(x.terms):
        mono = f"s^({_frac(t.q)})" + (f"*L^{t.j}" if t.j else "")
        body = mono if t.coeff is None else f"{print_expr(t.coeff, 1)}*{mono}"
        if n == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def print_document(doc: SourceDocument) -> str:
    lines = []
    for d in doc.decls:
        if isinstance(d, ParamDecl):
            lines.append(f"param {', '.join(d.names)};")
        elif isinstance(d, SeriesDecl):
            lines.append(f"series {d.name} = {print_expr(d.expr)};")
        elif isinstance(d, GeneratorDecl):
            lines.append(f"generator {d.name} = {print_xi(d.expr)};")
        elif isinstance(d, PresentationDecl):
            lams = ", ".join(print_expr(x) for x in d.lambdas)
            units = ", ".join(print_expr(x) for x in d.units)
            lines.append(f"presentation {d.name} = [{lams}] [{units}];")
        elif isinstance(d, CovDecl):
            lines.append(f"cov {d.name} = {d.kind} {print_expr(d.expr)};")
    for c in doc.commands:
        lines.append(f"{c.kind} {c.target} by {c.by};" if c.by else f"{c.kind} {c.target};")
    return "\n".join(lines) + "\n"


# -- evaluation ----------------------------------------------------------------

PolyDict = Dict[int, Scalar]


@dataclass
class CovValue:
    name: str
    theta: ChangeOfVariable
    psi: TruncSeries
    symbols: Tuple[str, ...]


@dataclass
class ThemeSource:
    """A declared generator or presentation, buildable at any order."""
    name: str
    decl: Union[GeneratorDecl, PresentationDecl]
    env: "Environment"

    def build(self, N: int) -> XiElement:
        if isinstance(self.decl, GeneratorDecl):
            return self.env.generator(self.decl, N)
        return theme_from_presentation(self.env.presentation(self.decl, N), N).generator

    @property
    def is_presentation(self) -> bool:
        return isinstance(self.decl, PresentationDecl)


class Environment:
    """Declared names of a document; series are materialized on demand at a given order."""

    def __init__(self, doc: SourceDocument):
        self.doc = doc
        self.params: Dict[str, Scalar] = {}
        self.series: Dict[str, Expr] = {}
        self.themes: Dict[str, ThemeSource] = {}
        self.covs: Dict[str, CovDecl] = {}
        seen = set()
        for d in doc.decls:
            names = d.names if isinstance(d, ParamDecl) else (d.name,)
            for n in names:
                if n in seen:
                    raise DslError(f"name {n!r} declared twice", getattr(d, "line", 0))
                if n in ("a", "b", "s", "t", "L"):
                    raise DslError(f"name {n!r} is reserved", getattr(d, "line", 0))
                seen.add(n)
            if isinstance(d, ParamDecl):
                for n in d.names:
                    self.params[n] = param(n)
            elif isinstance(d, SeriesDecl):
                self.poly(d.expr, "b")  # validate now
                self.series[d.name] = d.expr
            elif isinstance(d, (GeneratorDecl, PresentationDecl)):
                self.themes[d.name] = ThemeSource(d.name, d, self)
                if isinstance(d, GeneratorDecl):
                    self._check_exponents(d)
                else:
                    self.presentation(d, 4)
            elif isinstance(d, CovDecl):
                self.covs[d.name] = d
                self.cov(d.name, 4)
        for c in doc.commands:
            if c.target not in self.themes:
                raise DslError(f"undeclared generator or presentation {c.target!r}", c.line, c.col)
            if c.by is not None and c.by not in self.covs:
                raise DslError(f"undeclared change of variable {c.by!r}", c.line, c.col)

    def poly(self, e: Expr, var: str) -> PolyDict:
        if isinstance(e, Num):
            return {0: e.value} if e.value != 0 else {}
        if isinstance(e, Name):
            if e.id == var:
                return {1: ONE}
            if e.id in self.params:
                return {0: self.params[e.id]}
            if e.id in self.series and var == "b":
                return self.poly(self.series[e.id], "b")
            if e.id in ("a", "b", "t", "s", "L"):
                raise DslError(f"variable {e.id!r} not allowed here (expected {var!r})", e.line, e.col)
            raise DslError(f"undeclared name {e.id!r}", e.line, e.col)
        if isinstance(e, Neg):
            return {k: -v for k, v in self.poly(e.arg, var).items()}
        if isinstance(e, Pow):
            base = self.poly(e.base, var)
            out: PolyDict = {0: ONE}
            for _ in range(e.exp):
                out = _pmul(out, base)
            return out
        if isinstance(e, Mul):
            out = {0: ONE}
            for f in e.factors:
                out = _pmul(out, self.poly(f, var))
            return out
        if isinstance(e, Add):
            out = {}
            for sign, t in e.terms:
                for k, v in self.poly(t, var).items():
                    out[k] = out.get(k, ZERO) + (v if sign == "+" else -v)
            return {k: v for k, v in out.items() if v != 0}
        raise TypeError(e)

    def scalar(self, e: Expr) -> Scalar:
        p = self.poly(e, "")
        return p.get(0, ZERO)

    def to_series(self, e: Expr, var: str, N: int) -> TruncSeries:
        p = self.poly(e, var)
        coeffs = [ZERO] * N
        for k, v in p.items():
            if k < N:
                coeffs[k] = v
        return TruncSeries(coeffs, N, var)

    def _check_exponents(self, d: GeneratorDecl) -> Fraction:
        qs = [t.q for _, t in d.expr.terms]
        lam0 = min(qs) + 1
        for q in qs:
            if (q - min(qs)).denominator != 1:
                raise DslError(f"exponent class mismatch: {_frac(q)} and {_frac(min(qs))} differ by a non-integer", d.line)
        if lam0 <= 0:
            raise DslError(f"base exponent lambda0 = {_frac(lam0)} must be positive", d.line)
        for _, t in d.expr.terms:
            if t.coeff is not None:
                self.poly(t.coeff, "b")
        return lam0

    def generator(self, d: GeneratorDecl, N: int) -> XiElement:
        lam0 = self._check_exponents(d)
        L = max(t.j for _, t in d.expr.terms) + 1
        out = XiElement.zero(lam0, L, N)
        for sign, t in d.expr.terms:
            m = int(t.q + 1 - lam0)
            x = monomial_to_abstract(m, t.j, lam0, N, L)
            if t.coeff is not None:
                x = x.series_action(self.to_series(t.coeff, "b", N))
            out = out + x if sign == "+" else out - x
        return out

    def presentation(self, d: PresentationDecl, N: int) -> Presentation:
        if len(d.lambdas) != len(d.units) + 1:
            raise DslError("a presentation needs one more exponent than unit series", d.line)
        try:
            return Presentation([self.scalar(x) for x in d.lambdas],
                                [self.to_series(u, "b", N + len(d.lambdas)) for u in d.units])
        except ValueError as err:
            raise DslError(str(err), d.line) from err

    def cov(self, name: str, N: int) -> CovValue:
        d = self.covs[name]
        var = "a" if d.kind == "theta" else "t"
        s = self.to_series(d.expr, var, N)
        if s.coeffs[0] != 0:
            raise DslError("a change of variable must vanish at 0", d.line)
        try:
            if d.kind == "theta":
                theta = ChangeOfVariable(s)
                psi = theta.eta.with_var("t")
            else:
                psi = s
                theta = ChangeOfVariable(s.compositional_inverse().with_var("a"))
        except (ValueError, ArithmeticError) as err:
            raise DslError(f"invalid change of variable: {err}", d.line) from err
        return CovValue(name, theta, psi, tuple(sorted(self.params)))


def _pmul(p: PolyDict, q: PolyDict) -> PolyDict:
    out: PolyDict = {}
    for i, x in p.items():
        for j, y in q.items():
            out[i + j] = out.get(i + j, ZERO) + x * y
    return {k: v for k, v in out.items() if v != 0}


def load(text: str) -> Environment:
    return Environment(parse(text))
