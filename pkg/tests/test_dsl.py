from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abtheme.corpus import DOCUMENTS
from abtheme.dsl import DslError, load, parse, print_document, tokenize
from abtheme.scalar import param
from abtheme.series import TruncSeries
from abtheme.suite import rank2_example


@pytest.mark.parametrize("text", DOCUMENTS)
def test_corpus_round_trip(text):
    doc = parse(text)
    printed = print_document(doc)
    assert parse(printed) == doc
    assert print_document(parse(printed)) == printed


def test_corpus_size():
    assert len(DOCUMENTS) >= 30


atoms = st.one_of(st.integers(0, 9).map(str), st.just("b"), st.just("k"))
exprs = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.tuples(sub, st.sampled_from(["+", "-", "*"]), sub).map(lambda t: f"{t[0]} {t[1]} {t[2]}"),
        sub.map(lambda e: f"({e})"),
        sub.map(lambda e: f"-({e})"),
        st.tuples(sub, st.integers(0, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
    ),
    max_leaves=8,
)


@given(exprs)
@settings(max_examples=80, deadline=None)
def test_generated_round_trip_preserves_meaning(e):
    text = f"param k;\nseries S = {e};\n"
    doc = parse(text)
    printed = print_document(doc)
    assert parse(printed) == doc
    s1 = load(text).to_series(load(text).series["S"], "b", 6)
    s2 = load(printed).to_series(load(printed).series["S"], "b", 6)
    assert s1 == s2


def test_precedence():
    env = load("series S = 1 - 2*b^2 + -b;\n")
    assert env.to_series(env.series["S"], "b", 4) == TruncSeries([1, -1, -2], 4)


def test_generator_semantics():
    env = load("generator e = s^(5/2)*L^1 + (1 + b)*s^(1/2);\n")
    assert env.themes["e"].build(12) == rank2_example(Fraction(5, 2), 2, [1, 1], 12)


def test_parameters_are_symbolic():
    env = load("param sigma;\ncov c = subst t*(1 + sigma*t);\n")
    c = env.cov("c", 6)
    assert c.psi.coeffs[2] == param("sigma")
    assert c.theta.eta.coeffs[2] == param("sigma")


@pytest.mark.parametrize("text,line,col", [
    ("series S = 1 + ;\n", 1, 16),
    ("param k;\n\nseries S = 1 $ b;\n", 3, 14),
    ("analyze e;\n", 1, 9),
    ("generator e = s^(1/2);\nanalyze e\n", 2, 11),
])
def test_error_positions(text, line, col):
    with pytest.raises(DslError) as info:
        load(text)
    assert info.value.line == line
    if col:
        assert info.value.col == col
    assert f"line {info.value.line}" in str(info.value)


@pytest.mark.parametrize("text,needle", [
    ("param a;\n", "reserved"),
    ("param k, k;\n", "twice"),
    ("series S = q;\n", "undeclared"),
    ("generator e = s^(1/2) + s^(1/3);\n", "class mismatch"),
    ("generator e = s^(-3/2);\n", "positive"),
    ("presentation P = [1, 2] [];\n", "one more exponent"),
    ("presentation P = [1, 2] [2 + b];\n", "S_j(0) must be 1"),
    ("cov c = theta 1 + a;\n", "vanish"),
    ("cov c = theta a^2;\n", "invalid change of variable"),
    ("generator e = s^(1/2);\ncov c = theta a;\npushforward e by d;\n", "undeclared change"),
])
def test_semantic_errors(text, needle):
    with pytest.raises(DslError) as info:
        load(text)
    assert needle in str(info.value)


def test_tokenizer_skips_comments():
    kinds = [t.kind for t in tokenize("# x\nparam k; # y\n")]
    assert kinds == ["name", "name", "op", "eof"]
