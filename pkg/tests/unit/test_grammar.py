import pytest

from besselpairs.core.grammar import format_potential, parse_potential
from besselpairs.utils.exceptions import ExpressionError, ParamError
from tests.fixtures.sample_potentials import SAMPLE_EXPRESSIONS


@pytest.mark.parametrize("text, expected", list(SAMPLE_EXPRESSIONS.items()))
def test_parse_samples(text, expected):
    assert parse_potential(text) == expected


@pytest.mark.parametrize("text", list(SAMPLE_EXPRESSIONS))
def test_format_reparses_to_equal_model(text):
    model = parse_potential(text)
    assert parse_potential(format_potential(model)) == model


def test_whitespace_is_ignored():
    assert parse_potential(" sum( const:1 ; pow:2 ) ") == parse_potential("sum(const:1;pow:2)")


def test_nested_expression():
    model = parse_potential("prod(scaled:alpha=0.5,(ilog:k=2,rho=20);pw:a=1,b=2,alpha=-1,beta=3,m=0.5)")
    assert model.kind == "Product"
    assert model.members[0].inner.k == 2


@pytest.mark.parametrize(
    "text",
    [
        "",
        "foo:1",
        "const:abc",
        "const:1)",
        "ilog:k=1.5,rho=2",
        "pw:a=0,b=1,alpha=1,beta=1,m=0",
        "sum(const:1;",
        "scaled:alpha=2,pow:2",
    ],
)
def test_malformed_expressions(text):
    with pytest.raises(ExpressionError) as info:
        parse_potential(text)
    assert isinstance(info.value, ParamError)
    assert info.value.exit_code == 2
