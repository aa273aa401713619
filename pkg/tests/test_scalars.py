from fractions import Fraction

import pytest

from isotropy.errors import ScalarParseError
from isotropy.rng import RandomSource
from isotropy.scalars import (
    ExactScalar, HALF, IMAG, MINUS_ONE, ONE, SQRT2, ZERO,
    format_scalar, parse_scalar, rat,
)


# ---------------------------------------------------------------------------
# fixed values
# ---------------------------------------------------------------------------

def test_defining_relations():
    assert SQRT2 * SQRT2 == ExactScalar(2)
    assert IMAG * IMAG == MINUS_ONE
    assert (IMAG * SQRT2) * (IMAG * SQRT2) == ExactScalar(-2)


def test_norm_identity_hand_checked():
    # (1 + sqrt2)(-1 + sqrt2) = 2 - 1 = 1, worked by hand
    x = ONE + SQRT2
    y = MINUS_ONE + SQRT2
    assert x * y == ONE


def test_half_angle_style_products():
    # (1 + i)/sqrt2 squared is i
    w = (ONE + IMAG) * SQRT2.inverse()
    assert w * w == IMAG


def test_inverse_examples():
    assert SQRT2.inverse() == ExactScalar(0, 0, rat(1, 2))
    assert IMAG.inverse() == -IMAG
    x = ExactScalar(rat(1, 2), rat(-1, 3), rat(2), rat(0))
    assert x * x.inverse() == ONE
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_div_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


# ---------------------------------------------------------------------------
# parsing / formatting
# ---------------------------------------------------------------------------

def test_parse_grammar_examples():
    x = parse_scalar("1/2 - 1/2 i")
    assert (x.a, x.b, x.c, x.d) == (rat(1, 2), rat(-1, 2), 0, 0)
    y = parse_scalar("(1/2) r2")
    assert (y.a, y.b, y.c, y.d) == (0, 0, rat(1, 2), 0)
    z = parse_scalar("(1/3 - 2 i) r2")
    assert (z.c, z.d) == (rat(1, 3), rat(-2))
    assert parse_scalar("3") == ExactScalar(3)
    assert parse_scalar("-3/4") == ExactScalar(rat(-3, 4))
    assert parse_scalar("2 r2") == ExactScalar(0, 0, 2)
    assert parse_scalar("1+1i") == ONE + IMAG  # whitespace is insignificant
    assert parse_scalar(" 1 + 1 i ") == ONE + IMAG


def test_parse_lenient_forms():
    assert parse_scalar("i") == IMAG
    assert parse_scalar("-i") == -IMAG
    assert parse_scalar("r2") == SQRT2
    assert parse_scalar("1 - r2") == ONE - SQRT2


def test_parse_errors_have_positions():
    for bad in ["", "1 +", "1/0", "1//2", "(1 + 2 i", "x", "1 2", "i i"]:
        with pytest.raises(ScalarParseError):
            parse_scalar(bad)
    try:
        parse_scalar("1 + $")
    except ScalarParseError as e:
        assert e.position == 4


def test_format_canonical_examples():
    assert format_scalar(ZERO) == "0"
    assert format_scalar(ONE) == "1"
    assert format_scalar(-HALF) == "-1/2"
    assert format_scalar(IMAG) == "1 i"
    assert format_scalar(ONE - IMAG) == "1 - 1 i"
    assert format_scalar(SQRT2) == "1 r2"
    assert format_scalar(ExactScalar(0, 0, 0, rat(-1, 2))) == "(0 - 1/2 i) r2"
    assert format_scalar(ExactScalar(1, 2, 3, 4)) == "1 + 2 i + (3 + 4 i) r2"


def test_format_parse_round_trip_fuzzed():
    # 1000 pseudo-random scalars: format then parse must return the value,
    # and formatting again must be byte-identical.
    rs = RandomSource(20240817)
    for _ in range(1000):
        x = rs.scalar(with_i=True, with_sqrt2=True, max_num=9, max_den=7)
        text = format_scalar(x)
        back = parse_scalar(text)
        assert back == x
        assert format_scalar(back) == text


# ---------------------------------------------------------------------------
# field axioms and automorphisms on sampled triples
# ---------------------------------------------------------------------------

def _triples(count=200, seed=91, **kw):
    rs = RandomSource(seed)
    for _ in range(count):
        yield (rs.scalar(with_sqrt2=True, **kw),
               rs.scalar(with_sqrt2=True, **kw),
               rs.scalar(with_sqrt2=True, **kw))


def test_field_axioms():
    for x, y, z in _triples():
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x
        assert x * y == y * x
        assert x + ZERO == x and x * ONE == x
        assert x - x == ZERO
        if not x.is_zero:
            assert x * x.inverse() == ONE


def test_conjugations_are_automorphisms():
    for x, y, _ in _triples(count=120, seed=17):
        for conj in (ExactScalar.conjugate_i, ExactScalar.conjugate_sqrt2):
            assert conj(x + y) == conj(x) + conj(y)
            assert conj(x * y) == conj(x) * conj(y)
            assert conj(conj(x)) == x


def test_components_stay_reduced():
    # reduced, positive-denominator invariant (via Fraction round-trip)
    for x, y, _ in _triples(count=60, seed=3):
        z = x * y + x
        for comp in (z.a, z.b, z.c, z.d):
            f = Fraction(int(comp.numerator), int(comp.denominator))
            assert f.numerator == int(comp.numerator)
            assert f.denominator == int(comp.denominator) > 0


def test_int_interop():
    assert 2 * HALF == ONE
    assert ONE + 1 == ExactScalar(2)
    assert 1 - HALF == HALF
    assert HALF / 2 == ExactScalar(rat(1, 4))
    with pytest.raises(TypeError):
        ExactScalar(0.5)
    with pytest.raises(TypeError):
        rat(0.5)
