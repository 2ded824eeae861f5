import random

import gmpy2
import mpmath
import pytest
from gmpy2 import mpq, mpz

from models.enclosure        import Enclosure, Precision, bits_for_width, format_decimal, parse_rational
from services.enclosure_math import (
    arith,
    exp_enclosure,
    floor_power,
    int_power,
    ln2_enclosure,
    ln_enclosure,
    pow_enclosure,
)
from services.errors         import DivisionByIntervalContainingZero, NonPositiveArgument


@pytest.mark.parametrize(
    "text, expected",
    [
        ("7/2", mpq(7, 2)),
        ("-3", mpq(-3)),
        ("1e-12", mpq(1, 10 ** 12)),
        ("0.25", mpq(1, 4)),
        ("5e-3", mpq(1, 200)),
    ]
)
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["", "1/0", "abc", "inf"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_precision_bits():
    assert Precision.parse("1e-12").bits == 40
    assert bits_for_width(mpq(1, 1024)) == 10
    assert bits_for_width(mpq(1, 1000)) == 10


def test_format_decimal_rounds_from_exact_value():
    assert format_decimal(mpq(-1, 8), 3) == "-0.125"
    assert format_decimal(mpq(1, 3), 5) == "0.33333"


def test_arith_mul_sign_mix():
    result = arith("mul", Enclosure(-1, 1), Enclosure(-1, 1))
    assert (result.lo, result.hi) == (-1, 1)


def test_arith_div_rounds_outward():
    result = arith("div", Enclosure.point(1), Enclosure.point(3), bits=10)
    assert result.lo <= mpq(1, 3) <= result.hi
    assert result.width <= mpq(2, 1024)


def test_arith_div_by_zero_interval():
    with pytest.raises(DivisionByIntervalContainingZero):
        arith("div", Enclosure.point(1), Enclosure(-1, 1))


def test_int_power_rejects_nonpositive():
    with pytest.raises(NonPositiveArgument):
        int_power(Enclosure(0, 2), 3)


def test_int_power_rounded_contains_exact():
    x = Enclosure(mpq(3, 2), mpq(3, 2))
    exact = mpq(3, 2) ** 40
    result = int_power(x, 40, bits=20)
    assert result.lo <= exact <= result.hi


def test_ln2(encloses):
    enc = ln2_enclosure(100)
    assert enc.width <= mpq(1, 2 ** 100)
    assert encloses(enc, mpmath.log(2))


@pytest.mark.parametrize("value", [mpq(2), mpq(10), mpq(1, 7), mpz(2) ** 300 + 1])
def test_ln_matches_reference(value, encloses):
    enc = ln_enclosure(Enclosure.point(value), Precision.parse("1e-30"))
    assert enc.width <= mpq(1, 10 ** 30)
    reference = mpmath.log(mpmath.mpf(int(value.numerator)) / int(value.denominator))
    assert encloses(enc, reference)


def test_ln_rejects_nonpositive(prec):
    with pytest.raises(NonPositiveArgument):
        ln_enclosure(Enclosure(-1, 1), prec)


@pytest.mark.parametrize("t", [mpq(1), mpq(-5, 2), mpq(40, 3)])
def test_exp_matches_reference(t, encloses):
    enc = exp_enclosure(Enclosure.point(t), Precision.parse("1e-25"))
    reference = mpmath.exp(mpmath.mpf(int(t.numerator)) / int(t.denominator))
    assert encloses(enc, reference)
    width = mpmath.mpf(int(enc.width.numerator)) / int(enc.width.denominator)
    assert width <= reference * mpmath.mpf(10) ** -24


def test_pow_integer_point_is_exact(prec):
    assert pow_enclosure(2, Enclosure.point(3), prec) == Enclosure.point(8)


def test_pow_half_is_sqrt_two(prec, encloses):
    enc = pow_enclosure(2, Enclosure.point(mpq(1, 2)), prec)
    assert encloses(enc, mpmath.sqrt(2))


@pytest.mark.parametrize(
    "base, exponent, expected",
    [
        (2, mpq(4), 16),
        (2, mpq(7, 2), 11),
        (mpq(3, 2), mpq(10), 57),
        (3, mpq(1, 3), 1),
    ]
)
def test_floor_power_exact_exponent(base, exponent, expected, prec):
    assert floor_power(base, Enclosure.point(exponent), prec) == expected


def test_floor_power_with_refining_handle(prec):
    # t = sqrt(2) + 10
    def handle(bits):
        scale = mpz(1) << bits
        r = gmpy2.isqrt(2 * scale * scale)
        return Enclosure(mpq(r, scale) + 10, mpq(r + 1, scale) + 10)

    reference = int(mpmath.floor(mpmath.power(2, mpmath.sqrt(2) + 10)))
    assert floor_power(2, handle, prec) == reference


@pytest.mark.parametrize("op", ["add", "sub", "mul", "div"])
def test_arith_contains_every_sample(op):
    rng = random.Random(20240611)
    for _ in range(50):
        lo_a, lo_b = mpq(rng.randint(1, 400), rng.randint(1, 60)), mpq(rng.randint(1, 400), rng.randint(1, 60))
        a = Enclosure(lo_a, lo_a + mpq(rng.randint(0, 9), 7))
        b = Enclosure(lo_b, lo_b + mpq(rng.randint(0, 9), 7))
        result = arith(op, a, b, bits=16)
        for s, t in ((a.lo, b.lo), (a.hi, b.hi), (a.lo, b.hi), (a.hi, b.lo), (a.mid, b.mid)):
            exact = {"add": s + t, "sub": s - t, "mul": s * t, "div": s / t}[op]
            assert result.lo <= exact <= result.hi
