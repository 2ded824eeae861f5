"""
인클로저(Enclosure) / 정밀도(Precision) 데이터 모델과 유리수 표기 유틸리티.

Enclosure 는 정확한 유리수 끝점 [lo, hi] 로 실수 값을 감싸는 범용 운반체이다.
모든 끝점은 gmpy2.mpq 이며, 연산 결과는 항상 바깥쪽으로 반올림된다
(연산 자체는 services.enclosure_math 에 있다).

유리수 문자열 형식:
    - "p/q" 또는 정수 "p"       (직렬화 기본 형식)
    - "1e-k"                  (정밀도 입력 전용 축약형)

사용처:
    - services.enclosure_math : arith / ln / exp / pow / floor_power
    - RootEnclosure           : 근 인클로저 끝점
    - Certificate / 리포트     : {"lo": "p/q", "hi": "p/q"} 직렬화
"""

from dataclasses import dataclass
from decimal     import Decimal, localcontext
from typing      import Union

import gmpy2
from gmpy2 import mpq, mpz

import config


RationalLike = Union[int, str, "mpq", "mpz"]


# ------------------------------------------------------------------
# 유리수 파싱 / 표기
# ------------------------------------------------------------------

def to_mpq(value: RationalLike) -> mpq:
    """
    정수, mpq, "p/q" 문자열을 mpq 로 변환한다. float 은 거부한다.

    @param value  변환 대상
    @returns      mpq
    @throws       ValueError 형식이 잘못되었거나 float 인 경우
    """
    if isinstance(value, float):
        raise ValueError(f"부동소수점 값은 허용되지 않습니다: {value!r}")
    if isinstance(value, str):
        return parse_rational(value)
    return mpq(value)


def parse_rational(text: str) -> mpq:
    """
    "p/q", "p", "1e-k" 형식 문자열을 정확한 유리수로 변환한다.

    "1e-k" 는 10^-k, "ae-k" 는 a·10^-k 로 해석한다. 소수점 표기는
    정확한 십진 유리수로 변환한다 ("0.25" -> 1/4).

    @param text  유리수 문자열
    @returns     mpq
    @throws      ValueError 해석 불가 시

    @example
        parse_rational("7/2")     # -> mpq(7, 2)
        parse_rational("1e-12")   # -> mpq(1, 10**12)
    """
    s = str(text).strip()
    if not s:
        raise ValueError("빈 유리수 문자열")
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            q_den = mpz(den.strip())
            if q_den == 0:
                raise ValueError(f"분모가 0 입니다: {text!r}")
            return mpq(mpz(num.strip()), q_den)
        if "e" in s.lower() or "." in s:
            d = Decimal(s)
            if not d.is_finite():
                raise ValueError(f"유한한 값이 아닙니다: {text!r}")
            sign, digits, exp = d.as_tuple()
            mant = mpz("".join(str(x) for x in digits) or "0")
            if sign:
                mant = -mant
            if exp >= 0:
                return mpq(mant * mpz(10) ** exp)
            return mpq(mant, mpz(10) ** (-exp))
        return mpq(mpz(s))
    except (ValueError, ArithmeticError) as e:
        raise ValueError(f"유리수를 해석할 수 없습니다: {text!r} ({e})")


def format_rational(q: RationalLike) -> str:
    """
    유리수를 "p/q" (정수면 "p") 문자열로 표기한다.

    GMP 의 십진 변환을 사용하므로 자릿수 제한이 없다.

    @param q  mpq / mpz / int
    @returns  정규화된 문자열
    """
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_decimal(q: RationalLike, digits: int = config.PLAIN_DECIMAL_DIGITS) -> str:
    """
    비권위(non-authoritative) 표시용 십진 근사 문자열을 반환한다.

    정확한 유리수에서 직접 반올림하므로 이진 부동소수점 흔적이 없다.
    """
    q = mpq(q)
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    # 10진 지수를 먼저 맞춘 뒤 정수 나눗셈 (거대한 분자/분모도 digits 자리만 다룬다)
    shift = digits + 2 - (int(gmpy2.num_digits(q.numerator)) - int(gmpy2.num_digits(q.denominator)))
    if shift >= 0:
        scaled = gmpy2.f_div(q.numerator * mpz(10) ** shift, q.denominator)
    else:
        scaled = gmpy2.f_div(q.numerator, q.denominator * mpz(10) ** (-shift))
    with localcontext() as ctx:
        ctx.prec = digits
        value = +Decimal(str(scaled)).scaleb(-shift)
    return sign + format(value, "g")


# ------------------------------------------------------------------
# 이진(dyadic) 바깥쪽 반올림
# ------------------------------------------------------------------

def round_down(q: RationalLike, bits: int) -> mpq:
    """q 이하인 최대의 k/2^bits."""
    q = mpq(q)
    if q.denominator == 1:
        return q
    return mpq(gmpy2.f_div(q.numerator << bits, q.denominator), mpz(1) << bits)


def round_up(q: RationalLike, bits: int) -> mpq:
    """q 이상인 최소의 k/2^bits."""
    q = mpq(q)
    if q.denominator == 1:
        return q
    return mpq(gmpy2.c_div(q.numerator << bits, q.denominator), mpz(1) << bits)


def bits_for_width(width: RationalLike) -> int:
    """
    2^-b <= width 를 만족하는 최소의 b (width >= 1 이면 0).

    @example
        bits_for_width(mpq(1, 1024))   # -> 10
        bits_for_width(mpq(1, 1000))   # -> 10
    """
    width = mpq(width)
    if width <= 0:
        raise ValueError(f"폭은 양수여야 합니다: {width}")
    if width >= 1:
        return 0
    ceil_inv = gmpy2.c_div(width.denominator, width.numerator)
    return int((ceil_inv - 1).bit_length())


# ------------------------------------------------------------------
# Enclosure
# ------------------------------------------------------------------

@dataclass(frozen=True)
class Enclosure:
    """
    정확한 유리수 끝점을 갖는 닫힌 구간 [lo, hi].

    @param lo  하한 (mpq)
    @param hi  상한 (mpq), lo <= hi
    @throws    ValueError lo > hi 인 경우

    @example
        e = Enclosure.point(2)
        e.width          # -> mpq(0)
        e.contains(2)    # -> True
    """
    lo: mpq
    hi: mpq

    def __post_init__(self):
        lo, hi = mpq(self.lo), mpq(self.hi)
        if lo > hi:
            raise ValueError(f"잘못된 인클로저: lo={lo} > hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value: RationalLike) -> "Enclosure":
        q = to_mpq(value)
        return cls(q, q)

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    @property
    def mid(self) -> mpq:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: RationalLike) -> bool:
        q = to_mpq(value)
        return self.lo <= q <= self.hi

    def contains_enclosure(self, other: "Enclosure", slack: RationalLike = 0) -> bool:
        """other 가 self 를 slack 만큼 넓힌 구간 안에 있으면 True."""
        s = mpq(slack)
        return self.lo - s <= other.lo and other.hi <= self.hi + s

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def rounded(self, bits: int) -> "Enclosure":
        """끝점을 2^-bits 격자로 바깥쪽 반올림한 인클로저."""
        return Enclosure(round_down(self.lo, bits), round_up(self.hi, bits))

    def to_dict(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    def to_display_dict(self, digits: int = config.PLAIN_DECIMAL_DIGITS) -> dict:
        """plain 출력용: 정확 끝점 + 비권위 십진 근사."""
        return {
            "lo":      format_rational(self.lo),
            "hi":      format_rational(self.hi),
            "approx":  format_decimal(self.mid, digits),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Enclosure":
        """
        {"lo": "p/q", "hi": "p/q"} 딕셔너리로부터 인클로저를 생성한다.

        @throws ValueError / KeyError 형식 오류 시
        """
        return cls(parse_rational(data["lo"]), parse_rational(data["hi"]))


# ------------------------------------------------------------------
# Precision
# ------------------------------------------------------------------

@dataclass(frozen=True)
class Precision:
    """
    목표 폭과 정제 예산.

    @param target_width     목표 인클로저 폭 (양의 유리수)
    @param max_refinements  정밀도 배가 허용 횟수 (>= 1)

    @example
        Precision.parse("1e-12").bits   # -> 40
    """
    target_width:    mpq
    max_refinements: int = config.DEFAULT_MAX_REFINEMENTS

    def __post_init__(self):
        width = to_mpq(self.target_width)
        if width <= 0:
            raise ValueError(f"target_width 는 양수여야 합니다: {self.target_width}")
        if int(self.max_refinements) < 1:
            raise ValueError(f"max_refinements 는 1 이상이어야 합니다: {self.max_refinements}")
        object.__setattr__(self, "target_width", width)
        object.__setattr__(self, "max_refinements", int(self.max_refinements))

    @classmethod
    def parse(cls, text: str, max_refinements: int = config.DEFAULT_MAX_REFINEMENTS) -> "Precision":
        return cls(parse_rational(text), max_refinements)

    @classmethod
    def from_bits(cls, bits: int, max_refinements: int = config.DEFAULT_MAX_REFINEMENTS) -> "Precision":
        return cls(mpq(1, mpz(1) << max(bits, 0)), max_refinements)

    @property
    def bits(self) -> int:
        """2^-bits <= target_width 인 최소 비트 수."""
        return bits_for_width(self.target_width)

    def tightened(self, factor: int = 2) -> "Precision":
        """목표 폭을 factor 제곱 배로 줄인 정밀도 (비트 수 factor 배)."""
        return Precision.from_bits(max(self.bits, 1) * factor, self.max_refinements)

    def to_dict(self) -> dict:
        return {
            "target_width":    format_rational(self.target_width),
            "max_refinements": self.max_refinements,
        }
