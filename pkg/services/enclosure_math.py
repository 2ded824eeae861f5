"""
방향성 반올림 임의 정밀도 인클로저 연산 서비스.

모든 결과는 정확한 유리수 끝점을 가지며 항상 바깥쪽으로 반올림한다.
부동소수점은 인증 경로 어디에도 사용하지 않는다.

구현 방식:
    - 사칙연산   : mpq 정확 연산 (+ 선택적 이진 바깥쪽 반올림)
    - ln       : q = m·2^e, m ∈ [1, 2) 로 축소한 뒤 ln m = 2 atanh((m-1)/(m+1))
    - exp      : t = n·ln2 + r 로 축소, r / 2^s 에서 Taylor 급수 후 s 회 제곱
    - 거듭제곱  : base^t = base^k · exp(f · ln base),  k = floor(t)
    - floor    : 정확한 유리 지수는 정수 거듭제곱근(gmpy2.iroot)으로,
                 그 외에는 지수 정제 핸들을 통해 비트 수를 늘려 가며 판정

급수는 2^w 배율의 정수 고정소수점으로 계산한다. 하한은 매 단계 내림,
상한은 매 단계 올림에 명시적 나머지 항 상한을 더한다.

사용처:
    - services.series      : 꼬리 상한, 인클로저 합
    - services.diagnostics : mu_n, growth_exponent
    - services.schedule    : beta_n / gamma_n 의 floor_power
"""

from functools import lru_cache
from typing    import Callable, Optional, Tuple, Union

import gmpy2
from gmpy2 import mpq, mpz

import config
from models.enclosure import Enclosure, Precision, RationalLike, to_mpq
from services.errors  import (
    DivisionByIntervalContainingZero,
    FloorUndecidable,
    NonPositiveArgument,
)


# 지수 정제 핸들: 요청 비트 수 b 에 대해 폭 <= 2^-b 인 지수 인클로저를 돌려준다
ExponentHandle = Callable[[int], Enclosure]


# ------------------------------------------------------------------
# 반올림 보조
# ------------------------------------------------------------------

def scale_down(q: mpq, e: int) -> mpq:
    """floor(q · 2^e) / 2^e (e 는 음수 가능)."""
    num, den = q.numerator, q.denominator
    if e >= 0:
        return mpq(gmpy2.f_div(num << e, den), mpz(1) << e)
    return mpq(gmpy2.f_div(num, den << (-e)) << (-e))


def scale_up(q: mpq, e: int) -> mpq:
    """ceil(q · 2^e) / 2^e (e 는 음수 가능)."""
    num, den = q.numerator, q.denominator
    if e >= 0:
        return mpq(gmpy2.c_div(num << e, den), mpz(1) << e)
    return mpq(gmpy2.c_div(num, den << (-e)) << (-e))


def magnitude(q: mpq) -> int:
    """|q| 의 대략적인 이진 자릿수 (floor(log2 |q|) 또는 그보다 1 큰 값)."""
    if q == 0:
        return 0
    return int(q.numerator.bit_length()) - int(q.denominator.bit_length())


def rel_down(q: mpq, bits: int) -> mpq:
    """유효 비트 약 bits 개를 남기고 내림."""
    if q == 0:
        return q
    return scale_down(q, bits - magnitude(q))


def rel_up(q: mpq, bits: int) -> mpq:
    """유효 비트 약 bits 개를 남기고 올림."""
    if q == 0:
        return q
    return scale_up(q, bits - magnitude(q))


def round_enclosure(x: Enclosure, bits: int) -> Enclosure:
    """절대 격자 2^-bits 로 바깥쪽 반올림."""
    return Enclosure(scale_down(x.lo, bits), scale_up(x.hi, bits))


def round_enclosure_rel(x: Enclosure, bits: int) -> Enclosure:
    """상대 정밀도 약 2^-bits 로 바깥쪽 반올림."""
    return Enclosure(rel_down(x.lo, bits), rel_up(x.hi, bits))


# ------------------------------------------------------------------
# 사칙연산
# ------------------------------------------------------------------

def arith(
    op:   str,
    x:    Enclosure,
    y:    Optional[Enclosure] = None,
    bits: Optional[int]       = None,
) -> Enclosure:
    """
    구간 사칙연산. bits 가 주어지면 결과를 2^-bits 격자로 바깥쪽 반올림한다.

    @param op    "add" | "sub" | "mul" | "div" | "neg"
    @param x     왼쪽 피연산자
    @param y     오른쪽 피연산자 (neg 에서는 무시)
    @param bits  선택적 이진 반올림 비트 수
    @returns     모든 a∘b (a ∈ x, b ∈ y) 를 포함하는 인클로저
    @throws      DivisionByIntervalContainingZero  div 에서 0 ∈ y
    @throws      ValueError                        알 수 없는 op

    @example
        arith("mul", Enclosure(-1, 1), Enclosure(-1, 1))   # -> [-1, 1]
        arith("div", Enclosure.point(1), Enclosure.point(3), bits=10)
    """
    if op == "neg":
        result = Enclosure(-x.hi, -x.lo)
    elif y is None:
        raise ValueError(f"연산 {op} 에는 두 피연산자가 필요합니다")
    elif op == "add":
        result = Enclosure(x.lo + y.lo, x.hi + y.hi)
    elif op == "sub":
        result = Enclosure(x.lo - y.hi, x.hi - y.lo)
    elif op == "mul":
        products = (x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi)
        result = Enclosure(min(products), max(products))
    elif op == "div":
        if y.lo <= 0 <= y.hi:
            raise DivisionByIntervalContainingZero(f"0 을 포함하는 구간으로 나눔: [{y.lo}, {y.hi}]")
        quotients = (x.lo / y.lo, x.lo / y.hi, x.hi / y.lo, x.hi / y.hi)
        result = Enclosure(min(quotients), max(quotients))
    else:
        raise ValueError(f"알 수 없는 연산: {op}")

    if bits is not None:
        result = round_enclosure(result, bits)
    return result


def add(x: Enclosure, y: Enclosure) -> Enclosure:
    return arith("add", x, y)


def sub(x: Enclosure, y: Enclosure) -> Enclosure:
    return arith("sub", x, y)


def mul(x: Enclosure, y: Enclosure) -> Enclosure:
    return arith("mul", x, y)


def div(x: Enclosure, y: Enclosure) -> Enclosure:
    return arith("div", x, y)


def int_power(x: Enclosure, n: int, bits: Optional[int] = None) -> Enclosure:
    """
    양의 인클로저의 정수 거듭제곱 [lo^n, hi^n]. bits 가 주어지면 상대 반올림.

    @throws NonPositiveArgument x.lo <= 0
    """
    if x.lo <= 0:
        raise NonPositiveArgument(f"양의 구간이어야 합니다: [{x.lo}, {x.hi}]")
    lo, hi = mpq(1), mpq(1)
    base_lo, base_hi = x.lo, x.hi
    k = int(n)
    while k > 0:
        if k & 1:
            lo, hi = lo * base_lo, hi * base_hi
            if bits is not None:
                lo, hi = rel_down(lo, bits), rel_up(hi, bits)
        k >>= 1
        if k:
            base_lo, base_hi = base_lo * base_lo, base_hi * base_hi
            if bits is not None:
                base_lo, base_hi = rel_down(base_lo, bits), rel_up(base_hi, bits)
    return Enclosure(lo, hi)


# ------------------------------------------------------------------
# 고정소수점 급수 (2^w 배율 정수)
# ------------------------------------------------------------------

def _fixed(q: mpq, w: int, upper: bool) -> mpz:
    num = q.numerator << w
    return gmpy2.c_div(num, q.denominator) if upper else gmpy2.f_div(num, q.denominator)


def _atanh_fixed(z: mpq, w: int, upper: bool) -> mpz:
    # 0 <= z <= 1/2 에서 sum_i z^(2i+1)/(2i+1) 의 방향성 고정소수점 값
    one = mpz(1) << w
    rnd = gmpy2.c_div if upper else gmpy2.f_div
    zf  = _fixed(z, w, upper)
    z2  = rnd(zf * zf, one)
    power = zf
    total = mpz(0)
    k = 1
    if upper:
        while power > 1:
            total += rnd(power, k)
            power = rnd(power * z2, one)
            k += 2
        # z^2 <= 1/4 이므로 남은 항의 합 <= (4/3)·power
        return total + 2 * power + 1
    while power > 0:
        total += rnd(power, k)
        power = rnd(power * z2, one)
        k += 2
    return total


@lru_cache(maxsize=64)
def _ln2_fixed(w: int) -> Tuple[mpz, mpz]:
    """ln 2 = 2 atanh(1/3) 의 고정소수점 (하한, 상한)."""
    third = mpq(1, 3)
    return 2 * _atanh_fixed(third, w, False), 2 * _atanh_fixed(third, w, True)


def ln2_enclosure(bits: int) -> Enclosure:
    """폭 <= 2^-bits 인 ln 2 인클로저."""
    w = bits + config.SERIES_GUARD_BITS
    lo, hi = _ln2_fixed(w)
    return round_enclosure(Enclosure(mpq(lo, mpz(1) << w), mpq(hi, mpz(1) << w)), bits + 2)


def _floor_log2(q: mpq) -> int:
    e = magnitude(q)
    num, den = q.numerator, q.denominator
    # q >= 2^e ?
    below = (num < (den << e)) if e >= 0 else ((num << (-e)) < den)
    return e - 1 if below else e


def _ln_point(q: mpq, w: int, upper: bool) -> mpq:
    # q > 0 의 ln 을 방향성으로: e·ln2 + 2 atanh((m-1)/(m+1)),  m = q / 2^e ∈ [1, 2)
    e = _floor_log2(q)
    m = q / (mpq(2) ** e) if e >= 0 else q * (mpq(2) ** (-e))
    z = (m - 1) / (m + 1)
    wl = w + int(abs(e)).bit_length() + 4
    l2_lo, l2_hi = _ln2_fixed(wl)
    l2 = (l2_hi if e >= 0 else l2_lo) if upper else (l2_lo if e >= 0 else l2_hi)
    total = e * l2 + 2 * _atanh_fixed(z, wl, upper)
    return mpq(total, mpz(1) << wl)


def ln_enclosure(x: Enclosure, prec: Precision) -> Enclosure:
    """
    x 의 모든 점의 자연로그를 감싸는 인클로저.

    폭 <= prec.target_width + (ln x.hi - ln x.lo).

    @param x     양의 인클로저
    @param prec  목표 정밀도
    @returns     [ln x.lo, ln x.hi] 의 바깥쪽 인클로저
    @throws      NonPositiveArgument x.lo <= 0

    @example
        ln_enclosure(Enclosure.point(2), Precision.parse("1e-30"))   # ∋ 0.6931471805...
    """
    if x.lo <= 0:
        raise NonPositiveArgument(f"ln 의 인자는 양수여야 합니다: [{x.lo}, {x.hi}]")
    if x.lo == 1 and x.hi == 1:
        return Enclosure.point(0)
    w = prec.bits + config.SERIES_GUARD_BITS
    lo = _ln_point(x.lo, w, False)
    hi = _ln_point(x.hi, w, True)
    return round_enclosure(Enclosure(lo, hi), prec.bits + 2)


def _exp_nonneg(t: mpq, w: int, upper: bool) -> mpq:
    # t >= 0, 상대 오차 약 2^-(w - s - 8)
    wl = w + int(magnitude(t) if t > 1 else 0) + 8
    l2_lo, l2_hi = _ln2_fixed(wl)
    one_l = mpz(1) << wl
    n = gmpy2.f_div(t.numerator << wl, t.denominator * l2_hi)
    l2 = l2_lo if upper else l2_hi
    r = t - mpq(n * l2, one_l)   # lower 쪽은 r >= 0 이 보장된다
    if r < 0:
        r = mpq(0)

    s = max(4, int(gmpy2.isqrt(w)) // 2)
    wf = w + s + 8
    one = mpz(1) << wf
    rnd = gmpy2.c_div if upper else gmpy2.f_div
    y = rnd(_fixed(r, wf, upper), mpz(1) << s)

    total = one
    term = one
    i = 1
    if upper:
        while term > 1:
            term = rnd(term * y, one * i)
            total += term
            i += 1
        # y <= 1/16 이므로 남은 항 합 <= 2·term
        total += 2 * term + 1
    else:
        while term > 0:
            term = rnd(term * y, one * i)
            total += term
            i += 1
    for _ in range(s):
        total = rnd(total * total, one)
    value = mpq(total, one)
    return value * (mpq(2) ** int(n))


def _exp_point(t: mpq, w: int, upper: bool) -> mpq:
    if t == 0:
        return mpq(1)
    if t > 0:
        return _exp_nonneg(t, w, upper)
    # exp(t) = 1 / exp(-t): 하한은 상한의 역수
    return 1 / _exp_nonneg(-t, w, not upper)


def exp_enclosure(x: Enclosure, prec: Precision) -> Enclosure:
    """
    x 의 모든 점의 지수함수를 감싸는 인클로저 (상대 정밀도 prec.target_width).

    @param x     인클로저
    @param prec  상대 목표 정밀도
    @returns     [exp x.lo, exp x.hi] 의 바깥쪽 인클로저
    """
    w = prec.bits + config.SERIES_GUARD_BITS
    lo = _exp_point(x.lo, w, False)
    hi = _exp_point(x.hi, w, True)
    return round_enclosure_rel(Enclosure(lo, hi), prec.bits + 4)


def _pow_point(base: mpq, t: mpq, w: int, upper: bool) -> mpq:
    if t.denominator == 1:
        return base ** int(t)
    k = gmpy2.f_div(t.numerator, t.denominator)
    f = t - k
    log_base = _ln_point(base, w + 8, upper)
    value = _exp_point(f * log_base, w, upper) * (base ** int(k))
    return rel_up(value, w) if upper else rel_down(value, w)


def pow_enclosure(base: RationalLike, exponent: Enclosure, prec: Precision) -> Enclosure:
    """
    base^t (t ∈ exponent) 를 감싸는 인클로저. 상대 폭 <= prec.target_width 에
    지수 폭에 의한 전파 항이 더해진다. 정수 지수 점은 정확한 값을 돌려준다.

    @param base      1 보다 큰 유리수
    @param exponent  지수 인클로저
    @param prec      상대 목표 정밀도
    @throws          NonPositiveArgument base <= 1

    @example
        pow_enclosure(2, Enclosure.point(3), prec)        # -> [8, 8]
        pow_enclosure(2, Enclosure.point("1/2"), prec)    # ∋ 1.41421356...
    """
    base = to_mpq(base)
    if base <= 1:
        raise NonPositiveArgument(f"밑은 1 보다 커야 합니다: {base}")
    w = prec.bits + config.SERIES_GUARD_BITS
    lo = _pow_point(base, exponent.lo, w, False)
    hi = _pow_point(base, exponent.hi, w, True)
    return Enclosure(lo, hi)


# ------------------------------------------------------------------
# floor(base^t)
# ------------------------------------------------------------------

def _exact_floor_power(base: mpq, t: mpq) -> mpz:
    # t = u/v 정확: floor((base^u)^(1/v)) = iroot(floor(base^u), v)
    if t <= 0:
        return mpz(1) if t == 0 else mpz(0)
    u, v = int(t.numerator), int(t.denominator)
    power = base ** u
    whole = gmpy2.f_div(power.numerator, power.denominator)
    if v == 1:
        return mpz(whole)
    root, _exact = gmpy2.iroot(whole, v)
    return mpz(root)


def _log2_upper(base: mpq) -> int:
    return int(base.numerator.bit_length()) - int(base.denominator.bit_length()) + 1


def floor_power(
    base:     RationalLike,
    exponent: Union[Enclosure, ExponentHandle],
    prec:     Precision,
) -> mpz:
    """
    floor(base^t) 를 인증한다.

    지수가 정확한 유리수 점이면 정수 거듭제곱근으로 바로 결정한다.
    그렇지 않으면 시도마다 보호 비트를 두 배로 늘려 지수를 정제하고,
    base^t 의 인클로저가 [m, m+1) 안에 들어오면 m 을 반환한다.

    @param base      1 보다 큰 유리수
    @param exponent  고정 인클로저 또는 정제 핸들 (bits -> 폭 <= 2^-bits 인 인클로저)
    @param prec      max_refinements 를 시도 횟수로 사용
    @returns         floor(base^t)
    @throws          FloorUndecidable 시도 횟수 소진 시 여전히 정수를 걸칠 때

    @example
        floor_power(2, Enclosure.point(4), prec)           # -> 16
        floor_power(2, Enclosure.point("7/2"), prec)       # -> 11
    """
    base = to_mpq(base)
    if base <= 1:
        raise NonPositiveArgument(f"밑은 1 보다 커야 합니다: {base}")

    if isinstance(exponent, Enclosure):
        fixed = exponent
        handle: ExponentHandle = lambda bits: fixed
    else:
        handle = exponent

    current = handle(config.FLOOR_GUARD_BITS)
    if current.is_point:
        return _exact_floor_power(base, current.lo)

    guard = config.FLOOR_GUARD_BITS
    for _attempt in range(prec.max_refinements):
        top = max(current.hi, mpq(0))
        value_bits = int(gmpy2.c_div(top.numerator, top.denominator)) * _log2_upper(base) + 1
        need = value_bits + guard
        enc = handle(need + _log2_upper(base).bit_length() + 2)
        if enc.is_point:
            return _exact_floor_power(base, enc.lo)
        power = pow_enclosure(base, enc, Precision.from_bits(need))
        m_lo = gmpy2.f_div(power.lo.numerator, power.lo.denominator)
        m_hi = gmpy2.f_div(power.hi.numerator, power.hi.denominator)
        if m_lo == m_hi:
            return mpz(m_lo)
        current = enc
        guard *= 2

    raise FloorUndecidable(
        f"floor({base}^t) 미결정: {prec.max_refinements}회 정제 후에도 정수 경계를 걸침"
    )
