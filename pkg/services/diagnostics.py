"""
비유리성 진단량 계산 서비스.

증명에 등장하는 유한 양을 계산 가능한 검사로 바꾼다.
    mu_n               = ln a_n / c^n
    봉우리 집합          = { m : mu_{m+1} > (1 + 1/m^2) max_{n<=m} mu_n }
    국소 봉우리 부등식    (a_P···a_Q)^{W(Q^2+1)} · a_{Q+1} <= x_{Q+1}^{Q^2+1}   (정확한 정수 비교)
    D_N                = prod_{k<=N} a_k^W
    Mahler 간격          D_N · r_N
    성장 지수            a_n^{1/c^n} = exp(ln a_n / c^n)

엄격 부등식은 3값 논리로 판정하며, 미결정이면 정밀도를 한 번 두 배로 올려 재시도한다.

사용처:
    - CliApplication (diagnose 명령)
    - tests: 구성된 수열의 성장 추세 검사
"""

from typing import Callable, List, Optional, Sequence, Union

from gmpy2 import mpq, mpz

import config
from models.diagnostics_report import (
    LocalPeakResult,
    LocalPeakVerdict,
    MahlerGapReport,
    MuSequence,
    PeakSet,
    Trilean,
)
from models.enclosure   import Enclosure, Precision, RationalLike, to_mpq
from models.polynomial  import RootEnclosure
from services.enclosure_math import (
    div,
    exp_enclosure,
    int_power,
    ln_enclosure,
    round_enclosure,
    round_enclosure_rel,
)
from services.errors    import IndexBeyondHorizon, PreconditionViolation
from services.series    import WeightedSeriesInstance, partial_sum, tail_bound


BaseLike = Union[RootEnclosure, Enclosure, RationalLike]


def as_enclosure(base: BaseLike) -> Enclosure:
    """RootEnclosure / Enclosure / 유리수를 Enclosure 로 통일한다."""
    if isinstance(base, RootEnclosure):
        return base.enclosure
    if isinstance(base, Enclosure):
        return base
    return Enclosure.point(to_mpq(base))


def compare_strict(lhs: Enclosure, rhs: Enclosure) -> Trilean:
    """lhs > rhs 를 인클로저로 판정한다 (lo > hi 이면 참, hi <= lo 이면 거짓)."""
    if lhs.lo > rhs.hi:
        return Trilean.TRUE
    if lhs.hi <= rhs.lo:
        return Trilean.FALSE
    return Trilean.UNDECIDED


def distance_upper(enc: Enclosure, target: RationalLike) -> mpq:
    """enc 의 모든 점과 target 사이 거리의 상한."""
    t = to_mpq(target)
    return max(abs(enc.lo - t), abs(enc.hi - t))


# ------------------------------------------------------------------
# mu_n
# ------------------------------------------------------------------

def mu(inst: WeightedSeriesInstance, c: BaseLike, n: int, prec: Precision) -> Enclosure:
    """
    mu_n = ln a_n / c^n 의 인클로저.

    @param inst  급수 인스턴스 (a 수열 사용)
    @param c     c > 1 의 인클로저
    @param n     인덱스 (>= 1)
    @param prec  목표 정밀도
    @throws      PreconditionViolation c.lo <= 1

    @example
        # a_n = 2^(2^n), c = 2
        mu(inst, 2, 5, prec)   # ∋ ln 2
    """
    c_enc = as_enclosure(c)
    if c_enc.lo <= 1:
        raise PreconditionViolation(f"c 는 1 보다 커야 합니다: [{c_enc.lo}, {c_enc.hi}]")
    a_n = inst.a.term(n)
    if a_n == 1:
        return Enclosure.point(0)
    work = Precision.from_bits(prec.bits + 8, prec.max_refinements)
    log_a = ln_enclosure(Enclosure.point(a_n), work)
    c_pow = int_power(c_enc, n, bits=prec.bits + 16 + n.bit_length())
    return round_enclosure(div(log_a, c_pow), prec.bits + 2)


def mu_sequence(
    inst:    WeightedSeriesInstance,
    c:       BaseLike,
    horizon: int,
    prec:    Precision,
) -> MuSequence:
    """mu_1..mu_horizon."""
    values = [mu(inst, c, n, prec) for n in range(1, horizon + 1)]
    return MuSequence(c=as_enclosure(c), values=values, source=inst.a.spec.descriptor)


# ------------------------------------------------------------------
# 봉우리
# ------------------------------------------------------------------

def _running_max(values: Sequence[Enclosure]) -> Enclosure:
    return Enclosure(max(v.lo for v in values), max(v.hi for v in values))


def _peak_rhs(window: Sequence[Enclosure], m: int) -> Enclosure:
    factor = 1 + mpq(1, m * m)
    top = _running_max(window)
    return Enclosure(top.lo * factor, top.hi * factor)


def peak_predicate(mus: MuSequence, m: int) -> Trilean:
    """mu_{m+1} > (1 + 1/m^2) max_{n<=m} mu_n."""
    return compare_strict(mus.mu(m + 1), _peak_rhs(mus.values[:m], m))


def peaks(
    mus:     MuSequence,
    horizon: Optional[int] = None,
    refine:  Optional[Callable[[], MuSequence]] = None,
) -> PeakSet:
    """
    m <= horizon-1 중 봉우리 술어가 인증되는 인덱스.

    refine 이 주어지면 미결정 인덱스만 두 배 정밀도 mu 로 한 번 재판정한다.

    @param mus      mu_1..mu_H
    @param horizon  사용할 mu 개수 (기본: 전체)
    @param refine   두 배 정밀도 MuSequence 를 만드는 콜백
    @returns        PeakSet

    @example
        # mu_n = n
        peaks(mus).indices   # -> [2, 3, ..., H-1]
    """
    horizon = mus.horizon if horizon is None else min(horizon, mus.horizon)
    result = PeakSet(horizon=horizon)
    pending = []
    for m in range(1, horizon):
        verdict = peak_predicate(mus, m)
        if verdict is Trilean.TRUE:
            result.indices.append(m)
        elif verdict is Trilean.UNDECIDED:
            pending.append(m)

    if pending and refine is not None:
        finer = refine()
        for m in pending:
            verdict = peak_predicate(finer, m)
            if verdict is Trilean.TRUE:
                result.indices.append(m)
            elif verdict is Trilean.UNDECIDED:
                result.undecided.append(m)
        result.indices.sort()
    else:
        result.undecided.extend(pending)
    return result


def peak_set(
    inst:    WeightedSeriesInstance,
    c:       BaseLike,
    horizon: int,
    prec:    Precision,
) -> PeakSet:
    """mu 계산부터 봉우리 판정(미결정 시 정밀도 배가 재시도)까지."""
    mus = mu_sequence(inst, c, horizon, prec)
    finer = prec.tightened(config.PEAK_RETRY_FACTOR)
    return peaks(mus, horizon, refine=lambda: mu_sequence(inst, c, horizon, finer))


# ------------------------------------------------------------------
# 국소 봉우리 부등식
# ------------------------------------------------------------------

def _peak_hypothesis(mus: MuSequence, P: int, Q: int) -> Trilean:
    return compare_strict(mus.mu(Q + 1), _peak_rhs(mus.values[P - 1:Q], Q))


def local_peak_check(
    inst:   WeightedSeriesInstance,
    P:      int,
    Q:      int,
    mus:    MuSequence,
    refine: Optional[Callable[[], MuSequence]] = None,
) -> LocalPeakVerdict:
    """
    mu_{Q+1} > (1 + 1/Q^2) max_{P<=k<=Q} mu_k 가 인증되면
    (a_P···a_Q)^{W(Q^2+1)} · a_{Q+1} <= x_{Q+1}^{Q^2+1} 를 정확히 판정한다.

    가설이 미결정이면 refine 으로 받은 두 배 정밀도 mu 로 한 번 재판정한다.

    @param inst    급수 인스턴스
    @param P, Q    1 <= P, Q >= P + d - 2
    @param mus     mu_1..mu_{Q+1} 이상
    @param refine  두 배 정밀도 MuSequence 를 만드는 콜백
    @returns       HOLDS / FAILS / HYPOTHESIS_NOT_MET / UNDECIDED
    @throws        PreconditionViolation  Q < P + d - 2 또는 P < 1
    @throws        IndexBeyondHorizon     mu 또는 수열 항이 부족할 때

    @example
        # w=(1,1), a_n = 2^(2^n), P=1, Q=3: 2^156 <= 2^240
        local_peak_check(inst, 1, 3, mus)   # -> HOLDS (가설이 인증되는 경우)
    """
    d = inst.d
    if P < 1 or Q < P + d - 2 or Q < P:
        raise PreconditionViolation(f"Q >= P + d - 2 이어야 합니다: P={P}, Q={Q}, d={d}")
    if mus.horizon < Q + 1:
        raise IndexBeyondHorizon(f"mu_{Q + 1} 이 필요합니다 (보유: {mus.horizon})")

    hypothesis = _peak_hypothesis(mus, P, Q)
    if hypothesis is Trilean.UNDECIDED and refine is not None:
        hypothesis = _peak_hypothesis(refine(), P, Q)
    if hypothesis is Trilean.FALSE:
        return LocalPeakVerdict.HYPOTHESIS_NOT_MET
    if hypothesis is Trilean.UNDECIDED:
        return LocalPeakVerdict.UNDECIDED

    e = Q * Q + 1
    block = mpz(1)
    for k in range(P, Q + 1):
        block *= inst.a.term(k)
    lhs = block ** (inst.w.W * e) * inst.a.term(Q + 1)
    rhs = inst.x(Q + 1) ** e
    return LocalPeakVerdict.HOLDS if lhs <= rhs else LocalPeakVerdict.FAILS


def local_peak_sweep(
    inst:   WeightedSeriesInstance,
    mus:    MuSequence,
    P_max:  int,
    Q_max:  int,
    refine: Optional[Callable[[], MuSequence]] = None,
) -> List[LocalPeakResult]:
    """
    1 <= P <= P_max, max(P, P+d-2) <= Q <= Q_max 인 모든 쌍을 판정한다.

    두 배 정밀도 mu 는 처음 필요할 때 한 번만 만든다.
    """
    cache: List[MuSequence] = []

    def finer() -> MuSequence:
        if not cache:
            cache.append(refine())
        return cache[0]

    results = []
    for P in range(1, P_max + 1):
        for Q in range(max(P, P + inst.d - 2), Q_max + 1):
            verdict = local_peak_check(inst, P, Q, mus, finer if refine is not None else None)
            results.append(LocalPeakResult(P, Q, verdict))
    return results


# ------------------------------------------------------------------
# Mahler 간격
# ------------------------------------------------------------------

def d_n(inst: WeightedSeriesInstance, N: int) -> mpz:
    """D_N = prod_{k=1}^{N} a_k^W."""
    product = mpz(1)
    for k in range(1, N + 1):
        product *= inst.a.term(k)
    return product ** inst.w.W


def mahler_gap(inst: WeightedSeriesInstance, N: int, prec: Precision) -> MahlerGapReport:
    """
    D_N, D_N · r_N 의 인클로저, D_N · partial_sum(N) 의 정수성.

    간격 인클로저는 D_N · [sum_{n=max(N+1,d)}^{N+L} z_n, 같은 합 + tail_bound(N+L)] 이며,
    상대 폭이 목표 이하가 될 때까지 L 을 두 배로 늘린다 (최대 max_refinements 회).
    N < d - 1 이면 첫 항 z_d 까지 닿도록 L 을 d - 1 - N 이상에서 시작한다.

    @throws NoCertificate 꼬리 상한을 인증할 수 없는 수열
    """
    D = d_n(inst, N)
    S = partial_sum(inst, N)
    integrality_ok = (D * S).denominator == 1

    first = max(N + 1, inst.d)
    L = max(1, inst.d - 1 - N)
    gap = None
    for _ in range(prec.max_refinements):
        head = mpq(0)
        for n in range(first, N + L + 1):
            head += inst.z(n)
        upper = head + tail_bound(inst, N + L)
        gap = Enclosure(D * head, D * upper)
        if gap.width <= prec.target_width * gap.lo:
            break
        L *= 2
    return MahlerGapReport(N=N, D_N=D, gap=round_enclosure_rel(gap, prec.bits + 4),
                           integrality_ok=integrality_ok)


def gap_ledger(
    inst:    WeightedSeriesInstance,
    N_range: Sequence[int],
    prec:    Precision,
) -> List[MahlerGapReport]:
    return [mahler_gap(inst, N, prec) for N in N_range]


# ------------------------------------------------------------------
# 성장 지수
# ------------------------------------------------------------------

def growth_exponent(
    inst: WeightedSeriesInstance,
    base: BaseLike,
    n:    int,
    prec: Precision,
) -> Enclosure:
    """
    a_n^{1/base^n} = exp(ln a_n / base^n) 의 인클로저.

    @example
        # a_n = 2^(2^n), base 2
        growth_exponent(inst, 2, 6, prec)   # ∋ 2
    """
    b_enc = as_enclosure(base)
    if b_enc.lo <= 1:
        raise PreconditionViolation(f"base 는 1 보다 커야 합니다: [{b_enc.lo}, {b_enc.hi}]")
    a_n = inst.a.term(n)
    if a_n == 1:
        return Enclosure.point(1)
    work = Precision.from_bits(prec.bits + 16, prec.max_refinements)
    log_a = ln_enclosure(Enclosure.point(a_n), work)
    b_pow = int_power(b_enc, n, bits=prec.bits + 24 + n.bit_length())
    return exp_enclosure(div(log_a, b_pow), Precision.from_bits(prec.bits + 4))
