"""
목표 유리수 합을 갖는 수열 구성 서비스.

스케줄 J_n = [beta_n, gamma_n] 안에서 a_n 을 하나씩 고르며 중첩 구간을 유지한다.
깊이 N 의 구간은
    [S(a_1..a_N, gamma_{N+1}, gamma_{N+2}, ...),  S(a_1..a_N, beta_{N+1}, beta_{N+2}, ...)]
이고, 커버링 부등식이 성립하는 N 에서는 a_{N+1} ∈ J_{N+1} 에 대한 하위 구간들의
합집합이 이 구간을 빈틈없이 덮는다. 따라서 목표값 x 를 포함하는 하위 구간이 항상 있다.

혼합 꼬리합 계산 (끝점 하나):
    1. 접두부만으로 정해지는 항           : 정확한 유리수 (상태에 누적 캐시)
    2. a_{N+1} 과 꼬리 H 개 위치가 섞인 항 : 정확한 유리수
    3. 나머지                            : 저비용 하한 beta 와 스케줄 감소 비율로 만든 기하 상한
H 는 config.TAIL_TERMS_START 에서 시작해 비교가 미결정이면 TAIL_TERMS_CAP 까지 두 배로 늘린다.

사용처:
    - CliApplication (construct 명령)
    - services.verification_service : 같은 끝점 계산으로 독립 재검증
"""

from dataclasses import dataclass
from typing      import Callable, Dict, List, Optional, Tuple

import gmpy2
from gmpy2 import mpq, mpz

import config
from models.certificate       import Certificate, CoveringVerdict, LedgerEntry
from models.diagnostics_report import Trilean
from models.enclosure         import Enclosure, Precision, RationalLike, format_rational, to_mpq
from models.sequence_spec     import SequenceKind, SequenceSpec
from models.weight_vector     import WeightVector
from services.enclosure_math  import rel_up, round_enclosure
from services.errors          import (
    CoverageViolated,
    FloorUndecidable,
    PrecisionCapExceeded,
    PreconditionViolation,
    SelectionUndecidable,
    TargetOutsideRange,
)
from services.schedule        import Schedule
from services.sequences       import IntegerSequence


LogCallback = Callable[[str, str], None]

TAIL_BETA  = "beta"
TAIL_GAMMA = "gamma"

# 나머지 상한을 이 유효 비트 수로 올림해 분모 크기를 억제한다
REMAINDER_BITS = 64

# 초기 추정의 고정점 반복 횟수
GUESS_ITERATIONS = 8


# ------------------------------------------------------------------
# 커버링 부등식
# ------------------------------------------------------------------

def covering_check(sched, N: int) -> CoveringVerdict:
    """
    깊이 N 의 커버링 부등식을 정확한 유리수 연산으로 검사한다.

    좌변 하한:
        L = prod_{j<=d-2} (beta_{N-d+2+j} / gamma_{N-d+3+j})^{w_j}
            · (beta_{N+1} / beta_{N+2})^{w_{d-1}} · beta_{N+1}
    우변 상한 (w_{-1} = 0):
        R = w_{d-1} / [ (beta_{N+1} / (beta_{N+1}+1))^{w_{d-2}} - (beta_{N+2} / gamma_{N+2})^{w_{d-1}} ]
    추가 조건 (d >= 3):
        beta_m (beta_{N+1} + 1)^W <= gamma_m beta_{N+1}^W,   m ∈ [N+3, N+d]

    @param sched  Schedule 또는 EnvelopeSchedule
    @param N      깊이 (>= d)
    @returns      PASS 는 L > R 이고 추가 조건이 모두 성립할 때. 분모가 0 이하이면 FAIL
    @throws       PreconditionViolation N < d
    @throws       FloorUndecidable      (전파)

    @example
        covering_check(Schedule(WeightVector((1,)), 2), 1)   # -> FAIL (L = 1, R = 4/3)
        covering_check(Schedule(WeightVector((1,)), 2), 2)   # -> PASS
    """
    w = sched.w.w
    d = len(w)
    if N < d:
        raise PreconditionViolation(f"커버링 검사는 N >= d={d} 에서 정의됩니다: N={N}")

    left = mpq(1)
    for j in range(d - 1):
        if w[j]:
            left *= mpq(sched.beta(N - d + 2 + j), sched.gamma(N - d + 3 + j)) ** w[j]
    b1 = sched.beta(N + 1)
    b2, g2 = sched.bounds(N + 2)
    left *= mpq(b1, b2) ** w[d - 1] * b1

    w_prev = w[d - 2] if d >= 2 else 0
    gap = mpq(b1, b1 + 1) ** w_prev - mpq(b2, g2) ** w[d - 1]
    if gap <= 0:
        return CoveringVerdict.FAIL
    if not left > w[d - 1] / gap:
        return CoveringVerdict.FAIL

    W = sum(w)
    for m in range(N + 3, N + d + 1):
        beta_m, gamma_m = sched.bounds(m)
        if beta_m * (b1 + 1) ** W > gamma_m * b1 ** W:
            return CoveringVerdict.FAIL
    return CoveringVerdict.PASS


def repair_index(sched, horizon: int) -> int:
    """
    수리 블록 경계 n0.

    gamma_k < beta_{k+1} 이 [n0, horizon-1] 전체에서 성립하고 beta_{n0} > n0 - 1 인
    최소 n0 를 찾는다. n < n0 에서는 a_n = n 으로 바꾼다.

    @param sched    스케줄
    @param horizon  검사 상한 인덱스
    @returns        n0 (>= 1). 대부분의 스케줄에서 1 (수리 없음)
    """
    start = 1
    for k in range(horizon - 1, 0, -1):
        if sched.gamma(k) >= sched.beta(k + 1):
            start = k + 1
            break
    while sched.beta(start) <= start - 1:
        start += 1
    return start


def repair_horizon(covering_horizon: int) -> int:
    """수리 경계 검사 범위. 커버링 검사가 참조하는 beta_{N+2} 까지 포함한다."""
    return covering_horizon + 2


def find_covering_start(
    sched,
    lower:   int,
    horizon: int,
) -> Tuple[int, Dict[int, CoveringVerdict]]:
    """
    [lower, horizon] 의 모든 N 에서 커버링을 검사하고, 그 위로 전부 통과하는 최소 M 을 찾는다.

    floor 미결정은 UNDECIDED 로 기록하고 실패와 같이 취급한다.

    @returns (M, N -> verdict). 최상단 N 이 실패하면 M = horizon + 1
    """
    verdicts: Dict[int, CoveringVerdict] = {}
    for N in range(lower, horizon + 1):
        try:
            verdicts[N] = covering_check(sched, N)
        except FloorUndecidable:
            verdicts[N] = CoveringVerdict.UNDECIDED
    M = lower
    for N in range(horizon, lower - 1, -1):
        if verdicts[N] is not CoveringVerdict.PASS:
            M = N + 1
            break
    return M, verdicts


# ------------------------------------------------------------------
# 혼합 꼬리합
# ------------------------------------------------------------------

def _term(w: Tuple[int, ...], value: Callable[[int], mpz], n: int) -> mpq:
    denominator = mpz(1)
    for j, wj in enumerate(w):
        if wj:
            denominator *= value(n + j) ** wj
    return mpq(1, denominator)


def fixed_sum(w: WeightVector, prefix: List[mpz], start: int = 1, base: mpq = mpq(0)) -> mpq:
    """
    접두부만으로 정해지는 항의 합 sum_{n=start}^{N-d+1} 1/(a_n^{w_0}···a_{n+d-1}^{w_{d-1}}).

    @param base  start 이전까지의 누적값
    """
    total = mpq(base)
    value = lambda k: prefix[k - 1]
    for n in range(start, len(prefix) - w.d + 2):
        total += _term(w.w, value, n)
    return total


def endpoint_sum(
    sched,
    prefix:    List[mpz],
    tail:      str,
    extra:     int,
    candidate: Optional[mpz] = None,
) -> Tuple[mpq, mpq]:
    """
    끝점 S(a_1..a_N, [candidate], tail...) 에서 접두부 고정항을 뺀 부분의 (정확한 합, 나머지 상한).

    위치 N+1 에는 candidate (없으면 꼬리값), N+2..N+1+extra 에는 정확한 꼬리값을 놓는다.
    그보다 뒤 위치는 저비용 하한으로 첫 나머지 항을 누르고 감소 비율로 기하 상한을 만든다.

    @param sched      Schedule
    @param prefix     a_1..a_N
    @param tail       TAIL_BETA 또는 TAIL_GAMMA
    @param extra      정확히 계산할 순수 꼬리 위치 수 H (>= 1)
    @param candidate  a_{N+1} 후보
    @returns          (E, R): 실제 값은 [E, E + R] 안
    @throws           NoCertificate 감소 비율이 1 이상
    """
    w = sched.w.w
    d = len(w)
    N = len(prefix)
    last_exact = N + 1 + extra

    def value(k: int) -> mpz:
        if k <= N:
            return prefix[k - 1]
        if k == N + 1 and candidate is not None:
            return candidate
        if k <= last_exact:
            return sched.tail_value(k, tail)
        return sched.cheap_beta_lower(k)

    first = max(1, N - d + 2)
    exact = mpq(0)
    for n in range(first, last_exact - d + 2):
        exact += _term(w, value, n)

    head_index = max(first, last_exact - d + 2)
    rho = mpq(1)
    for j, wj in enumerate(w):
        if wj:
            rho *= sched.decay_ratio(head_index + j) ** wj
    remainder = rel_up(_term(w, value, head_index) / (1 - rho), REMAINDER_BITS)
    return exact, remainder


def _endpoint_enclosure(
    sched,
    prefix: List[mpz],
    fixed:  mpq,
    tail:   str,
    width:  Optional[mpq],
) -> Enclosure:
    extra = config.TAIL_TERMS_START
    while True:
        exact, remainder = endpoint_sum(sched, prefix, tail, extra)
        if width is None or remainder <= width or extra >= config.TAIL_TERMS_CAP:
            return Enclosure(fixed + exact, fixed + exact + remainder)
        extra *= 2


# ------------------------------------------------------------------
# 상태
# ------------------------------------------------------------------

class ConstructionState:
    """
    구성 진행 상태. 단일 소유자가 순차적으로 전진시킨다.

    내부 상태:
        prefix      : a_1..a_N
        ledger      : N = M..현재 까지의 브래킷 원장
        _fixed      : 접두부 고정항 누적합
        _fixed_next : _fixed 에 아직 더하지 않은 첫 항 인덱스
    """

    def __init__(
        self,
        schedule:     Schedule,
        target:       mpq,
        prefix:       List[mpz],
        M:            int,
        repair_start: int,
    ):
        self.schedule:     Schedule          = schedule
        self.target:       mpq               = target
        self.prefix:       List[mpz]         = list(prefix)
        self.M:            int               = M
        self.repair_start: int               = repair_start
        self.ledger:       List[LedgerEntry] = []
        self._fixed:       mpq               = mpq(0)
        self._fixed_next:  int               = 1

    @property
    def N(self) -> int:
        return len(self.prefix)

    @property
    def w(self) -> WeightVector:
        return self.schedule.w

    def fixed_sum(self) -> mpq:
        end = self.N - self.w.d + 2
        if self._fixed_next < end:
            self._fixed = fixed_sum(self.w, self.prefix, self._fixed_next, self._fixed)
            self._fixed_next = end
        return self._fixed

    def record_bracket(self) -> LedgerEntry:
        """현재 깊이의 원장 항목을 만들어 추가한다."""
        entry = ledger_entry(self.schedule, self.prefix, self.fixed_sum())
        self.ledger.append(entry)
        return entry


def ledger_entry(
    sched,
    prefix: List[mpz],
    fixed:  mpq,
    extra:  int = config.TAIL_TERMS_START,
    bits:   int = config.LEDGER_BITS,
) -> LedgerEntry:
    """
    [gamma 끝점 하한, beta 끝점 상한] 을 bits 격자로 바깥쪽 반올림한 원장 항목.
    이전 항목과 교차하지 않으므로 중첩 여부는 검증기가 따로 판정한다.
    H = extra 로 고정하므로 검증기가 같은 값을 재현한다.
    """
    low, _ = endpoint_sum(sched, prefix, TAIL_GAMMA, extra)
    high, slack = endpoint_sum(sched, prefix, TAIL_BETA, extra)
    enc = round_enclosure(Enclosure(fixed + low, fixed + high + slack), bits)
    return LedgerEntry(len(prefix), enc.lo, enc.hi)


def bracket(state: ConstructionState, tail_kind: str, prec: Precision) -> Enclosure:
    """
    현재 접두부에 대한 끝점 하나의 인클로저.

    @param tail_kind  TAIL_BETA (상단 끝점) 또는 TAIL_GAMMA (하단 끝점)
    @throws           PrecisionCapExceeded H 상한에서도 폭이 목표보다 클 때

    @example
        # w=(1), C=2, prefix (16)
        bracket(state, TAIL_BETA, prec)   # ∋ 1/16 + 1/512 + 1/beta_3 + ...
    """
    if state.N < state.w.d:
        raise PreconditionViolation(f"접두부 길이가 d={state.w.d} 이상이어야 합니다")
    enc = _endpoint_enclosure(
        state.schedule, state.prefix, state.fixed_sum(), tail_kind, prec.target_width
    )
    if enc.width > prec.target_width:
        raise PrecisionCapExceeded(
            f"H={config.TAIL_TERMS_CAP} 에서 꼬리 폭 {format_rational(enc.width)} 이 목표보다 큽니다"
        )
    return enc


def attainable_interval(
    sched,
    prefix: List[mpz],
    prec:   Precision,
) -> Tuple[Enclosure, Enclosure]:
    """
    접두부 a_1..a_M 으로 도달 가능한 구간의 (하단 끝점, 상단 끝점) 인클로저.

    각 끝점은 폭 <= prec.target_width 를 목표로 하되 H 상한에서 멈춘다.
    """
    fixed = fixed_sum(sched.w, prefix)
    lo = _endpoint_enclosure(sched, prefix, fixed, TAIL_GAMMA, prec.target_width)
    hi = _endpoint_enclosure(sched, prefix, fixed, TAIL_BETA, prec.target_width)
    return lo, hi


def attainable_midpoint(lo_end: Enclosure, hi_end: Enclosure) -> mpq:
    """
    (lo_end.hi, hi_end.lo) 안에 있는 비트 수가 가장 적은 이진 유리수.

    @throws TargetOutsideRange 두 끝점 인클로저가 겹쳐 내부가 인증되지 않을 때

    @example
        attainable_midpoint(Enclosure.point("1/3"), Enclosure.point("2/3"))   # -> 1/2
    """
    a, b = lo_end.hi, hi_end.lo
    if a >= b:
        raise TargetOutsideRange("도달 가능 구간의 내부가 인증되지 않았습니다")
    k = 0
    while True:
        scale = mpz(1) << k
        m = gmpy2.f_div(a.numerator * scale, a.denominator) + 1
        candidate = mpq(m, scale)
        if candidate < b:
            return candidate
        k += 1


# ------------------------------------------------------------------
# 후보 선택
# ------------------------------------------------------------------

def _decide(
    sched,
    prefix:    List[mpz],
    candidate: mpz,
    tail:      str,
    target:    mpq,
) -> Trilean:
    # gamma 꼬리: 끝점 <= target ?   beta 꼬리: 끝점 >= target ?
    extra = config.TAIL_TERMS_START
    while extra <= config.TAIL_TERMS_CAP:
        exact, remainder = endpoint_sum(sched, prefix, tail, extra, candidate)
        if tail == TAIL_GAMMA:
            if exact + remainder <= target:
                return Trilean.TRUE
            if exact > target:
                return Trilean.FALSE
        else:
            if exact >= target:
                return Trilean.TRUE
            if exact + remainder < target:
                return Trilean.FALSE
        extra *= 2
    return Trilean.UNDECIDED


def lower_endpoint_at_most(sched, prefix, candidate, target) -> Trilean:
    """S(prefix, candidate, gamma...) - 고정항 <= target 의 3값 판정."""
    return _decide(sched, prefix, candidate, TAIL_GAMMA, target)


def upper_endpoint_at_least(sched, prefix, candidate, target) -> Trilean:
    """S(prefix, candidate, beta...) - 고정항 >= target 의 3값 판정."""
    return _decide(sched, prefix, candidate, TAIL_BETA, target)


def _leading_coefficient(w: Tuple[int, ...], prefix: List[mpz]) -> mpq:
    # a_{N+1} 이 마지막 자리에 오는 항 K · a_{N+1}^{-w_{d-1}} 의 K
    d, N = len(w), len(prefix)
    denominator = mpz(1)
    for j in range(d - 1):
        if w[j]:
            denominator *= prefix[N - d + 1 + j] ** w[j]
    return mpq(1, denominator)


def _initial_guess(sched, prefix: List[mpz], target: mpq, low: mpz, high: mpz) -> mpz:
    w = sched.w.w
    last = w[-1]
    K = _leading_coefficient(w, prefix)
    u = low
    for _ in range(GUESS_ITERATIONS):
        exact, _ = endpoint_sum(sched, prefix, TAIL_GAMMA, config.TAIL_TERMS_START, u)
        rest = target - (exact - K / u ** last)
        if rest <= 0:
            guess = high
        else:
            q = K / rest
            guess, _exact = gmpy2.iroot(gmpy2.c_div(q.numerator, q.denominator), last)
            guess = mpz(guess)
            if guess ** last < q:
                guess += 1
        guess = min(max(guess, low), high)
        if guess == u:
            break
        u = guess
    return u


def _smallest_admissible(
    predicate: Callable[[mpz], bool],
    low:       mpz,
    high:      mpz,
    guess:     mpz,
) -> mpz:
    # predicate 는 단조 (작은 쪽 False, 큰 쪽 True) 이고 predicate(high) 는 True
    if predicate(guess):
        hi, step = guess, mpz(1)
        while True:
            trial = hi - step
            if trial < low:
                lo = low - 1
                break
            if predicate(trial):
                hi, step = trial, step * 2
            else:
                lo = trial
                break
    else:
        lo, step = guess, mpz(1)
        while True:
            trial = lo + step
            if trial >= high:
                hi = high
                break
            if predicate(trial):
                hi = trial
                break
            lo, step = trial, step * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi


def construct_next(state: ConstructionState, log: Optional[LogCallback] = None) -> ConstructionState:
    """
    a_{N+1} ∈ J_{N+1} 을 골라 접두부에 붙이고 새 원장 항목을 기록한다.

    하단 끝점 S(.., a_{N+1}, gamma..) <= x 인 최소 후보를 고른다. 두 끝점 모두
    a_{N+1} 에 대해 감소하므로 단조 이진 탐색이 가능하다. 선택 후 상단 끝점
    S(.., a_{N+1}, beta..) >= x 를 인증한다.

    @throws SelectionUndecidable H 상한에서도 후보 판정이 미결정
    @throws CoverageViolated     어떤 후보도 x 를 포함하지 못함 (커버링 가정 위반)
    """
    if log is None:
        log = lambda tag, msg: None

    sched = state.schedule
    N = state.N
    low, high = sched.bounds(N + 1)
    target = state.target - state.fixed_sum()
    evaluations = [0]

    def admissible(u: mpz) -> bool:
        evaluations[0] += 1
        verdict = lower_endpoint_at_most(sched, state.prefix, u, target)
        if verdict is Trilean.UNDECIDED:
            raise SelectionUndecidable(
                f"a_{N + 1} 후보 판정 미결정 (H <= {config.TAIL_TERMS_CAP})"
            )
        return verdict is Trilean.TRUE

    if not admissible(high):
        raise CoverageViolated(f"N={N}: x 가 현재 구간의 하단보다 작습니다")

    guess = _initial_guess(sched, state.prefix, target, low, high)
    chosen = _smallest_admissible(admissible, low, high, guess)

    upper = upper_endpoint_at_least(sched, state.prefix, chosen, target)
    if upper is Trilean.UNDECIDED:
        raise SelectionUndecidable(f"a_{N + 1} 상단 끝점 판정 미결정")
    if upper is Trilean.FALSE:
        raise CoverageViolated(f"N={N}: 선택한 a_{N + 1} 의 구간이 x 를 포함하지 않습니다")

    state.prefix.append(chosen)
    state.record_bracket()
    log(config.LOG_TAG_INFO, f"a_{N + 1} 선택 완료 (후보 평가 {evaluations[0]}회, {chosen.bit_length()} 비트)")
    return state


# ------------------------------------------------------------------
# 전체 구성
# ------------------------------------------------------------------

@dataclass
class ConstructedSeries:
    """구성된 a_1..a_depth 와 그 스케줄."""
    terms:        List[mpz]
    schedule:     Schedule
    repair_start: int
    M:            int

    @property
    def depth(self) -> int:
        return len(self.terms)

    def sequence(self) -> IntegerSequence:
        spec = SequenceSpec(SequenceKind.CONSTRUCTED, terms=tuple(int(t) for t in self.terms))
        return IntegerSequence(spec)


def construct(
    w:     WeightVector,
    C:     RationalLike,
    x:     Optional[RationalLike],
    depth: int,
    prec:  Precision,
    log:   Optional[LogCallback] = None,
) -> Tuple[ConstructedSeries, Certificate]:
    """
    합이 x 인 수열의 앞 depth 항과 인증서를 만든다.

    절차:
        1. 스케줄 생성, 수리 경계 n0 와 커버링 시작 M 계산 (검사 범위 depth + d)
        2. 접두부 a_n = n (n < n0), a_n = beta_n (n0 <= n <= M)
        3. x 가 도달 가능 구간 내부인지 인증 (x 가 None 이면 가장 단순한 내부 이진 유리수)
        4. N = M..depth-1 에서 construct_next 반복

    @param w      가중치 벡터
    @param C      스케줄 밑 (> 1)
    @param x      목표 합 (None 이면 attainable_midpoint)
    @param depth  구성할 항 수
    @param prec   도달 가능 구간 끝점 인클로저 목표 폭
    @param log    로그 콜백 (tag, message)
    @throws       TargetOutsideRange, CoverageViolated, SelectionUndecidable, FloorUndecidable

    @example
        series, cert = construct(WeightVector((1,)), 2, None, 20, Precision.parse("1e-12"))
        # len(series.terms) == 20, cert.final_bracket.width < 10^-30
    """
    if log is None:
        log = lambda tag, msg: None

    d = w.d
    sched = Schedule(w, C)
    horizon = int(depth) + d + config.COVERING_LOOKAHEAD
    log(config.LOG_TAG_INFO, f"스케줄 생성: w={w.text}, C={format_rational(sched.C)}, "
                             f"c~ ∈ [{format_rational(sched.c_tilde.lo)}, {format_rational(sched.c_tilde.hi)}]")

    n0 = repair_index(sched, repair_horizon(horizon))
    M, verdicts = find_covering_start(sched, max(d, n0 + d - 2), horizon)
    if M > depth:
        raise CoverageViolated(f"커버링 시작 M={M} 이 깊이 {depth} 보다 큽니다")
    log(config.LOG_TAG_INFO, f"수리 경계 n0={n0}, 커버링 시작 M={M} (검사 범위 {horizon})")

    prefix = [mpz(n) for n in range(1, n0)] + [sched.beta(n) for n in range(n0, M + 1)]
    lo_end, hi_end = attainable_interval(sched, prefix, prec)
    if x is None:
        x = attainable_midpoint(lo_end, hi_end)
    x = to_mpq(x)
    if not (lo_end.hi < x < hi_end.lo):
        raise TargetOutsideRange(
            f"x={format_rational(x)} 가 도달 가능 구간 "
            f"[{format_rational(lo_end.hi)}, {format_rational(hi_end.lo)}] 내부가 아닙니다"
        )

    state = ConstructionState(sched, x, prefix, M, n0)
    state.record_bracket()
    while state.N < depth:
        construct_next(state, log)

    cert = Certificate(
        w                        = w,
        C                        = sched.C,
        c_tilde                  = sched.c_tilde.enclosure,
        target                   = x,
        M                        = M,
        covering_checked_horizon = horizon,
        repair_start             = n0,
        terms                    = list(state.prefix),
        ledger                   = list(state.ledger),
        assumptions              = [config.COVERING_ASSUMPTION],
    )
    log(config.LOG_TAG_OK, f"구성 완료: {depth}항, 최종 구간 폭 {format_rational(cert.final_bracket.width)}")
    return ConstructedSeries(list(state.prefix), sched, n0, M), cert
