"""
가중 역수 급수 평가 서비스.

인덱스를 d 만큼 이동한 표기를 사용한다.
    x_n = a_{n-d+1}^{w_0} a_{n-d+2}^{w_1} ··· a_n^{w_{d-1}}    (n >= d)
    y_n = b_{n-d+1}
    S   = sum_{n>=d} y_n / x_n   (= sum_{n>=1} b_n / (a_n^{w_0} ··· a_{n+d-1}^{w_{d-1}}))

꼬리 r_N = sum_{n>N} y_n/x_n 의 상한은 수열별 인증 비율 rho 로 구한다.
    y_{n+1}/x_{n+1} <= rho · y_n/x_n  (n > N)  =>  r_N <= (y_{N+1}/x_{N+1}) / (1 - rho)
    rho = growth_b(N-d+2) · prod_j decay_a(N-d+2+j)^{w_j}

사용처:
    - CliApplication (eval, hypotheses 명령)
    - services.diagnostics : 부분합, 꼬리 상한 (Mahler 간격)
"""

from dataclasses import dataclass
from typing      import List, Optional

import gmpy2
from gmpy2 import mpq, mpz

import config
from models.enclosure     import Enclosure, Precision, RationalLike, format_rational, to_mpq
from models.sequence_spec import HypothesisReport, SequenceKind, SequenceSpec
from models.weight_vector import WeightVector
from services.enclosure_math import round_enclosure
from services.errors      import (
    IndexBeyondHorizon,
    InvalidSequence,
    NoCertificate,
    PrecisionCapExceeded,
    PreconditionViolation,
)
from services.sequences   import IntegerSequence


# ------------------------------------------------------------------
# 수열 입력
# ------------------------------------------------------------------

def load_terms(file_path: str) -> List[mpz]:
    """
    줄 단위 십진 정수 파일을 읽는다.

    UTF-8 -> CP949 -> Latin-1 순서로 인코딩을 시도한다.
    빈 줄과 '#' 으로 시작하는 줄은 건너뛴다.

    @param file_path  수열 파일 경로
    @returns          양의 정수 리스트 (파일 순서 = a_1, a_2, ...)
    @throws           InvalidSequence 정수가 아니거나 양수가 아닌 줄, 읽기 실패

    @example
        # terms.txt: "2\n3\n7\n43\n"
        load_terms("terms.txt")   # -> [2, 3, 7, 43]
    """
    text = None
    for encoding in ("utf-8", "cp949", "latin-1"):
        try:
            with open(file_path, "r", encoding=encoding) as f:
                text = f.read()
            break
        except UnicodeDecodeError:
            continue
        except OSError as e:
            raise InvalidSequence(f"수열 파일을 읽을 수 없습니다: {file_path} ({e})")
    if text is None:
        raise InvalidSequence(f"파일 인코딩을 판별할 수 없습니다: {file_path}")

    terms = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = mpz(line)
        except ValueError:
            raise InvalidSequence(f"{file_path}:{line_no}: 정수가 아닙니다: {line!r}")
        if value < 1:
            raise InvalidSequence(f"{file_path}:{line_no}: 양의 정수여야 합니다: {line}")
        terms.append(value)
    return terms


def sequence_from_descriptor(text: str, schedule=None) -> IntegerSequence:
    """
    기술자 문자열을 IntegerSequence 로 만든다. file:PATH 는 여기서 읽는다.

    @throws InvalidSequence 기술자 해석 실패
    """
    try:
        spec = SequenceSpec.parse(text)
    except ValueError as e:
        raise InvalidSequence(str(e))
    if spec.kind is SequenceKind.EXPLICIT and spec.source:
        spec = SequenceSpec.explicit(load_terms(spec.source), source=spec.source)
    return IntegerSequence(spec, schedule)


_SYLVESTER = IntegerSequence(SequenceSpec(SequenceKind.SYLVESTER))


def sylvester(n: int) -> mpz:
    """
    Sylvester 수열 s_n (s_1 = 2, s_{k+1} = s_k^2 - s_k + 1).

    @example
        [sylvester(n) for n in range(1, 6)]   # -> [2, 3, 7, 43, 1807]
    """
    return _SYLVESTER.term(n)


# ------------------------------------------------------------------
# 가중 급수 인스턴스
# ------------------------------------------------------------------

class WeightedSeriesInstance:
    """
    (a, b, w) 로 정해지는 급수 S = sum_{n>=d} y_n / x_n.

    내부 상태:
        _a : 분모 수열
        _b : 분자 수열 (기본 상수 1)
        _w : 가중치 벡터
    """

    def __init__(self, a: IntegerSequence, w: WeightVector, b: Optional[IntegerSequence] = None):
        self._a = a
        self._b = b if b is not None else IntegerSequence(SequenceSpec(SequenceKind.ONE))
        self._w = w

    @property
    def a(self) -> IntegerSequence:
        return self._a

    @property
    def b(self) -> IntegerSequence:
        return self._b

    @property
    def w(self) -> WeightVector:
        return self._w

    @property
    def d(self) -> int:
        return self._w.d

    def x(self, n: int) -> mpz:
        if n < self.d:
            raise IndexBeyondHorizon(f"x_n 은 n >= d={self.d} 에서 정의됩니다: n={n}")
        d = self.d
        value = mpz(1)
        for j, wj in enumerate(self._w.w):
            if wj:
                value *= self._a.term(n - d + 1 + j) ** wj
        return value

    def y(self, n: int) -> mpz:
        return self._b.term(n - self.d + 1)

    def z(self, n: int) -> mpq:
        """n 번째 항 y_n / x_n (정확)."""
        return mpq(self.y(n), self.x(n))

    def to_dict(self) -> dict:
        return {
            "a": self._a.spec.descriptor,
            "b": self._b.spec.descriptor,
            "w": self._w.to_list(),
        }


@dataclass
class SeriesEvaluation:
    """eval_series 의 상세 결과: 사용한 N, 정확한 부분합, 꼬리 상한, 최종 인클로저."""
    N:         int
    partial:   mpq
    tail:      mpq
    enclosure: Enclosure

    def to_dict(self) -> dict:
        return {
            "N":         self.N,
            "partial":   format_rational(self.partial),
            "tail":      format_rational(self.tail),
            "enclosure": self.enclosure.to_dict(),
            "width":     format_rational(self.enclosure.width),
        }


# ------------------------------------------------------------------
# 연산
# ------------------------------------------------------------------

def term_xn(inst: WeightedSeriesInstance, n: int) -> mpz:
    """
    x_n = a_{n-d+1}^{w_0} ··· a_n^{w_{d-1}} (정확한 정수).

    @throws IndexBeyondHorizon  n < d 또는 필요한 항이 구체화 범위 밖

    @example
        # w=(1,0,2,1), a_n = 2^n
        term_xn(inst, 4)   # -> 2048
    """
    return inst.x(n)


def partial_sum(inst: WeightedSeriesInstance, N: int) -> mpq:
    """
    sum_{n=d}^{N} y_n / x_n (정확한 유리수). N < d 이면 0.

    @throws IndexBeyondHorizon
    """
    total = mpq(0)
    for n in range(inst.d, N + 1):
        total += inst.z(n)
    return total


def _tail_ratio(inst: WeightedSeriesInstance, N: int) -> mpq:
    m = N - inst.d + 2
    rho = inst.b.growth_ratio(max(m, 1))
    for j, wj in enumerate(inst.w.w):
        if wj:
            rho *= inst.a.decay_ratio(max(m + j, 1)) ** wj
    return rho


def tail_bound(inst: WeightedSeriesInstance, N: int) -> mpq:
    """
    r_N = sum_{n>N} y_n / x_n 의 인증된 유리수 상한 (y_{N+1}/x_{N+1}) / (1 - rho).

    @param inst  급수 인스턴스
    @param N     N >= d - 1
    @returns     B >= r_N
    @throws      NoCertificate  수열 종류가 비율을 인증하지 못하거나 rho >= 1

    @example
        # w=(1), a_n = 2^n
        tail_bound(inst, 5)   # -> 1/32 (정확한 꼬리와 같음)
    """
    rho = _tail_ratio(inst, N)
    if rho >= 1:
        raise NoCertificate(f"N={N} 에서 인증 비율이 1 이상입니다 (rho={format_rational(rho)})")
    return inst.z(N + 1) / (1 - rho)


def eval_series_detail(inst: WeightedSeriesInstance, prec: Precision) -> SeriesEvaluation:
    """
    꼬리 상한이 목표 폭의 절반 이하가 되는 최소 N 에서 [S_N, S_N + B] 를 만든다.

    @throws NoCertificate        수열 종류가 인증 비율을 제공하지 않음
    @throws PrecisionCapExceeded config.SERIES_MAX_INDEX 안에서 목표 폭 미달
    """
    target = prec.target_width / 2
    N = inst.d
    total = inst.z(N)
    while N <= config.SERIES_MAX_INDEX:
        rho = _tail_ratio(inst, N)
        if rho < 1:
            bound = inst.z(N + 1) / (1 - rho)
            if bound <= target:
                enc = round_enclosure(Enclosure(total, total + bound), prec.bits + 2)
                return SeriesEvaluation(N, total, bound, enc)
        N += 1
        total += inst.z(N)
    raise PrecisionCapExceeded(
        f"N <= {config.SERIES_MAX_INDEX} 에서 목표 폭 {format_rational(prec.target_width)} 에 도달하지 못했습니다"
    )


def eval_series(inst: WeightedSeriesInstance, prec: Precision) -> Enclosure:
    """
    S_w 의 인클로저.

    @example
        eval_series(WeightedSeriesInstance(IntegerSequence.of("geometric:2"),
                                           WeightVector((1, 1))), prec)   # ∋ 1/6
    """
    return eval_series_detail(inst, prec).enclosure


def check_hypotheses(
    inst:    WeightedSeriesInstance,
    eta:     RationalLike,
    tau:     RationalLike,
    horizon: int,
) -> HypothesisReport:
    """
    1 <= n <= horizon 에서 b_n <= n^eta 와 a_n^{w_0}···a_{n+d-1}^{w_{d-1}} >= n^{1+tau} 를 검사한다.

    유리 지수는 분모를 지워 정수 거듭제곱 비교로 바꾼다.
        eta = p/q :  b_n^q >= ... 대신 b_n^q <= n^p
        tau = r/s :  (곱)^s >= n^{r+s}

    @throws PreconditionViolation  0 < eta < tau 가 아닐 때
    """
    eta, tau = to_mpq(eta), to_mpq(tau)
    if not (0 < eta < tau):
        raise PreconditionViolation(f"0 < eta < tau 이어야 합니다: eta={eta}, tau={tau}")
    p, q = int(eta.numerator), int(eta.denominator)
    r, s = int(tau.numerator), int(tau.denominator)

    report = HypothesisReport(eta=eta, tau=tau, horizon=int(horizon))
    for n in range(1, int(horizon) + 1):
        nn = mpz(n)
        weight_ok = inst.b.term(n) ** q <= nn ** p
        product = mpz(1)
        for j, wj in enumerate(inst.w.w):
            if wj:
                product *= inst.a.term(n + j) ** wj
        growth_ok = product ** s >= nn ** (r + s)
        if not weight_ok:
            report.weight_violations.append(n)
        if not growth_ok:
            report.growth_violations.append(n)
        if not (weight_ok and growth_ok):
            report.violations.append(n)
    return report
