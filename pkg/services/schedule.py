"""
구성용 스케줄 (beta_n, gamma_n) 서비스.

    beta_n  = floor(C^{c~^n + n^2 + 1})
    gamma_n = floor(C^{c~^n + n^2 + n})
    J_n     = [beta_n, gamma_n] ∩ N       (n 번째 항의 선택 집합)

c~ = c~_w 는 P~_w 의 최대 양의 근이다. 지수 인클로저가 필요한 폭에 맞춰
근 인클로저를 그 자리에서 정제하고(refine_root), floor_power 가 정수 경계를
인증할 때까지 반복한다. c~ 가 정확한 유리수(예: w=(1) 에서 2)이면 정확 경로를 탄다.

꼬리 나머지 계산용 보조량은 생성 시 고정된 하한 c_lo 만 사용하므로
정제 이력과 무관하게 결정적이다.
    cheap_beta_lower(m) = floor(C^{floor(c_lo^m) + m^2 + 1})          <= beta_m
    decay_ratio(m)      = 1 / (C^g - C^{-(m^2+m+1)}),
                          g = min(floor(c_lo^m (c_lo - 1)) + m + 2, DECAY_EXPONENT_CAP)

사용처:
    - services.construction : 커버링 검사, 브래킷, 후보 선택
    - services.sequences    : schedule-beta / schedule-gamma 수열
    - services.verification_service : 인증서 재검증
"""

import threading
from typing import Callable, Dict, Optional, Tuple

import gmpy2
from gmpy2 import mpq, mpz

import config
from models.enclosure        import Enclosure, Precision, RationalLike, format_rational, to_mpq
from models.polynomial       import RootEnclosure, RootKind
from models.weight_vector    import WeightVector
from services.charpoly       import build_pw_tilde, isolate_root, refine_root
from services.enclosure_math import floor_power, int_power, magnitude
from services.errors         import NoCertificate, PreconditionViolation


class Schedule:
    """
    (w, C, c~) 로 정해지는 스케줄.

    내부 상태:
        _root   : 현재까지 가장 좁힌 c~ 인클로저 (정제 시 교체, 항상 중첩)
        _c_lo   : 생성 시 인클로저의 하한 (보조량 계산 기준, 고정)
        _bounds : n -> (beta_n, gamma_n) 메모
        _lock   : _root / _bounds 보호 (재진입 가능)
    """

    def __init__(
        self,
        w:       WeightVector,
        C:       RationalLike,
        c_tilde: Optional[RootEnclosure] = None,
    ):
        """
        @param w        가중치 벡터
        @param C        밑 (> 1)
        @param c_tilde  c~_w 인클로저. 없으면 2^-SCHEDULE_ROOT_BITS 폭으로 분리한다
        @throws         PreconditionViolation C <= 1
        @throws         IsolationFailed       P~_w 근 분리 실패
        """
        C = to_mpq(C)
        if C <= 1:
            raise PreconditionViolation(f"C 는 1 보다 커야 합니다: {format_rational(C)}")
        if c_tilde is None:
            c_tilde = isolate_root(
                build_pw_tilde(w),
                RootKind.LARGEST_POSITIVE,
                Precision.from_bits(config.SCHEDULE_ROOT_BITS),
            )
        self._w:      WeightVector                = w
        self._C:      mpq                         = C
        self._origin: RootEnclosure               = c_tilde
        self._root:   RootEnclosure               = c_tilde
        self._c_lo:   mpq                         = c_tilde.lo
        self._bounds: Dict[int, Tuple[mpz, mpz]]  = {}
        self._lock                                = threading.RLock()

    @property
    def w(self) -> WeightVector:
        return self._w

    @property
    def C(self) -> mpq:
        return self._C

    @property
    def c_tilde(self) -> RootEnclosure:
        """생성 시점의 c~ 인클로저 (인증서에 기록되는 값)."""
        return self._origin

    @property
    def c_lo(self) -> mpq:
        return self._c_lo

    # ------------------------------------------------------------------
    # c~ 정제
    # ------------------------------------------------------------------

    def _refined(self, width: mpq) -> RootEnclosure:
        with self._lock:
            if not self._root.is_exact and self._root.width > width:
                self._root = refine_root(self._root, width)
            return self._root

    def _exponent_handle(self, n: int, offset: int) -> Callable[[int], Enclosure]:
        # bits -> 폭 <= 2^-bits 인 c~^n + n^2 + offset 인클로저
        shift = mpz(n) * n + offset

        def handle(bits: int) -> Enclosure:
            root = self._root
            if root.is_exact:
                return Enclosure.point(root.lo ** n + shift)
            lg = magnitude(root.hi) + 1
            growth = n * lg + 2 * n.bit_length() + 4
            root = self._refined(mpq(1, mpz(1) << (bits + growth)))
            power = int_power(root.enclosure, n, bits + growth)
            return Enclosure(power.lo + shift, power.hi + shift)

        return handle

    # ------------------------------------------------------------------
    # beta_n, gamma_n
    # ------------------------------------------------------------------

    def bounds(self, n: int) -> Tuple[mpz, mpz]:
        """
        (beta_n, gamma_n). 한 번 계산한 값은 메모에 남는다.

        @throws FloorUndecidable 정제 예산 안에서 floor 를 인증하지 못할 때
        """
        with self._lock:
            cached = self._bounds.get(n)
            if cached is not None:
                return cached
            prec = Precision.from_bits(config.FLOOR_GUARD_BITS, config.FLOOR_MAX_ATTEMPTS)
            beta = floor_power(self._C, self._exponent_handle(n, 1), prec)
            gamma = beta if n == 1 else floor_power(self._C, self._exponent_handle(n, n), prec)
            self._bounds[n] = (beta, gamma)
            return beta, gamma

    def beta(self, n: int) -> mpz:
        return self.bounds(n)[0]

    def gamma(self, n: int) -> mpz:
        return self.bounds(n)[1]

    def tail_value(self, n: int, kind: str) -> mpz:
        """kind 가 "beta" 이면 beta_n, "gamma" 이면 gamma_n."""
        return self.beta(n) if kind == "beta" else self.gamma(n)

    def contains(self, n: int, value: mpz) -> bool:
        beta, gamma = self.bounds(n)
        return beta <= value <= gamma

    # ------------------------------------------------------------------
    # 꼬리 나머지 보조량
    # ------------------------------------------------------------------

    def cheap_beta_lower(self, m: int) -> mpz:
        """beta_m 의 하한 floor(C^{floor(c_lo^m) + m^2 + 1}). 근 정제 없이 정확히 계산된다."""
        power = self._c_lo ** m
        exponent = gmpy2.f_div(power.numerator, power.denominator) + mpz(m) * m + 1
        power = self._C ** int(exponent)
        return mpz(gmpy2.f_div(power.numerator, power.denominator))

    def decay_ratio(self, m: int) -> mpq:
        """
        sup_{n>=m} a_n / a_{n+1} 의 상한 (a_n ∈ J_n, a_{n+1} ∈ J_{n+1}). m 에 대해 감소한다.

        @throws NoCertificate 분모가 1 이하가 되는 경우
        """
        m = max(int(m), 1)
        spread = self._c_lo ** m * (self._c_lo - 1)
        g = gmpy2.f_div(spread.numerator, spread.denominator) + m + 2
        g = min(int(g), config.DECAY_EXPONENT_CAP)
        denominator = self._C ** g - self._C ** (-(m * m + m + 1))
        if denominator <= 1:
            raise NoCertificate(f"m={m} 에서 스케줄 감소 비율이 1 이상입니다")
        return 1 / denominator

    def to_dict(self) -> dict:
        return {
            "w":       self._w.to_list(),
            "C":       format_rational(self._C),
            "c_tilde": self._origin.enclosure.to_dict(),
        }


class EnvelopeSchedule:
    """
    사용자 정의 (beta_n, gamma_n) 포락선. 커버링 검사의 실패 경로를 시험할 때 쓴다.

    감소 비율 인증서는 제공하지 않으므로 브래킷 계산에는 쓸 수 없다.
    """

    def __init__(
        self,
        w:        WeightVector,
        beta_fn:  Callable[[int], int],
        gamma_fn: Callable[[int], int],
    ):
        self._w        = w
        self._beta_fn  = beta_fn
        self._gamma_fn = gamma_fn

    @property
    def w(self) -> WeightVector:
        return self._w

    def bounds(self, n: int) -> Tuple[mpz, mpz]:
        return mpz(self._beta_fn(n)), mpz(self._gamma_fn(n))

    def beta(self, n: int) -> mpz:
        return self.bounds(n)[0]

    def gamma(self, n: int) -> mpz:
        return self.bounds(n)[1]

    def cheap_beta_lower(self, m: int) -> mpz:
        return self.beta(m)

    def decay_ratio(self, m: int) -> mpq:
        raise NoCertificate("사용자 정의 포락선은 감소 비율 인증서를 제공하지 않습니다")


def schedule_bounds(sched, n: int) -> Tuple[mpz, mpz]:
    """
    (beta_n, gamma_n) 을 정확한 정수로 반환한다.

    @param sched  Schedule 또는 EnvelopeSchedule
    @param n      인덱스 (>= 1)
    @throws       PreconditionViolation n < 1
    @throws       FloorUndecidable      (전파)

    @example
        sched = Schedule(WeightVector((1,)), 2)
        schedule_bounds(sched, 1)   # -> (16, 16)
        schedule_bounds(sched, 2)   # -> (512, 1024)
    """
    if int(n) < 1:
        raise PreconditionViolation(f"n 은 1 이상이어야 합니다: {n}")
    return sched.bounds(int(n))
