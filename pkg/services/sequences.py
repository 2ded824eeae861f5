"""
정수 수열 구체화 서비스.

SequenceSpec 으로부터 1-based 항 a_1, a_2, ... 를 지연 생성한다.
점화식 수열(Sylvester)은 내부 메모에 접두부를 쌓으며, 메모는 Lock 으로 보호되어
동시 읽기에서도 항상 일관된 접두부만 보인다.

각 수열은 꼬리 상한 계산을 위한 두 가지 인증 비율을 제공한다.
    decay_ratio(m)  : sup_{n>=m} a_n / a_{n+1}   (분모 역할)
    growth_ratio(m) : sup_{n>=m} b_{n+1} / b_n   (분자 역할)
인증할 수 없는 종류는 NoCertificate 를 던진다.

사용처:
    - services.series       : x_n, y_n, 부분합, 꼬리 상한
    - services.diagnostics  : mu_n, D_N
    - services.construction : 구성된 수열 재생
"""

import threading
from typing import List, Optional

import gmpy2
from gmpy2 import mpq, mpz

from models.sequence_spec import SequenceKind, SequenceSpec
from services.errors      import IndexBeyondHorizon, NoCertificate, PreconditionViolation


class IntegerSequence:
    """
    SequenceSpec 하나에 대한 지연 구체화 수열.

    내부 상태:
        _spec     : 수열 기술
        _schedule : schedule-beta / schedule-gamma 종류의 스케줄 (그 외 None)
        _memo     : 점화식 수열의 구체화된 접두부
        _lock     : _memo 보호 락
    """

    def __init__(self, spec: SequenceSpec, schedule=None):
        """
        @param spec      수열 기술
        @param schedule  SCHEDULE_BETA / SCHEDULE_GAMMA 인 경우 필수 (services.schedule.Schedule)
        @throws          PreconditionViolation 스케줄 종류인데 schedule 이 없을 때
        """
        if spec.kind in (SequenceKind.SCHEDULE_BETA, SequenceKind.SCHEDULE_GAMMA) and schedule is None:
            raise PreconditionViolation(f"{spec.kind.value} 수열에는 스케줄이 필요합니다")
        self._spec:     SequenceSpec = spec
        self._schedule               = schedule
        self._memo:     List[mpz]    = []
        self._lock                   = threading.Lock()

    @classmethod
    def of(cls, descriptor: str, schedule=None) -> "IntegerSequence":
        """기술자 문자열에서 바로 생성한다 (file: 은 services.series.sequence_from_descriptor 사용)."""
        return cls(SequenceSpec.parse(descriptor), schedule)

    @property
    def spec(self) -> SequenceSpec:
        return self._spec

    @property
    def horizon(self) -> Optional[int]:
        return self._spec.horizon

    # ------------------------------------------------------------------
    # 항 생성
    # ------------------------------------------------------------------

    def term(self, n: int) -> mpz:
        """
        a_n (1-based).

        @throws IndexBeyondHorizon  유한 수열의 범위를 넘을 때, 또는 n < 1
        """
        if n < 1:
            raise IndexBeyondHorizon(f"인덱스는 1 이상이어야 합니다: {n}")
        kind = self._spec.kind

        if kind in (SequenceKind.EXPLICIT, SequenceKind.CONSTRUCTED):
            if n > len(self._spec.terms):
                raise IndexBeyondHorizon(
                    f"{self._spec.descriptor}: a_{n} 은 구체화 범위({len(self._spec.terms)}) 밖입니다"
                )
            return mpz(self._spec.terms[n - 1])
        if kind is SequenceKind.ONE:
            return mpz(1)
        if kind is SequenceKind.GEOMETRIC:
            return mpz(self._spec.base) ** n
        if kind is SequenceKind.POLYNOMIAL:
            return mpz(n) ** int(self._spec.power)
        if kind is SequenceKind.POWER_TOWER:
            return mpz(self._spec.base) ** int(self._tower_exponent(n))
        if kind is SequenceKind.SCHEDULE_BETA:
            return self._schedule.bounds(n)[0]
        if kind is SequenceKind.SCHEDULE_GAMMA:
            return self._schedule.bounds(n)[1]
        return self._sylvester(n)

    def terms(self, first: int, last: int) -> List[mpz]:
        """a_first, ..., a_last (양 끝 포함)."""
        return [self.term(n) for n in range(first, last + 1)]

    def _tower_exponent(self, n: int) -> mpz:
        k = self._spec.power ** n
        return gmpy2.f_div(k.numerator, k.denominator)

    def _sylvester(self, n: int) -> mpz:
        with self._lock:
            if not self._memo:
                self._memo.append(mpz(2))
            while len(self._memo) < n:
                s = self._memo[-1]
                self._memo.append(s * s - s + 1)
            return self._memo[n - 1]

    # ------------------------------------------------------------------
    # 인증 비율
    # ------------------------------------------------------------------

    def decay_ratio(self, m: int) -> mpq:
        """
        sup_{n>=m} a_n / a_{n+1} 의 인증된 상한.

        @param m  시작 인덱스 (>= 1)
        @throws   NoCertificate 이 종류로는 인증 불가
        """
        m = max(int(m), 1)
        kind = self._spec.kind
        if kind is SequenceKind.GEOMETRIC:
            return mpq(1, self._spec.base)
        if kind is SequenceKind.SYLVESTER:
            # s/(s^2 - s + 1) 은 s >= 1 에서 감소
            return mpq(self.term(m), self.term(m + 1))
        if kind is SequenceKind.POWER_TOWER:
            k = self._spec.power
            gap = k ** m * (k - 1)
            g = gmpy2.f_div(gap.numerator, gap.denominator)
            if g < 1:
                raise NoCertificate(f"{self._spec.descriptor}: m={m} 에서 지수 간격이 1 미만입니다")
            return mpq(1, mpz(self._spec.base) ** int(g))
        if kind in (SequenceKind.SCHEDULE_BETA, SequenceKind.SCHEDULE_GAMMA):
            return self._schedule.decay_ratio(m)
        if kind is SequenceKind.ONE:
            return mpq(1)
        raise NoCertificate(f"{self._spec.descriptor}: 감소 비율 인증서를 제공하지 않는 수열입니다")

    def growth_ratio(self, m: int) -> mpq:
        """
        sup_{n>=m} b_{n+1} / b_n 의 인증된 상한 (분자 수열 역할).

        @throws NoCertificate 이 종류로는 인증 불가
        """
        m = max(int(m), 1)
        kind = self._spec.kind
        if kind is SequenceKind.ONE:
            return mpq(1)
        if kind is SequenceKind.GEOMETRIC:
            return mpq(self._spec.base)
        if kind is SequenceKind.POLYNOMIAL:
            return mpq(m + 1, m) ** int(self._spec.power)
        raise NoCertificate(f"{self._spec.descriptor}: 증가 비율 인증서를 제공하지 않는 수열입니다")
