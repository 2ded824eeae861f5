"""
비유리성 진단량 결과 데이터 모델.

    MuSequence        : mu_n = ln a_n / c^n 인클로저 목록
    PeakSet           : mu_{m+1} > (1 + 1/m^2) max_{n<=m} mu_n 을 만족하는 봉우리 인덱스
    MahlerGapReport   : D_N = prod_{k<=N} a_k^W 와 D_N · r_N 인클로저
    LocalPeakVerdict  : 국소 봉우리 부등식 판정

모든 비교는 3값 논리(Trilean)로 보고한다. 미결정은 오류가 아니라 상태이다.

사용처:
    - services.diagnostics : 결과 생성
    - services.report_writer: JSON / plain 직렬화
"""

from dataclasses import dataclass, field
from enum        import Enum
from typing      import List, Optional, Tuple

from gmpy2 import mpz

from models.enclosure import Enclosure, format_rational


class Trilean(str, Enum):
    """인클로저 비교의 3값 결과."""
    TRUE      = "true"
    FALSE     = "false"
    UNDECIDED = "undecided"


class LocalPeakVerdict(str, Enum):
    HOLDS              = "holds"
    FAILS              = "fails"
    HYPOTHESIS_NOT_MET = "hypothesis-not-met"
    UNDECIDED          = "undecided"


# delta_n 규칙 식별자 (고정)
DELTA_RULE = "1/n^2"


@dataclass
class MuSequence:
    """
    mu_1..mu_H 인클로저.

    @param c       기준 c 의 인클로저 (c_w 의 근 인클로저 또는 정확한 유리수 점)
    @param values  values[n-1] = mu_n 인클로저
    @param source  수열 기술자 (표시용)
    """
    c:      Enclosure
    values: List[Enclosure] = field(default_factory=list)
    source: str             = ""

    @property
    def horizon(self) -> int:
        return len(self.values)

    def mu(self, n: int) -> Enclosure:
        return self.values[n - 1]

    def to_dict(self) -> dict:
        return {
            "c":      self.c.to_dict(),
            "source": self.source,
            "mu":     [{"n": n, **v.to_dict()} for n, v in enumerate(self.values, start=1)],
        }


@dataclass
class PeakSet:
    """
    봉우리 인덱스 집합.

    속성:
        indices   : 술어가 인증된 m (오름차순)
        undecided : 두 배 정밀도 재시도 후에도 미결정인 m
        horizon   : 사용한 mu 개수 (m <= horizon-1 검사)
    """
    indices:    List[int] = field(default_factory=list)
    undecided:  List[int] = field(default_factory=list)
    horizon:    int       = 0
    delta_rule: str       = DELTA_RULE

    def to_dict(self) -> dict:
        return {
            "indices":    list(self.indices),
            "undecided":  list(self.undecided),
            "horizon":    self.horizon,
            "delta_rule": self.delta_rule,
        }


@dataclass
class MahlerGapReport:
    """
    N 에서의 Mahler 간격.

    불변식:
        - D_N = prod_{k=1}^{N} a_k^W (정확)
        - integrality_ok <=> D_N · partial_sum(N) 이 정수
    """
    N:              int
    D_N:            mpz
    gap:            Enclosure
    integrality_ok: bool

    def to_dict(self) -> dict:
        return {
            "N":              self.N,
            "D_N":            format_rational(self.D_N),
            "gap":            self.gap.to_dict(),
            "integrality_ok": self.integrality_ok,
        }


@dataclass
class LocalPeakResult:
    """(P, Q) 쌍 하나의 국소 봉우리 판정."""
    P:       int
    Q:       int
    verdict: LocalPeakVerdict
    detail:  str = ""

    def to_dict(self) -> dict:
        return {"P": self.P, "Q": self.Q, "verdict": self.verdict.value, "detail": self.detail}
