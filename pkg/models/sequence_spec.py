"""
수열 기술(SequenceSpec) 및 가설 검사 결과(HypothesisReport) 데이터 모델.

SequenceSpec 은 "어떤 수열인가"만 기술하며, 실제 항 생성과 메모이제이션은
services.sequences.IntegerSequence 가 담당한다.

CLI / 설정 문서의 수열 기술자 형식:
    sylvester            s_1 = 2, s_{k+1} = s_k^2 - s_k + 1
    geometric:B          a_n = B^n
    poly:E               a_n = n^E
    tower:B:K            a_n = B^floor(K^n)   (K 는 1 보다 큰 유리수)
    beta / gamma         실행 인자의 (w, C) 스케줄 beta_n / gamma_n
    file:PATH            줄 단위 십진 정수 목록
    one                  상수 1 (b_n 전용)

사용처:
    - services.sequences : SequenceSpec -> IntegerSequence 생성
    - services.series    : check_hypotheses() 결과 HypothesisReport
    - CliApplication     : --seq / --b 인자 해석
"""

from dataclasses import dataclass, field
from enum        import Enum
from typing      import List, Optional, Tuple

from gmpy2 import mpq

from models.enclosure import format_rational, parse_rational


class SequenceKind(str, Enum):
    EXPLICIT       = "explicit-list"
    SYLVESTER      = "sylvester"
    GEOMETRIC      = "geometric"
    POLYNOMIAL     = "polynomial"
    POWER_TOWER    = "power-tower"
    SCHEDULE_BETA  = "schedule-beta"
    SCHEDULE_GAMMA = "schedule-gamma"
    CONSTRUCTED    = "constructed"
    ONE            = "one"


# 강한 증가를 약속하는 종류
_STRICTLY_INCREASING = {
    SequenceKind.SYLVESTER,
    SequenceKind.GEOMETRIC,
    SequenceKind.POWER_TOWER,
    SequenceKind.CONSTRUCTED,
}


@dataclass(frozen=True)
class SequenceSpec:
    """
    수열 종류와 파라미터.

    @param kind     SequenceKind
    @param base     geometric / power-tower 의 밑 B (정수 >= 2)
    @param power    polynomial 의 지수 E, power-tower 의 K (유리수 > 1)
    @param terms    explicit-list / constructed 의 항 (1-based 순서)
    @param source   file:PATH 의 경로 등 표시용 출처

    @example
        SequenceSpec.parse("tower:2:3")    # a_n = 2^(3^n)
        SequenceSpec.parse("geometric:2")  # a_n = 2^n
    """
    kind:   SequenceKind
    base:   int                = 0
    power:  Optional[mpq]      = None
    terms:  Tuple[int, ...]    = ()
    source: str                = ""

    def __post_init__(self):
        kind = SequenceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (SequenceKind.GEOMETRIC, SequenceKind.POWER_TOWER) and self.base < 2:
            raise ValueError(f"{kind.value} 의 밑은 2 이상의 정수여야 합니다: {self.base}")
        if kind is SequenceKind.POWER_TOWER and (self.power is None or self.power <= 1):
            raise ValueError(f"power-tower 의 K 는 1 보다 커야 합니다: {self.power}")
        if kind is SequenceKind.POLYNOMIAL and (self.power is None or self.power < 0
                                                or self.power.denominator != 1):
            raise ValueError(f"poly 의 지수는 음이 아닌 정수여야 합니다: {self.power}")
        if kind in (SequenceKind.EXPLICIT, SequenceKind.CONSTRUCTED):
            if any(int(t) < 1 for t in self.terms):
                raise ValueError("수열의 항은 양의 정수여야 합니다")

    @property
    def strictly_increasing(self) -> bool:
        return self.kind in _STRICTLY_INCREASING

    @property
    def horizon(self) -> Optional[int]:
        """구체화 가능한 최대 인덱스 (무한 수열이면 None)."""
        if self.kind in (SequenceKind.EXPLICIT, SequenceKind.CONSTRUCTED):
            return len(self.terms)
        return None

    @property
    def descriptor(self) -> str:
        """CLI 기술자 형식의 문자열."""
        k = self.kind
        if k is SequenceKind.SYLVESTER:
            return "sylvester"
        if k is SequenceKind.GEOMETRIC:
            return f"geometric:{self.base}"
        if k is SequenceKind.POLYNOMIAL:
            return f"poly:{format_rational(self.power)}"
        if k is SequenceKind.POWER_TOWER:
            return f"tower:{self.base}:{format_rational(self.power)}"
        if k is SequenceKind.SCHEDULE_BETA:
            return "beta"
        if k is SequenceKind.SCHEDULE_GAMMA:
            return "gamma"
        if k is SequenceKind.ONE:
            return "one"
        if self.source:
            return f"file:{self.source}"
        return f"{k.value}[{len(self.terms)}]"

    @classmethod
    def explicit(cls, terms, source: str = "") -> "SequenceSpec":
        return cls(SequenceKind.EXPLICIT, terms=tuple(int(t) for t in terms), source=source)

    @classmethod
    def parse(cls, text: str) -> "SequenceSpec":
        """
        CLI 기술자를 해석한다. file:PATH 는 경로만 기록하고 읽지 않는다
        (읽기는 services.series.load_terms 가 담당).

        @throws ValueError 알 수 없는 기술자
        """
        s = str(text).strip()
        head, _, rest = s.partition(":")
        head = head.lower()
        try:
            if head == "sylvester" and not rest:
                return cls(SequenceKind.SYLVESTER)
            if head == "one" and not rest:
                return cls(SequenceKind.ONE)
            if head == "beta" and not rest:
                return cls(SequenceKind.SCHEDULE_BETA)
            if head == "gamma" and not rest:
                return cls(SequenceKind.SCHEDULE_GAMMA)
            if head == "geometric":
                return cls(SequenceKind.GEOMETRIC, base=int(rest))
            if head == "poly":
                return cls(SequenceKind.POLYNOMIAL, power=parse_rational(rest))
            if head == "tower":
                b, _, k = rest.partition(":")
                return cls(SequenceKind.POWER_TOWER, base=int(b), power=parse_rational(k))
            if head == "file" and rest:
                return cls(SequenceKind.EXPLICIT, source=rest)
        except ValueError as e:
            raise ValueError(f"수열 기술자를 해석할 수 없습니다: {text!r} ({e})")
        raise ValueError(f"알 수 없는 수열 기술자: {text!r}")


@dataclass
class HypothesisReport:
    """
    b_n <= n^eta 와 a_n^{w_0}···a_{n+d-1}^{w_{d-1}} >= n^{1+tau} 의 유한 범위 검사 결과.

    불변식: violations 가 비어 있음 <=> 두 부등식이 검사한 모든 n 에서 성립

    속성:
        eta, tau          : 검사한 지수 (유리수)
        horizon           : 검사한 최대 n
        violations        : 어느 한 부등식이라도 실패한 n (오름차순)
        weight_violations : b_n <= n^eta 실패
        growth_violations : 곱 >= n^{1+tau} 실패
    """
    eta:               mpq
    tau:               mpq
    horizon:           int
    violations:        List[int] = field(default_factory=list)
    weight_violations: List[int] = field(default_factory=list)
    growth_violations: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def summary(self) -> str:
        return (
            f"n <= {self.horizon} | 위반 {len(self.violations)}건 "
            f"(b_n {len(self.weight_violations)} / 곱 {len(self.growth_violations)})"
        )

    def to_dict(self) -> dict:
        return {
            "eta":               format_rational(self.eta),
            "tau":               format_rational(self.tau),
            "horizon":           self.horizon,
            "ok":                self.ok,
            "violations":        list(self.violations),
            "weight_violations": list(self.weight_violations),
            "growth_violations": list(self.growth_violations),
        }
