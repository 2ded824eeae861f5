"""
구성 인증서 데이터 모델.

construct 가 만든 수열을 생성기 내부 상태 없이 독립 재검증할 수 있도록
필요한 모든 원자료를 담는다. construct -> verify 사이의 교환 단위이다.

직렬화 형식 (UTF-8 JSON, 모든 정수/유리수는 십진 문자열):
    {
      "format": "rapid-series-certificate", "version": 1,
      "w": [1, 1], "C": "2", "c_tilde": {"lo": "p/q", "hi": "p/q"},
      "target": "p/q", "M": 4, "depth": 15,
      "covering_checked_horizon": 17,
      "repair": {"start": 1, "rule": "a_n = n for n < start"},
      "terms": ["1", "5", ...],
      "ledger": [{"N": 4, "lo": "p/q", "hi": "p/q"}, ...],
      "ledger_bits": 256, "ledger_tolerance": "p/q",
      "tail_terms": 1,
      "assumptions": ["..."]
    }

사용처:
    - services.construction          : construct() 결과 생성
    - services.verification_service  : verify_certificate() 입력
    - services.certificate_store     : JSON 읽기/쓰기
"""

from dataclasses import dataclass, field
from enum        import Enum
from typing      import List

from gmpy2 import mpq, mpz

import config
from models.enclosure     import Enclosure, format_rational, parse_rational
from models.weight_vector import WeightVector


REPAIR_RULE = "a_n = n for n < start"


class CoveringVerdict(str, Enum):
    """커버링 부등식 검사 결과."""
    PASS      = "pass"
    FAIL      = "fail"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class LedgerEntry:
    """깊이 N 에서 목표값을 포함하는 브래킷 [lo, hi]."""
    N:  int
    lo: mpq
    hi: mpq

    @property
    def enclosure(self) -> Enclosure:
        return Enclosure(self.lo, self.hi)

    def to_dict(self) -> dict:
        return {"N": self.N, "lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    @classmethod
    def from_dict(cls, data: dict) -> "LedgerEntry":
        return cls(int(data["N"]), parse_rational(data["lo"]), parse_rational(data["hi"]))


@dataclass
class Certificate:
    """
    구성된 수열의 자기완결적 인증 기록.

    @param w                        가중치 벡터
    @param C                        스케줄 밑 C (> 1)
    @param c_tilde                  c~_w 인클로저 (P~_w 최대근)
    @param target                   목표 합 x
    @param M                        커버링 시작 인덱스
    @param covering_checked_horizon 커버링을 정확히 검사한 최대 N
    @param repair_start             수리 블록 경계 n0 (n < n0 에서 a_n = n)
    @param terms                    a_1..a_depth
    @param ledger                   N = M..depth 브래킷 원장
    @param tail_terms               원장 계산에 사용한 정확한 꼬리 항 수 H
    @param assumptions              검사 범위 밖에 대한 선언적 가정
    """
    w:                        WeightVector
    C:                        mpq
    c_tilde:                  Enclosure
    target:                   mpq
    M:                        int
    covering_checked_horizon: int
    repair_start:             int
    terms:                    List[mpz]             = field(default_factory=list)
    ledger:                   List[LedgerEntry]     = field(default_factory=list)
    ledger_bits:              int                   = config.LEDGER_BITS
    tail_terms:               int                   = config.TAIL_TERMS_START
    assumptions:              List[str]             = field(default_factory=list)
    version:                  int                   = config.CERT_FORMAT_VERSION

    @property
    def depth(self) -> int:
        return len(self.terms)

    @property
    def ledger_tolerance(self) -> mpq:
        return mpq(2, mpz(1) << self.ledger_bits)

    @property
    def final_bracket(self) -> Enclosure:
        return self.ledger[-1].enclosure

    def to_dict(self) -> dict:
        """
        JSON 직렬화용 딕셔너리. 모든 수학적 값은 문자열이다.
        """
        return {
            "format":                   config.CERT_FORMAT,
            "version":                  self.version,
            "w":                        self.w.to_list(),
            "C":                        format_rational(self.C),
            "c_tilde":                  self.c_tilde.to_dict(),
            "target":                   format_rational(self.target),
            "M":                        self.M,
            "depth":                    self.depth,
            "covering_checked_horizon": self.covering_checked_horizon,
            "repair":                   {"start": self.repair_start, "rule": REPAIR_RULE},
            "terms":                    [format_rational(t) for t in self.terms],
            "ledger":                   [e.to_dict() for e in self.ledger],
            "ledger_bits":              self.ledger_bits,
            "ledger_tolerance":         format_rational(self.ledger_tolerance),
            "tail_terms":               self.tail_terms,
            "assumptions":              list(self.assumptions),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        """
        딕셔너리로부터 인증서를 만든다. 형식 검사는 호출자가 예외를 변환한다.

        @throws KeyError / ValueError / TypeError 형식 오류
        """
        if data.get("format") != config.CERT_FORMAT:
            raise ValueError(f"알 수 없는 문서 형식: {data.get('format')!r}")
        version = int(data["version"])
        if version != config.CERT_FORMAT_VERSION:
            raise ValueError(f"지원하지 않는 인증서 버전: {version}")
        terms = [mpz(str(t)) for t in data["terms"]]
        if int(data.get("depth", len(terms))) != len(terms):
            raise ValueError("depth 와 terms 길이가 다릅니다")
        return cls(
            w                        = WeightVector(tuple(int(v) for v in data["w"])),
            C                        = parse_rational(data["C"]),
            c_tilde                  = Enclosure.from_dict(data["c_tilde"]),
            target                   = parse_rational(data["target"]),
            M                        = int(data["M"]),
            covering_checked_horizon = int(data["covering_checked_horizon"]),
            repair_start             = int(data["repair"]["start"]),
            terms                    = terms,
            ledger                   = [LedgerEntry.from_dict(e) for e in data["ledger"]],
            ledger_bits              = int(data["ledger_bits"]),
            tail_terms               = int(data.get("tail_terms", config.TAIL_TERMS_START)),
            assumptions              = [str(a) for a in data.get("assumptions", [])],
            version                  = version,
        )
