"""
구성 인증서 독립 검증 서비스.

인증서의 원자료(w, C, c~ 인클로저, 목표값, 항, 원장)만으로 스케줄과 브래킷을
처음부터 다시 계산해 생성기의 주장을 재확인한다.

검증 항목 (순서대로, 처음 실패한 항목이 사유가 된다):
    1. structure            : M, 깊이, 원장 인덱스, 검사 범위의 정합성
    2. root-enclosure       : c~ 인클로저가 P~_w 의 최대 양의 근을 실제로 포함
    3. repair-rule          : a_n = n (n < n0) 이고 n0 가 재계산 값과 일치
    4. monotonicity         : a_1 < a_2 < ... 엄격 증가
    5. schedule-membership  : n >= n0 에서 beta_n <= a_n <= gamma_n
    6. covering             : N ∈ [M, 검사 범위] 에서 커버링 부등식 통과
    7. bracket-containment  : N ∈ [M, 깊이] 에서 x 가 두 끝점 사이에 있음을 인증
    8. ledger-mismatch      : 원장 항목이 재계산 값과 정확히 일치
    9. ledger-nesting       : 원장이 허용 오차 안에서 중첩되고 x 를 포함

결과는 VerificationResult 객체로 반환되며 CliApplication 이 종료 코드로 바꾼다.

사용처:
    - CliApplication._verify_worker() : 백그라운드 스레드에서 호출 (인증서별 독립)
"""

from enum   import Enum
from typing import Callable, List, Optional, Sequence

from gmpy2 import mpq

import config
from models.certificate       import Certificate, CoveringVerdict, LedgerEntry
from models.diagnostics_report import Trilean
from models.enclosure         import format_rational
from models.polynomial        import RootEnclosure, RootKind
from services.charpoly        import build_pw_tilde, cauchy_bound, count_roots
from services.construction    import (
    covering_check,
    fixed_sum,
    ledger_entry,
    lower_endpoint_at_most,
    repair_horizon,
    repair_index,
    upper_endpoint_at_least,
)
from services.errors          import FloorUndecidable, RapidSeriesError
from services.schedule        import Schedule


# 로그 콜백 타입 alias
# 첫 번째 인자: 로그 태그 (INFO, OK, ERROR, WARN)
# 두 번째 인자: 로그 메시지 문자열
LogCallback = Callable[[str, str], None]


class VerificationVerdict(str, Enum):
    VALID     = "valid"
    INVALID   = "invalid"
    UNDECIDED = "undecided"


class _Stop(Exception):
    """첫 실패/미결정에서 검사를 멈추기 위한 내부 신호."""


class VerificationResult:
    """
    인증서 한 건의 검증 결과.

    속성:
        source  : 인증서 출처 (파일 경로 등, 표시용)
        verdict : valid / invalid / undecided
        reason  : invalid 또는 undecided 일 때의 검사 항목 이름
        detail  : 사람이 읽는 설명
        checked : 통과한 검사 항목 이름 (순서대로)
        errors  : 검증 중 발생한 예외 메시지
    """

    def __init__(self, source: str = ""):
        self.source:  str                  = source
        self.verdict: VerificationVerdict  = VerificationVerdict.VALID
        self.reason:  Optional[str]        = None
        self.detail:  str                  = ""
        self.checked: List[str]            = []
        self.errors:  List[str]            = []

    @property
    def valid(self) -> bool:
        return self.verdict is VerificationVerdict.VALID

    @property
    def summary(self) -> str:
        """
        한 줄 요약 문자열.

        @example
            result.summary   # -> "cert.json: invalid(schedule-membership) a_5 ∉ J_5"
        """
        label = self.verdict.value if self.reason is None else f"{self.verdict.value}({self.reason})"
        text = f"{self.source}: {label}" if self.source else label
        return f"{text} {self.detail}".rstrip()

    def to_dict(self) -> dict:
        return {
            "source":  self.source,
            "verdict": self.verdict.value,
            "reason":  self.reason,
            "detail":  self.detail,
            "checked": list(self.checked),
            "errors":  list(self.errors),
        }


class VerificationService:
    """
    인증서 하나를 검증한다. 생성기 상태를 공유하지 않으며 스케줄을 새로 만든다.

    내부 상태:
        _cert     : 검증 대상 인증서
        _schedule : 인증서의 c~ 인클로저로 만든 스케줄 (root-enclosure 통과 후)
    """

    def __init__(self, cert: Certificate):
        self._cert:     Certificate        = cert
        self._schedule: Optional[Schedule] = None

    def verify(self, source: str = "", log: Optional[LogCallback] = None) -> VerificationResult:
        """
        모든 검사 항목을 순서대로 수행한다.

        @param source  결과에 표시할 출처
        @param log     로그 콜백 함수 (tag: str, message: str) -> None
        @returns       VerificationResult

        @example
            result = VerificationService(cert).verify("cert.json", log=my_log_callback)
            print(result.summary)
        """
        if log is None:
            log = lambda tag, msg: None

        result = VerificationResult(source)
        log(config.LOG_TAG_INFO, f"인증서 검증 시작: {source or '(memory)'}")

        steps = [
            ("structure",           self._check_structure),
            ("root-enclosure",      self._check_root),
            ("repair-rule",         self._check_repair),
            ("monotonicity",        self._check_monotone),
            ("schedule-membership", self._check_membership),
            ("covering",            self._check_covering),
            ("bracket-containment", self._check_containment),
            ("ledger-mismatch",     self._check_ledger),
            ("ledger-nesting",      self._check_nesting),
        ]
        try:
            for name, step in steps:
                step(result, name)
                result.checked.append(name)
                log(config.LOG_TAG_INFO, f"{name}: 통과")
        except _Stop:
            tag = config.LOG_TAG_ERROR if result.verdict is VerificationVerdict.INVALID else config.LOG_TAG_WARNING
            log(tag, result.summary)
            return result
        except RapidSeriesError as e:
            result.verdict = VerificationVerdict.INVALID if e.outcome == "failure" else VerificationVerdict.UNDECIDED
            result.reason = e.code
            result.detail = e.message
            result.errors.append(e.message)
            log(config.LOG_TAG_ERROR, f"검증 중 오류: {e.message}")
            return result

        log(config.LOG_TAG_OK, f"인증서 유효: {source or '(memory)'}")
        return result

    # ------------------------------------------------------------------
    # Private: 결과 기록
    # ------------------------------------------------------------------

    @staticmethod
    def _invalid(result: VerificationResult, reason: str, detail: str):
        result.verdict = VerificationVerdict.INVALID
        result.reason = reason
        result.detail = detail
        raise _Stop()

    @staticmethod
    def _undecided(result: VerificationResult, reason: str, detail: str):
        result.verdict = VerificationVerdict.UNDECIDED
        result.reason = reason
        result.detail = detail
        raise _Stop()

    # ------------------------------------------------------------------
    # Private: 개별 검사
    # ------------------------------------------------------------------

    def _check_structure(self, result: VerificationResult, name: str):
        cert = self._cert
        d = cert.w.d
        if cert.C <= 1:
            self._invalid(result, name, f"C={format_rational(cert.C)} 는 1 보다 커야 합니다")
        if cert.repair_start < 1:
            self._invalid(result, name, f"수리 경계가 1 미만입니다: {cert.repair_start}")
        if cert.M < max(d, cert.repair_start + d - 2):
            self._invalid(result, name, f"M={cert.M} 이 max(d, n0+d-2) 보다 작습니다")
        if cert.M > cert.depth:
            self._invalid(result, name, f"M={cert.M} 이 깊이 {cert.depth} 보다 큽니다")
        if cert.covering_checked_horizon < cert.depth + d:
            self._invalid(result, name, f"커버링 검사 범위 {cert.covering_checked_horizon} 가 depth + d = {cert.depth + d} 보다 짧습니다")
        if [e.N for e in cert.ledger] != list(range(cert.M, cert.depth + 1)):
            self._invalid(result, name, f"원장 인덱스가 [M, depth] = [{cert.M}, {cert.depth}] 와 다릅니다")
        if cert.tail_terms < 1 or cert.ledger_bits < 1:
            self._invalid(result, name, "tail_terms 와 ledger_bits 는 1 이상이어야 합니다")

    def _check_root(self, result: VerificationResult, name: str):
        cert = self._cert
        poly = build_pw_tilde(cert.w)
        lo, hi = cert.c_tilde.lo, cert.c_tilde.hi
        if not lo > 1:
            self._invalid(result, name, f"c~ 하한이 1 보다 커야 합니다: {format_rational(lo)}")
        # lead > 0 이고 hi 위로 근이 없으면 p(hi) >= 0, p(lo) <= 0 이면 [lo, hi] 에 근이 있다
        if poly.sign_at(lo) > 0 or count_roots(poly, hi, max(hi, cauchy_bound(poly))) != 0:
            self._invalid(result, name, f"[{format_rational(lo)}, {format_rational(hi)}] 가 {poly} 의 최대근을 포함하지 않습니다")
        root = RootEnclosure(lo, hi, poly, RootKind.LARGEST_POSITIVE)
        self._schedule = Schedule(cert.w, cert.C, root)

    def _check_repair(self, result: VerificationResult, name: str):
        cert = self._cert
        for n in range(1, min(cert.repair_start, cert.depth + 1)):
            if cert.terms[n - 1] != n:
                self._invalid(result, name, f"a_{n} = {cert.terms[n - 1]} 이 수리 규칙 a_n = n 과 다릅니다")
        expected = repair_index(self._schedule, repair_horizon(cert.covering_checked_horizon))
        if expected != cert.repair_start:
            self._invalid(result, name, f"수리 경계 {cert.repair_start} 가 재계산 값 {expected} 와 다릅니다")

    def _check_monotone(self, result: VerificationResult, name: str):
        terms = self._cert.terms
        for n in range(1, len(terms)):
            if not terms[n - 1] < terms[n]:
                self._invalid(result, name, f"a_{n} >= a_{n + 1}")

    def _check_membership(self, result: VerificationResult, name: str):
        cert = self._cert
        for n in range(cert.repair_start, cert.depth + 1):
            try:
                beta, gamma = self._schedule.bounds(n)
            except FloorUndecidable as e:
                self._undecided(result, name, e.message)
            if not beta <= cert.terms[n - 1] <= gamma:
                self._invalid(result, name, f"a_{n} ∉ J_{n}")

    def _check_covering(self, result: VerificationResult, name: str):
        cert = self._cert
        for N in range(cert.M, cert.covering_checked_horizon + 1):
            try:
                verdict = covering_check(self._schedule, N)
            except FloorUndecidable as e:
                self._undecided(result, name, f"N={N}: {e.message}")
            if verdict is not CoveringVerdict.PASS:
                self._invalid(result, name, f"N={N} 에서 커버링 부등식 실패")

    def _check_containment(self, result: VerificationResult, name: str):
        cert = self._cert
        w = cert.w
        fixed, upto = mpq(0), 1
        for N in range(cert.M, cert.depth + 1):
            prefix = cert.terms[:N]
            fixed = fixed_sum(w, prefix, upto, fixed)
            upto = N - w.d + 2
            target = cert.target - fixed
            lower = lower_endpoint_at_most(self._schedule, prefix, None, target)
            upper = upper_endpoint_at_least(self._schedule, prefix, None, target)
            for verdict, side in ((lower, "하단"), (upper, "상단")):
                if verdict is Trilean.FALSE:
                    self._invalid(result, name, f"N={N}: x 가 {side} 끝점 밖입니다")
                if verdict is Trilean.UNDECIDED:
                    self._undecided(result, name, f"N={N}: {side} 끝점 비교 미결정")

    def _check_ledger(self, result: VerificationResult, name: str):
        cert = self._cert
        w = cert.w
        fixed, upto = mpq(0), 1
        for recorded in cert.ledger:
            prefix = cert.terms[:recorded.N]
            fixed = fixed_sum(w, prefix, upto, fixed)
            upto = recorded.N - w.d + 2
            expected = ledger_entry(self._schedule, prefix, fixed, cert.tail_terms, cert.ledger_bits)
            if expected != recorded:
                self._invalid(result, name, f"N={recorded.N} 원장 항목이 재계산 값과 다릅니다")

    def _check_nesting(self, result: VerificationResult, name: str):
        cert = self._cert
        problem = ledger_nesting_error(cert.ledger, cert.target, cert.ledger_tolerance)
        if problem:
            self._invalid(result, name, problem)


def ledger_nesting_error(
    ledger:    Sequence[LedgerEntry],
    target:    mpq,
    tolerance: mpq,
) -> Optional[str]:
    """
    원장 구간이 모두 target 을 포함하고, 이전 구간 안에 놓이며, 폭이 늘지 않는지 본다.

    @param tolerance  바깥쪽 반올림 격자 허용오차
    @returns          첫 위반 설명, 위반이 없으면 None
    """
    for i, entry in enumerate(ledger):
        if not entry.enclosure.contains(target):
            return f"N={entry.N} 원장 구간이 x 를 포함하지 않습니다"
        if not i:
            continue
        previous = ledger[i - 1].enclosure
        if not previous.contains_enclosure(entry.enclosure, tolerance):
            return f"N={entry.N} 원장 구간이 이전 구간 안에 있지 않습니다"
        if entry.enclosure.width > previous.width + tolerance:
            return f"N={entry.N} 에서 구간 폭이 증가했습니다"
    return None


def verify_certificate(
    cert:   Certificate,
    source: str = "",
    log:    Optional[LogCallback] = None,
) -> VerificationResult:
    """
    인증서를 독립 재검증한다.

    @returns VerificationResult (verdict: valid / invalid(reason) / undecided)

    @example
        series, cert = construct(WeightVector((1, 1)), 2, None, 15, prec)
        verify_certificate(cert).valid   # -> True
    """
    return VerificationService(cert).verify(source, log)
