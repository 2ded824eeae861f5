"""
서비스 계층 예외 정의.

모든 예외는 RapidSeriesError 를 상속하며, 기계 판독 가능한 code 문자열과
CLI 종료 코드 매핑을 위한 outcome 을 가진다.

outcome 분류:
    - "failure"   : 확정적 실패          -> 종료 코드 1
    - "undecided" : 예산 내 미결정        -> 종료 코드 2
    - "usage"     : 사용법 / 입력 오류     -> 종료 코드 3

리포트 상태(미결정 봉우리, 가설 미충족 등)는 예외가 아니라 값으로 반환한다.

사용처:
    - services/* : 각 연산의 실패 신호
    - CliApplication.run() : outcome -> 종료 코드, {"error": {...}} 문서 변환
"""


class RapidSeriesError(Exception):
    """
    모든 서비스 예외의 기반 클래스.

    @param message  사람이 읽는 설명
    """

    code:    str = "error"
    outcome: str = "failure"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code

    def to_dict(self) -> dict:
        """
        결과 문서의 error 객체를 반환한다.

        @returns {"code": str, "message": str}
        """
        return {"code": self.code, "message": self.message}


# ------------------------------------------------------------------
# 정밀도 / 예산
# ------------------------------------------------------------------

class PrecisionCapExceeded(RapidSeriesError):
    """정제 예산을 모두 소진했는데도 목표 폭에 도달하지 못함."""
    code    = "precision-cap-exceeded"
    outcome = "undecided"


class FloorUndecidable(RapidSeriesError):
    """거듭제곱 인클로저가 정수 경계를 계속 걸쳐 floor 를 확정할 수 없음."""
    code    = "floor-undecidable"
    outcome = "undecided"


class SelectionUndecidable(RapidSeriesError):
    """인접한 두 후보 사이에서 목표값 포함 여부를 예산 내에 확정하지 못함."""
    code    = "selection-undecidable"
    outcome = "undecided"


# ------------------------------------------------------------------
# 수학적 전제 위반
# ------------------------------------------------------------------

class IsolationFailed(RapidSeriesError):
    """근 개수 인증으로 요청한 근을 분리할 수 없음 (지원 범위 밖 다항식)."""
    code = "isolation-failed"


class DivisionByIntervalContainingZero(RapidSeriesError):
    code = "division-by-zero-interval"


class NonPositiveArgument(RapidSeriesError):
    code = "non-positive-argument"


class NoCertificate(RapidSeriesError):
    """수열 종류가 꼬리 비율 인증서를 제공하지 못함."""
    code = "no-certificate"


class IndexBeyondHorizon(RapidSeriesError):
    code = "index-beyond-horizon"


class PreconditionViolation(RapidSeriesError):
    code    = "precondition-violation"
    outcome = "usage"


class CoverageViolated(RapidSeriesError):
    """어떤 후보의 브래킷도 목표값을 포함하지 않음 (커버링 검사 범위 부족)."""
    code = "coverage-violated"


class TargetOutsideRange(RapidSeriesError):
    code = "target-outside-range"


class MalformedCertificate(RapidSeriesError):
    code = "malformed-certificate"


# ------------------------------------------------------------------
# 입력 / 설정
# ------------------------------------------------------------------

class ConfigError(RapidSeriesError):
    code    = "config-error"
    outcome = "usage"


class InvalidSequence(RapidSeriesError):
    """수열 기술자 또는 수열 파일을 해석할 수 없음."""
    code    = "invalid-sequence"
    outcome = "usage"


class FileAccessError(RapidSeriesError):
    """결과 문서 또는 인증서 파일을 쓸 수 없음."""
    code = "file-access-error"
