"""
Rapid Series Certifier - Application Configuration

애플리케이션 전역 상수 및 설정값 정의.
모든 모듈에서 참조하는 단일 설정 소스(Single Source of Truth)로 기능한다.

구성 항목:
    - 애플리케이션 메타 정보 (이름, 버전)
    - 문서 스키마 식별자 (인증서, 결과 리포트)
    - 정밀도 / 정제 예산 기본값
    - 스케줄 및 구성(construct) 파라미터
    - 로그 태그
    - 종료 코드
"""

# ---------------------------------------------------------------------------
# 애플리케이션 메타 정보
# ---------------------------------------------------------------------------
APP_NAME    = "Rapid Series Certifier"
APP_VERSION = "1.0.0"
APP_PROG    = "rapidseries"

# ---------------------------------------------------------------------------
# 문서 스키마 식별자
# 인증서(construct -> verify 교환 단위)와 결과 리포트 JSON에 기록된다.
# 버전이 다른 인증서는 MalformedCertificate로 거부한다.
# ---------------------------------------------------------------------------
CERT_FORMAT         = "rapid-series-certificate"
CERT_FORMAT_VERSION = 1
REPORT_SCHEMA         = "rapid-series-report"
REPORT_SCHEMA_VERSION = 1

# ---------------------------------------------------------------------------
# 정밀도 기본값
# CLI에서 --prec 미지정 시 사용한다. 문자열은 Precision.parse()로 해석된다.
# ---------------------------------------------------------------------------
DEFAULT_PRECISION       = "1e-12"
DEFAULT_MAX_REFINEMENTS = 64

# 이분법 1회 = 정제 1회로 계산하는 근 분리 예산 (폭 2^-N 까지 도달 가능)
ROOT_BISECTION_BUDGET = 200000

# floor_power 의 작업 비트 확장 여유분 (비트)
FLOOR_GUARD_BITS = 32

# 스케줄 floor_power 정제 시도 횟수 (시도마다 보호 비트 2배)
FLOOR_MAX_ATTEMPTS = 8

# ln2 / exp 급수 계산 시 추가 보호 비트
SERIES_GUARD_BITS = 24

# ---------------------------------------------------------------------------
# 급수 평가
# eval_series 가 최소 N 을 찾을 때 탐색하는 최대 인덱스.
# ---------------------------------------------------------------------------
SERIES_MAX_INDEX = 4096

# ---------------------------------------------------------------------------
# 진단(diagnostics)
# 봉우리(peak) 판정 시 미결정이면 정밀도를 한 번 두 배로 올려 재시도한다.
# ---------------------------------------------------------------------------
PEAK_RETRY_FACTOR = 2

# ---------------------------------------------------------------------------
# 구성(construct) 파라미터
#   TAIL_TERMS_START  : 혼합 꼬리합에서 정확히 더하는 순수 스케줄 항 수 H 초기값
#   TAIL_TERMS_CAP    : H 자동 배가 상한
#   LEDGER_BITS       : 인증서 브래킷 원장 끝점의 바깥쪽 반올림 비트 수
#   COVERING_LOOKAHEAD: 깊이 이후 추가로 검사하는 커버링 인덱스 수 (d 에 더해짐)
#   SCHEDULE_ROOT_BITS: 스케줄 생성 시 c~_w 초기 분리 폭 2^-bits (저비용 하한과 감소 비율의 기준)
#   DECAY_EXPONENT_CAP: 감소 비율 C^-g 의 지수 상한 (상한을 씌워도 비율 인증은 유효)
# ---------------------------------------------------------------------------
TAIL_TERMS_START   = 1
TAIL_TERMS_CAP     = 4
LEDGER_BITS        = 256
COVERING_LOOKAHEAD = 0
SCHEDULE_ROOT_BITS = 64
DECAY_EXPONENT_CAP = 256

# 인증서에 기록되는 선언적 가정 문구
COVERING_ASSUMPTION = (
    "covering inequality for N beyond covering_checked_horizon is taken from "
    "the asymptotic argument for the schedule (beta_n, gamma_n); only "
    "N in [M, covering_checked_horizon] is checked by exact arithmetic"
)

# ---------------------------------------------------------------------------
# 로그 태그 상수
# LogSink에서 출력 접두어로 사용하며, 각 서비스의 로그 콜백 호출 시 태그로 전달한다.
# ---------------------------------------------------------------------------
LOG_TAG_INFO    = "INFO"
LOG_TAG_OK      = "OK"
LOG_TAG_ERROR   = "ERROR"
LOG_TAG_WARNING = "WARN"

# ---------------------------------------------------------------------------
# 종료 코드
# CliApplication.run() 이 반환하는 값. 모든 실행은 이 넷 중 하나로 끝난다.
# ---------------------------------------------------------------------------
EXIT_OK        = 0   # 성공 / 유효
EXIT_FAILURE   = 1   # 확정적 실패 (가설 위반, 무효 인증서, 범위 밖 목표값)
EXIT_UNDECIDED = 2   # 주어진 정밀도 예산에서 미결정
EXIT_USAGE     = 3   # 사용법 / 설정 오류

# plain 출력의 비권위(non-authoritative) 십진 표시 자릿수
PLAIN_DECIMAL_DIGITS = 20
