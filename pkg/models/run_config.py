"""
실행 설정 데이터 모델.

CLI 플래그와 --config JSON 문서가 같은 키를 공유한다. 문서 값을 먼저 읽고
명시된 CLI 플래그가 덮어쓴다. 알 수 없는 키는 계산 전에 거부한다.

설정 문서 예:
    {
      "command": "construct",
      "w": "1,1", "C": "2", "x": "mid", "depth": 15,
      "prec": "1e-12", "format": "json"
    }

사용처:
    - CliApplication._parse() : 문서 + 플래그 병합, 명령별 필수값 검사
"""

from dataclasses import dataclass, field, fields
from typing      import List, Optional

import config


COMMANDS = ("roots", "eval", "hypotheses", "diagnose", "construct", "verify")
FORMATS  = ("json", "plain")
POLY_KINDS = ("pw", "tilde", "psi")

# 명령별 필수 키
REQUIRED = {
    "roots":      (),
    "eval":       ("seq", "w"),
    "hypotheses": ("seq", "w", "eta", "tau", "horizon"),
    "diagnose":   ("seq", "w", "horizon"),
    "construct":  ("w", "C", "depth"),
    "verify":     ("paths",),
}


@dataclass
class RunConfig:
    """
    명령 하나의 실행 매개변수. 모든 수학 값은 문자열로 보관하고 서비스 호출 직전에 해석한다.

    @param command          roots / eval / hypotheses / diagnose / construct / verify
    @param w                가중치 벡터 "1,0,2,1"
    @param poly             roots 대상: pw (P_w), tilde (P~_w), psi (x^d - x^{d-1} - 1)
    @param d                poly=psi 의 차수
    @param seq              분모 수열 기술자 (sylvester, geometric:B, poly:E, tower:B:K, file:PATH)
    @param b                분자 수열 기술자 (기본 one)
    @param C                스케줄 밑 "p/q"
    @param x                목표 합 "p/q" 또는 "mid"
    @param depth            구성 깊이
    @param horizon          검사/진단 범위
    @param eta, tau         가설 지수 "p/q"
    @param sweep            국소 봉우리 전수 검사의 P, Q 상한 (0 이면 생략)
    @param prec             목표 폭 "1e-k" 또는 "p/q"
    @param max_refinements  정제 예산
    @param format           json / plain
    @param output           결과 문서(construct 는 인증서) 경로, 없으면 표준 출력
    @param paths            verify 대상 인증서 경로 ("-" 는 표준 입력)
    @param log_file         로그 내보내기 경로
    @param quiet            INFO 로그 숨김
    """
    command:         Optional[str] = None
    w:               Optional[str] = None
    poly:            str           = "pw"
    d:               Optional[int] = None
    seq:             Optional[str] = None
    b:               str           = "one"
    C:               Optional[str] = None
    x:               str           = "mid"
    depth:           Optional[int] = None
    horizon:         Optional[int] = None
    eta:             Optional[str] = None
    tau:             Optional[str] = None
    sweep:           int           = 0
    prec:            str           = config.DEFAULT_PRECISION
    max_refinements: int           = config.DEFAULT_MAX_REFINEMENTS
    format:          str           = "json"
    output:          Optional[str] = None
    paths:           List[str]     = field(default_factory=list)
    log_file:        Optional[str] = None
    quiet:           bool          = False

    @classmethod
    def known_keys(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        """
        @throws ValueError 알 수 없는 키 또는 객체가 아닌 문서
        """
        if not isinstance(data, dict):
            raise ValueError("설정 문서의 최상위 구조는 객체여야 합니다")
        unknown = sorted(set(data) - set(cls.known_keys()))
        if unknown:
            raise ValueError(f"알 수 없는 설정 키: {', '.join(unknown)}")
        return cls(**data)

    def merged(self, overrides: dict) -> "RunConfig":
        """None 이 아닌 overrides 값으로 덮어쓴 새 설정."""
        values = self.to_dict()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(values)

    def validate(self) -> None:
        """
        명령, 형식, 명령별 필수 키, 정수 범위를 검사한다.

        @throws ValueError 검사 실패
        """
        if self.command not in COMMANDS:
            raise ValueError(f"명령이 지정되지 않았거나 알 수 없습니다: {self.command!r}")
        if self.format not in FORMATS:
            raise ValueError(f"format 은 {'/'.join(FORMATS)} 중 하나여야 합니다: {self.format!r}")
        if self.poly not in POLY_KINDS:
            raise ValueError(f"poly 는 {'/'.join(POLY_KINDS)} 중 하나여야 합니다: {self.poly!r}")
        for key in REQUIRED[self.command]:
            value = getattr(self, key)
            if value is None or value == []:
                raise ValueError(f"{self.command} 명령에는 '{key}' 가 필요합니다")
        if self.command == "roots":
            if self.poly == "psi" and self.d is None:
                raise ValueError("poly=psi 에는 'd' 가 필요합니다")
            if self.poly != "psi" and self.w is None:
                raise ValueError("roots 명령에는 'w' 가 필요합니다")
        for key in ("d", "depth", "horizon"):
            value = getattr(self, key)
            if value is not None and (not isinstance(value, int) or isinstance(value, bool) or value < 1):
                raise ValueError(f"'{key}' 는 1 이상의 정수여야 합니다: {value!r}")
        if not isinstance(self.sweep, int) or self.sweep < 0:
            raise ValueError(f"'sweep' 은 0 이상의 정수여야 합니다: {self.sweep!r}")
        if not isinstance(self.max_refinements, int) or self.max_refinements < 1:
            raise ValueError(f"'max_refinements' 는 1 이상의 정수여야 합니다: {self.max_refinements!r}")
        if not isinstance(self.paths, list):
            raise ValueError("'paths' 는 문자열 배열이어야 합니다")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}
