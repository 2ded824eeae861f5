"""
ui 패키지.

명령줄 사용자 인터페이스를 제공한다.

구성 요소:
    - CliApplication : 인자 해석, 명령 라우팅, 종료 코드 결정
    - LogSink        : 타임스탬프 + 태그 로그 출력 및 내보내기

외부 모듈에서는 패키지 레벨 임포트를 사용한다:
    from ui import CliApplication
"""

from ui.cli_app import CliApplication

__all__ = ["CliApplication"]
