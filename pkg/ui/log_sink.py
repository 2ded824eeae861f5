"""
로그 출력 싱크.

타임스탬프 + 태그 로그를 표준 에러로 실시간 출력하고, 실행 요약을 마지막에 표시한다.
결과 문서는 표준 출력으로만 나가므로 로그가 결과의 결정성을 해치지 않는다.

로그 형식:
    "YYYY-MM-DD HH:MM:SS [TAG  ] 메시지"

사용처:
    - CliApplication.run() 에서 생성
    - 서비스 계층의 로그 콜백 (tag, message) 로 전달
    - _drain_log_queue() 에서 작업 스레드 메시지를 받아 append() 호출
"""

import datetime
import sys
from typing import List, Optional, TextIO, Tuple

from config import LOG_TAG_ERROR, LOG_TAG_INFO, LOG_TAG_OK


class LogSink:
    """
    로그 출력 및 내보내기.

    내부 상태:
        _stream      : 출력 스트림 (기본 sys.stderr)
        _quiet       : True 면 INFO 줄을 화면에 쓰지 않는다 (보관은 함)
        _log_entries : (timestamp, tag, message) 튜플 리스트
        _summary     : 마지막 요약 문자열
    """

    def __init__(self, stream: Optional[TextIO] = None, quiet: bool = False):
        self._stream:      TextIO                     = stream if stream is not None else sys.stderr
        self._quiet:       bool                       = quiet
        self._log_entries: List[Tuple[str, str, str]] = []
        self._summary:     str                        = ""

    @property
    def entries(self) -> List[Tuple[str, str, str]]:
        return list(self._log_entries)

    @property
    def summary(self) -> str:
        return self._summary

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------

    def append(self, tag: str, message: str):
        """
        로그 엔트리를 추가한다. 서비스 로그 콜백과 같은 시그니처이다.

        @param tag      로그 레벨 태그 (INFO, OK, ERROR, WARN)
        @param message  로그 메시지 문자열
        """
        timestamp = datetime.datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        tag_upper = tag.upper()
        self._log_entries.append((timestamp, tag_upper, message))

        if self._quiet and tag_upper == LOG_TAG_INFO:
            return
        self._stream.write(f"{timestamp} [{tag_upper:<5}] {message}\n")
        self._stream.flush()

    __call__ = append

    def set_summary(self, summary: str):
        """실행 요약을 기록하고 출력한다 (quiet 여부와 무관)."""
        self._summary = summary
        self._stream.write(f"{summary}\n")
        self._stream.flush()

    def export(self, file_path: str) -> bool:
        """
        보관한 로그를 텍스트 파일로 내보낸다.

        @param file_path  저장 경로
        @returns          성공 여부 (결과는 로그에도 남긴다)
        """
        try:
            with open(file_path, "w", encoding="utf-8") as f:
                for timestamp, tag, message in self._log_entries:
                    f.write(f"{timestamp} [{tag:<5}] {message}\n")
            self.append(LOG_TAG_OK, f"로그 내보내기 완료: {file_path}")
            return True
        except IOError as e:
            self.append(LOG_TAG_ERROR, f"로그 내보내기 실패: {e}")
            return False
