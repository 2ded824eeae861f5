"""
결과 문서 직렬화 서비스.

명령 결과를 결정적인 문서로 바꾼다.
    json  : {"schema": "rapid-series-report", "version": 1, "command": ..., "result": {...}}
            키 정렬, indent=2, ensure_ascii=False. 같은 입력은 바이트 단위로 같은 문서가 된다.
    plain : "경로: 값" 줄 목록. 분수 값 옆에 비권위 십진 근사를 덧붙인다.

모든 수치는 이미 "p/q" 문자열 또는 {lo, hi} 로 들어오며 부동소수점을 거치지 않는다.

사용처:
    - CliApplication.run() : 결과 문서 출력
"""

import json
import re
from dataclasses import dataclass, field
from typing      import Any, List

import config
from models.enclosure import format_decimal, parse_rational


# 십진 근사를 붙일 분수 문자열 (과도하게 큰 값은 생략)
_FRACTION = re.compile(r"^-?\d{1,4000}/\d{1,4000}$")


@dataclass
class RunResult:
    """
    명령 하나의 결과.

    속성:
        command   : 실행한 명령
        payload   : 직렬화 가능한 결과 딕셔너리 (문자열/정수/불리언/리스트/딕셔너리만)
        exit_code : config.EXIT_* 중 하나
        summary   : 로그에 남길 한 줄 요약
    """
    command:   str
    payload:   dict = field(default_factory=dict)
    exit_code: int  = config.EXIT_OK
    summary:   str  = ""


def _plain_lines(value: Any, path: str, lines: List[str]):
    if isinstance(value, dict):
        for key in sorted(value):
            _plain_lines(value[key], f"{path}.{key}" if path else str(key), lines)
        return
    if isinstance(value, list):
        if not value:
            lines.append(f"{path}: []")
        for i, item in enumerate(value):
            _plain_lines(item, f"{path}[{i}]", lines)
        return
    if value is None:
        lines.append(f"{path}: -")
        return
    if isinstance(value, bool):
        lines.append(f"{path}: {'yes' if value else 'no'}")
        return
    text = str(value)
    if isinstance(value, str) and _FRACTION.match(text):
        text = f"{text}  (≈ {format_decimal(parse_rational(text))})"
    lines.append(f"{path}: {text}")


def emit_report(result: RunResult, fmt: str = "json") -> str:
    """
    결과 문서를 문자열로 만든다 (끝에 줄바꿈 포함).

    @param result  RunResult
    @param fmt     "json" 또는 "plain"
    @returns       문서 문자열

    @example
        emit_report(RunResult("roots", root.to_dict()), "json")
        # {"command": "roots", "result": {"hi": "...", ...}, "schema": "rapid-series-report", "version": 1}
    """
    if fmt == "plain":
        lines = [f"# {config.APP_NAME} {result.command}"]
        _plain_lines(result.payload, "", lines)
        return "\n".join(lines) + "\n"

    document = {
        "schema":  config.REPORT_SCHEMA,
        "version": config.REPORT_SCHEMA_VERSION,
        "command": result.command,
        "result":  result.payload,
    }
    return json.dumps(document, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
