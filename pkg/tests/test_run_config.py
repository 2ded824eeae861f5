import io
import json

import pytest

import config
from models.run_config      import RunConfig
from services.report_writer import RunResult, emit_report
from ui.log_sink            import LogSink


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ValueError):
        RunConfig.from_dict({"command": "roots", "precision": "1e-9"})


def test_from_dict_rejects_non_object():
    with pytest.raises(ValueError):
        RunConfig.from_dict(["roots"])


def test_merged_ignores_none():
    base = RunConfig.from_dict({"command": "construct", "w": "1,1", "C": "2", "depth": 8})
    merged = base.merged({"depth": 12, "w": None})
    assert merged.depth == 12
    assert merged.w == "1,1"
    assert base.depth == 8


@pytest.mark.parametrize(
    "values",
    [
        {"command": "launch"},
        {"command": "eval", "seq": "sylvester"},
        {"command": "roots", "poly": "psi"},
        {"command": "roots", "w": "1", "poly": "cubic"},
        {"command": "construct", "w": "1", "C": "2", "depth": 0},
        {"command": "diagnose", "seq": "sylvester", "w": "1", "horizon": 5, "sweep": -1},
        {"command": "verify", "paths": []},
        {"command": "roots", "w": "1", "format": "xml"},
        {"command": "roots", "w": "1", "max_refinements": 0},
    ]
)
def test_validate_rejects(values):
    with pytest.raises(ValueError):
        RunConfig.from_dict(values).validate()


def test_validate_accepts_defaults():
    cfg = RunConfig.from_dict({"command": "roots", "w": "1,0,2,1"})
    cfg.validate()
    assert cfg.prec == config.DEFAULT_PRECISION
    assert cfg.b == "one"
    assert cfg.x == "mid"


# ------------------------------------------------------------------
# 결과 문서
# ------------------------------------------------------------------

def test_json_report_is_deterministic():
    result = RunResult("roots", {"lo": "2", "hi": "2", "poly": {"text": "x - 2"}})
    first = emit_report(result)
    assert first == emit_report(result)
    doc = json.loads(first)
    assert doc["version"] == config.REPORT_SCHEMA_VERSION
    assert doc["command"] == "roots"
    assert list(doc) == sorted(doc)


def test_plain_report_annotates_fractions():
    result = RunResult("eval", {"enclosure": {"lo": "1/8", "hi": "1/4"}, "ok": True, "gaps": None, "peaks": []})
    lines = emit_report(result, "plain").splitlines()
    assert lines[0] == f"# {config.APP_NAME} eval"
    assert "enclosure.lo: 1/8  (≈ 0.125" in "\n".join(lines)
    assert "ok: yes" in lines
    assert "gaps: -" in lines
    assert "peaks: []" in lines


# ------------------------------------------------------------------
# 로그 싱크
# ------------------------------------------------------------------

def test_log_sink_format():
    stream = io.StringIO()
    sink = LogSink(stream)
    sink(config.LOG_TAG_OK, "완료")
    line = stream.getvalue()
    assert line.endswith(" [OK   ] 완료\n")
    assert sink.entries[0][1:] == ("OK", "완료")


def test_log_sink_quiet_keeps_entries():
    stream = io.StringIO()
    sink = LogSink(stream, quiet=True)
    sink.append("info", "숨김")
    sink.append(config.LOG_TAG_WARNING, "표시")
    assert "숨김" not in stream.getvalue()
    assert "표시" in stream.getvalue()
    assert [e[1] for e in sink.entries] == ["INFO", "WARN"]


def test_log_sink_summary_and_export(tmp_path):
    stream = io.StringIO()
    sink = LogSink(stream, quiet=True)
    sink.append(config.LOG_TAG_INFO, "시작")
    sink.set_summary("인증서 1건 중 유효 1건")
    assert sink.summary == "인증서 1건 중 유효 1건"
    assert stream.getvalue().endswith("인증서 1건 중 유효 1건\n")

    path = tmp_path / "run.log"
    assert sink.export(str(path))
    assert "[INFO ] 시작" in path.read_text(encoding="utf-8")


def test_log_sink_export_failure(tmp_path):
    sink = LogSink(io.StringIO())
    assert not sink.export(str(tmp_path / "missing" / "run.log"))
    assert sink.entries[-1][1] == config.LOG_TAG_ERROR
