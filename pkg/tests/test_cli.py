import io
import json

from gmpy2 import mpq

import config
from models.enclosure           import parse_rational
from services.certificate_store import CertificateStore
from ui.cli_app                 import CliApplication, main


def _run(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    app = CliApplication(stdout=out, stderr=err, stdin=io.StringIO(stdin_text))
    code = app.run(argv)
    return code, out.getvalue(), err.getvalue()


def _document(text):
    doc = json.loads(text)
    assert doc["schema"] == config.REPORT_SCHEMA
    return doc


# ------------------------------------------------------------------
# roots
# ------------------------------------------------------------------

def test_roots_exact_root():
    code, out, _err = _run(["roots", "--w", "1"])
    assert code == config.EXIT_OK
    result = _document(out)["result"]
    assert (result["lo"], result["hi"]) == ("2", "2")
    assert result["q"]["sign_variations"] == 0
    assert result["root_at_least_two"] is True


def test_roots_psi():
    code, out, _err = _run(["roots", "--poly", "psi", "--d", "2", "--prec", "1e-20"])
    assert code == config.EXIT_OK
    result = _document(out)["result"]
    assert result["kind"] == "largest-positive"
    lo, hi = parse_rational(result["lo"]), parse_rational(result["hi"])
    assert lo < mpq(16180339, 10 ** 7) < hi
    assert hi - lo <= mpq(1, 10 ** 20)


def test_roots_psi_requires_degree():
    code, out, _err = _run(["roots", "--poly", "psi"])
    assert code == config.EXIT_USAGE
    doc = _document(out)
    assert doc["command"] == "usage"
    assert doc["result"]["error"]["code"] == "config-error"


def test_plain_format():
    code, out, _err = _run(["roots", "--w", "1", "--format", "plain"])
    assert code == config.EXIT_OK
    lines = out.splitlines()
    assert lines[0] == f"# {config.APP_NAME} roots"
    assert "lo: 2" in lines


def test_output_file_keeps_stdout_empty(tmp_path):
    path = tmp_path / "roots.json"
    code, out, _err = _run(["roots", "--w", "1,1", "--output", str(path)])
    assert code == config.EXIT_OK
    assert out == ""
    assert _document(path.read_text(encoding="utf-8"))["command"] == "roots"


def test_unwritable_output_is_failure(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    code, out, _err = _run(["roots", "--w", "1", "--output", str(blocker / "roots.json")])
    assert code == config.EXIT_FAILURE
    assert _document(out)["result"]["error"]["code"] == "file-access-error"


def test_unwritable_certificate_is_failure(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    code, out, _err = _run([
        "construct", "--w", "1", "--C", "2", "--depth", "3", "--output", str(blocker / "cert.json"),
    ])
    assert code == config.EXIT_FAILURE
    assert _document(out)["result"]["error"]["code"] == "file-access-error"


# ------------------------------------------------------------------
# 설정 / 사용법
# ------------------------------------------------------------------

def test_unknown_command():
    code, _out, _err = _run(["frobnicate"])
    assert code == config.EXIT_USAGE


def test_missing_command():
    code, _out, _err = _run([])
    assert code == config.EXIT_USAGE


def test_config_document_unknown_key(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "roots", "w": "1", "colour": "red"}), encoding="utf-8")
    code, out, _err = _run(["--config", str(path), "roots"])
    assert code == config.EXIT_USAGE
    assert "colour" in _document(out)["result"]["error"]["message"]


def test_config_document_command_mismatch(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "eval", "seq": "sylvester", "w": "1"}), encoding="utf-8")
    code, _out, _err = _run(["--config", str(path), "roots", "--w", "1"])
    assert code == config.EXIT_USAGE


def test_flags_override_config_document(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "roots", "w": "1,1"}), encoding="utf-8")
    code, out, _err = _run(["--config", str(path), "roots", "--w", "1"])
    assert code == config.EXIT_OK
    assert _document(out)["result"]["lo"] == "2"


def test_config_document_alone(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "roots", "w": "1"}), encoding="utf-8")
    code, out, _err = _run(["--config", str(path)])
    assert code == config.EXIT_OK
    assert _document(out)["command"] == "roots"


def test_invalid_sequence_is_usage_error():
    code, out, _err = _run(["eval", "--seq", "fibonacci", "--w", "1"])
    assert code == config.EXIT_USAGE
    assert _document(out)["result"]["error"]["code"] == "invalid-sequence"


# ------------------------------------------------------------------
# eval / hypotheses / diagnose
# ------------------------------------------------------------------

def test_eval_geometric_pair():
    code, out, _err = _run(["eval", "--seq", "geometric:2", "--w", "1,1"])
    assert code == config.EXIT_OK
    enclosure = _document(out)["result"]["enclosure"]
    assert parse_rational(enclosure["lo"]) <= mpq(1, 6) <= parse_rational(enclosure["hi"])


def test_eval_without_certificate_fails():
    code, out, _err = _run(["eval", "--seq", "poly:3", "--w", "1"])
    assert code == config.EXIT_FAILURE
    assert _document(out)["result"]["error"]["code"] == "no-certificate"


def test_hypotheses_violation_exit_code():
    code, out, _err = _run([
        "hypotheses", "--seq", "geometric:2", "--w", "1",
        "--eta", "1/2", "--tau", "1", "--horizon", "10",
    ])
    assert code == config.EXIT_FAILURE
    result = _document(out)["result"]
    assert result["ok"] is False
    assert result["violations"] == [3]


def test_hypotheses_pass():
    code, _out, _err = _run([
        "hypotheses", "--seq", "sylvester", "--w", "1,1",
        "--eta", "1/3", "--tau", "1/2", "--horizon", "12",
    ])
    assert code == config.EXIT_OK


def test_diagnose_reports_mu_and_peaks():
    code, out, _err = _run(["diagnose", "--seq", "tower:2:2", "--w", "1", "--horizon", "5", "--sweep", "2"])
    assert code == config.EXIT_OK
    result = _document(out)["result"]
    assert [entry["n"] for entry in result["mu"]] == [1, 2, 3, 4, 5]
    assert len(result["growth"]) == 5
    assert "indices" in result["peaks"]
    assert result["local_peaks"]


# ------------------------------------------------------------------
# construct / verify
# ------------------------------------------------------------------

def test_construct_then_verify(tmp_path):
    cert_path = tmp_path / "cert.json"
    code, out, _err = _run([
        "construct", "--w", "1", "--C", "2", "--depth", "4", "--output", str(cert_path),
    ])
    assert code == config.EXIT_OK
    summary = _document(out)["result"]["summary"]
    assert summary["M"] == 2
    assert summary["depth"] == 4
    assert cert_path.exists()

    code, out, _err = _run(["verify", str(cert_path)])
    assert code == config.EXIT_OK
    results = _document(out)["result"]["results"]
    assert [r["verdict"] for r in results] == ["valid"]


def test_construct_document_is_verifiable(tmp_path):
    code, out, _err = _run(["construct", "--w", "1", "--C", "2", "--depth", "3"])
    assert code == config.EXIT_OK
    report_path = tmp_path / "report.json"
    report_path.write_text(out, encoding="utf-8")
    code, _out, _err = _run(["verify", str(report_path)])
    assert code == config.EXIT_OK


def test_construct_target_outside_range():
    code, out, _err = _run(["construct", "--w", "1", "--C", "2", "--depth", "4", "--x", "1"])
    assert code == config.EXIT_FAILURE
    assert _document(out)["result"]["error"]["code"] == "target-outside-range"


def test_verify_from_stdin(unit_construction):
    _series, cert = unit_construction
    code, out, _err = _run(["verify", "-"], stdin_text=CertificateStore.dumps(cert))
    assert code == config.EXIT_OK
    result = _document(out)["result"]["results"][0]
    assert result["source"] == "<stdin>"


def test_verify_mixed_batch(unit_construction, tmp_path):
    _series, cert = unit_construction
    good = tmp_path / "good.json"
    bad = tmp_path / "bad.json"
    CertificateStore().save(cert, str(good))
    bad.write_text("{", encoding="utf-8")
    code, out, _err = _run(["verify", str(good), str(bad)])
    assert code == config.EXIT_FAILURE
    results = _document(out)["result"]["results"]
    assert [r["verdict"] for r in results] == ["valid", "invalid"]
    assert results[1]["reason"] == "malformed-certificate"


def test_verify_requires_paths():
    code, _out, _err = _run(["verify"])
    assert code == config.EXIT_USAGE


# ------------------------------------------------------------------
# 로그
# ------------------------------------------------------------------

def test_quiet_hides_info_lines():
    _code, _out, err = _run(["roots", "--w", "1", "--quiet"])
    assert "[INFO ]" not in err
    _code, _out, err = _run(["roots", "--w", "1"])
    assert "[INFO ]" in err


def test_log_file_export(tmp_path):
    log_path = tmp_path / "run.log"
    code, _out, _err = _run(["roots", "--w", "1", "--log-file", str(log_path)])
    assert code == config.EXIT_OK
    assert "[INFO ]" in log_path.read_text(encoding="utf-8")


def test_main_entry(capsys):
    assert main(["roots", "--w", "1"]) == config.EXIT_OK
    assert json.loads(capsys.readouterr().out)["command"] == "roots"
