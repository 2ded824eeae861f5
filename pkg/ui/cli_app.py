"""
명령줄 애플리케이션.

인자/설정 문서를 해석하고, 서비스 레이어를 호출하며, 결과 문서와 종료 코드를 만든다.

역할:
    - argparse 하위 명령 (roots, eval, hypotheses, diagnose, construct, verify)
    - --config JSON 문서 로드 후 명시 플래그로 덮어쓰기 (RunConfig)
    - 명령을 서비스 호출로 라우팅 (Controller 역할)
    - 예외 outcome -> 종료 코드 변환, {"error": {...}} 결과 문서

종료 코드:
    0 성공/유효, 1 확정적 실패, 2 미결정, 3 사용법/설정 오류

스레드 모델:
    verify 는 인증서마다 daemon 스레드를 하나씩 띄운다. 스레드의 로그는 Queue 에 넣고,
    메인 스레드가 큐를 비우며 LogSink 에 반영한다.

    특수 큐 메시지:
        ("__DONE__", "")       : 작업 스레드 하나 완료
        ("__SUMMARY__", text)  : 요약 텍스트 -> LogSink.set_summary()
"""

import argparse
import json
import queue
import sys
import threading
from typing import Callable, Dict, List, Optional, TextIO

import config
from models.enclosure          import Precision, format_rational, parse_rational
from models.polynomial         import RootKind
from models.run_config         import COMMANDS, FORMATS, POLY_KINDS, RunConfig
from models.weight_vector      import WeightVector
from services.certificate_store import CertificateStore
from services.charpoly         import (
    build_pw,
    build_pw_tilde,
    build_q,
    isolate_root,
    psi_polynomial,
    root_at_least_two,
    sign_variations,
)
from services.construction     import construct
from services.diagnostics      import (
    gap_ledger,
    growth_exponent,
    local_peak_sweep,
    mu_sequence,
    peaks,
)
from services.errors           import (
    ConfigError,
    FileAccessError,
    IndexBeyondHorizon,
    MalformedCertificate,
    NoCertificate,
    RapidSeriesError,
)
from services.report_writer    import RunResult, emit_report
from services.series           import (
    WeightedSeriesInstance,
    check_hypotheses,
    eval_series_detail,
    sequence_from_descriptor,
)
from services.verification_service import (
    VerificationResult,
    VerificationService,
    VerificationVerdict,
)
from ui.log_sink import LogSink


EXIT_BY_OUTCOME = {
    "failure":   config.EXIT_FAILURE,
    "undecided": config.EXIT_UNDECIDED,
    "usage":     config.EXIT_USAGE,
}


class _ArgumentParser(argparse.ArgumentParser):
    """사용법 오류를 SystemExit 대신 ConfigError 로 올린다."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    """
    하위 명령 파서를 만든다. 공통 옵션은 생략 시 네임스페이스에 없고 나머지는 None 이며,
    명시된 값만 설정 문서를 덮어쓴다.
    """
    common = _ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", dest="config_file", help="설정 JSON 문서")
    common.add_argument("--format", choices=FORMATS, help="결과 문서 형식 (기본 json)")
    common.add_argument("--output", help="결과 문서 경로 (construct 는 인증서 경로)")
    common.add_argument("--log-file", dest="log_file", help="로그 내보내기 경로")
    common.add_argument("--quiet", action="store_true", help="INFO 로그 숨김")
    common.add_argument("--prec", help='목표 폭 ("1e-12" 또는 "p/q")')
    common.add_argument("--max-refinements", dest="max_refinements", type=int, help="정제 예산")

    parser = _ArgumentParser(prog=config.APP_PROG, description=config.APP_NAME, parents=[common])
    parser.add_argument("--version", action="version", version=f"{config.APP_PROG} {config.APP_VERSION}")
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    roots = sub.add_parser("roots", parents=[common], help="특성 다항식 근 분리")
    roots.add_argument("--w")
    roots.add_argument("--poly", choices=POLY_KINDS)
    roots.add_argument("--d", type=int)

    evaluate = sub.add_parser("eval", parents=[common], help="가중 급수 인클로저")
    evaluate.add_argument("--seq")
    evaluate.add_argument("--b")
    evaluate.add_argument("--w")

    hyp = sub.add_parser("hypotheses", parents=[common], help="성장/가중 가설 검사")
    for name in ("--seq", "--b", "--w", "--eta", "--tau"):
        hyp.add_argument(name)
    hyp.add_argument("--horizon", type=int)

    diag = sub.add_parser("diagnose", parents=[common], help="mu_n, 봉우리, Mahler 간격")
    for name in ("--seq", "--b", "--w"):
        diag.add_argument(name)
    diag.add_argument("--horizon", type=int)
    diag.add_argument("--sweep", type=int)

    cons = sub.add_parser("construct", parents=[common], help="목표 합 수열 구성과 인증서")
    cons.add_argument("--w")
    cons.add_argument("--C", dest="C")
    cons.add_argument("--x", help='목표 합 "p/q" 또는 "mid"')
    cons.add_argument("--depth", type=int)

    ver = sub.add_parser("verify", parents=[common], help="인증서 독립 검증")
    ver.add_argument("paths", nargs="*", default=None, help='인증서 경로 ("-" 는 표준 입력)')
    return parser


class CliApplication:
    """
    명령 하나를 실행하는 컨트롤러.

    내부 상태:
        _stdout    : 결과 문서 스트림
        _stderr    : 로그 스트림
        _stdin     : verify "-" 입력 스트림
        _sink      : 현재 실행의 LogSink
        _log_queue : 작업 스레드 -> 메인 스레드 로그 전달 큐
        _store     : 인증서 저장소
    """

    def __init__(
        self,
        stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None,
        stdin:  Optional[TextIO] = None,
    ):
        self._stdout    = stdout if stdout is not None else sys.stdout
        self._stderr    = stderr if stderr is not None else sys.stderr
        self._stdin     = stdin if stdin is not None else sys.stdin
        self._sink      = LogSink(self._stderr)
        self._log_queue = queue.Queue()
        self._store     = CertificateStore()

    # ==================================================================
    # 실행
    # ==================================================================

    def run(self, argv: Optional[List[str]] = None) -> int:
        """
        인자를 해석해 명령을 실행하고 종료 코드를 반환한다.

        @param argv  명령줄 인자 (기본: sys.argv[1:])
        @returns     config.EXIT_* 중 하나

        @example
            CliApplication().run(["roots", "--w", "1,0,2,1", "--poly", "tilde", "--prec", "1e-12"])   # -> 0
        """
        try:
            cfg = self._parse(sys.argv[1:] if argv is None else argv)
        except ConfigError as e:
            self._sink.append(config.LOG_TAG_ERROR, f"사용법 오류: {e.message}")
            self._stdout.write(emit_report(RunResult("usage", {"error": e.to_dict()}, config.EXIT_USAGE)))
            return config.EXIT_USAGE

        self._sink = LogSink(self._stderr, quiet=cfg.quiet)
        handlers: Dict[str, Callable[[RunConfig], RunResult]] = {
            "roots":      self._do_roots,
            "eval":       self._do_eval,
            "hypotheses": self._do_hypotheses,
            "diagnose":   self._do_diagnose,
            "construct":  self._do_construct,
            "verify":     self._do_verify,
        }
        try:
            result = handlers[cfg.command](cfg)
        except RapidSeriesError as e:
            self._sink.append(config.LOG_TAG_ERROR, f"{e.code}: {e.message}")
            result = RunResult(cfg.command, {"error": e.to_dict()}, EXIT_BY_OUTCOME[e.outcome])
        except ValueError as e:
            self._sink.append(config.LOG_TAG_ERROR, f"입력 오류: {e}")
            result = RunResult(cfg.command, {"error": ConfigError(str(e)).to_dict()}, config.EXIT_USAGE)
        except OSError as e:
            error = FileAccessError(str(e))
            self._sink.append(config.LOG_TAG_ERROR, f"{error.code}: {error.message}")
            result = RunResult(cfg.command, {"error": error.to_dict()}, config.EXIT_FAILURE)

        if result.summary:
            self._sink.set_summary(result.summary)
        try:
            self._write(emit_report(result, cfg.format), None if cfg.command == "construct" else cfg.output)
        except FileAccessError as e:
            # 결과 문서를 쓰지 못하면 오류 문서를 표준 출력으로 보낸다
            self._sink.append(config.LOG_TAG_ERROR, f"{e.code}: {e.message}")
            result = RunResult(cfg.command, {"error": e.to_dict()}, config.EXIT_FAILURE)
            self._stdout.write(emit_report(result, cfg.format))
        if cfg.log_file:
            self._sink.export(cfg.log_file)
        return result.exit_code

    def _parse(self, argv: List[str]) -> RunConfig:
        args = vars(build_parser().parse_args(argv))
        config_file = args.pop("config_file", None)
        base = RunConfig()
        if config_file:
            base = self._load_config(config_file)
        if args.get("command") and base.command and args["command"] != base.command:
            raise ConfigError(f"설정 문서의 명령({base.command}) 과 인자 명령({args['command']}) 이 다릅니다")
        if args.get("paths") == []:
            args["paths"] = None
        try:
            cfg = base.merged(args)
            cfg.validate()
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e))
        return cfg

    @staticmethod
    def _load_config(file_path: str) -> RunConfig:
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
            raise ConfigError(f"설정 문서를 읽을 수 없습니다: {file_path} ({e})")
        try:
            return RunConfig.from_dict(data)
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e))

    def _write(self, text: str, file_path: Optional[str]):
        if not file_path:
            self._stdout.write(text)
            return
        try:
            with open(file_path, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise FileAccessError(f"결과 문서를 쓸 수 없습니다: {file_path} ({e})")
        self._sink.append(config.LOG_TAG_OK, f"결과 문서 저장: {file_path}")

    @staticmethod
    def _precision(cfg: RunConfig) -> Precision:
        return Precision.parse(cfg.prec, cfg.max_refinements)

    def _instance(self, cfg: RunConfig) -> WeightedSeriesInstance:
        a = sequence_from_descriptor(cfg.seq)
        b = sequence_from_descriptor(cfg.b)
        return WeightedSeriesInstance(a, WeightVector.parse(cfg.w), b)

    # ==================================================================
    # 명령
    # ==================================================================

    def _do_roots(self, cfg: RunConfig) -> RunResult:
        prec = self._precision(cfg)
        payload = {}
        if cfg.poly == "psi":
            poly, kind = psi_polynomial(cfg.d), RootKind.LARGEST_POSITIVE
        else:
            w = WeightVector.parse(cfg.w)
            if cfg.poly == "pw":
                poly, kind = build_pw(w), RootKind.UNIQUE_POSITIVE
                q = build_q(w)
                payload["q"] = {**q.to_dict(), "sign_variations": sign_variations(q)}
                payload["root_at_least_two"] = root_at_least_two(w)
            else:
                poly, kind = build_pw_tilde(w), RootKind.LARGEST_POSITIVE
        self._sink.append(config.LOG_TAG_INFO, f"근 분리: {poly} ({kind.value})")
        root = isolate_root(poly, kind, prec)
        payload.update(root.to_dict())
        payload["display"] = root.enclosure.to_display_dict()
        return RunResult("roots", payload, summary=f"근 폭 {payload['width']}")

    def _do_eval(self, cfg: RunConfig) -> RunResult:
        inst = self._instance(cfg)
        detail = eval_series_detail(inst, self._precision(cfg))
        payload = {"instance": inst.to_dict(), **detail.to_dict(),
                   "display": detail.enclosure.to_display_dict()}
        return RunResult("eval", payload, summary=f"N={detail.N} 에서 인클로저 완성")

    def _do_hypotheses(self, cfg: RunConfig) -> RunResult:
        inst = self._instance(cfg)
        report = check_hypotheses(inst, parse_rational(cfg.eta), parse_rational(cfg.tau), cfg.horizon)
        code = config.EXIT_OK if report.ok else config.EXIT_FAILURE
        return RunResult("hypotheses", {"instance": inst.to_dict(), **report.to_dict()}, code, report.summary)

    def _do_diagnose(self, cfg: RunConfig) -> RunResult:
        inst = self._instance(cfg)
        prec = self._precision(cfg)
        c = isolate_root(build_pw(inst.w), RootKind.UNIQUE_POSITIVE, prec)
        self._sink.append(config.LOG_TAG_INFO, f"c_w ∈ [{c.lo}, {c.hi}]")

        mus = mu_sequence(inst, c, cfg.horizon, prec)
        finer = prec.tightened(config.PEAK_RETRY_FACTOR)
        refine = lambda: mu_sequence(inst, c, cfg.horizon, finer)
        found = peaks(mus, refine=refine)
        payload = {
            "instance": inst.to_dict(),
            "c_w":      c.to_dict(),
            "mu":       mus.to_dict()["mu"],
            "peaks":    found.to_dict(),
            "growth":   [
                {"n": n, **growth_exponent(inst, c, n, prec).to_dict()}
                for n in range(1, cfg.horizon + 1)
            ],
        }
        if cfg.sweep:
            q_max = min(cfg.sweep, cfg.horizon - 1)
            payload["local_peaks"] = [
                r.to_dict() for r in local_peak_sweep(inst, mus, min(cfg.sweep, q_max), q_max, refine)
            ]
        try:
            payload["gaps"] = [g.to_dict() for g in gap_ledger(inst, range(inst.d, cfg.horizon + 1), prec)]
        except (NoCertificate, IndexBeyondHorizon) as e:
            self._sink.append(config.LOG_TAG_WARNING, f"Mahler 간격 생략: {e.message}")
            payload["gaps"] = None
        summary = f"봉우리 {len(found.indices)}개, 미결정 {len(found.undecided)}개"
        return RunResult("diagnose", payload, summary=summary)

    def _do_construct(self, cfg: RunConfig) -> RunResult:
        w = WeightVector.parse(cfg.w)
        x = None if cfg.x == "mid" else parse_rational(cfg.x)
        series, cert = construct(w, parse_rational(cfg.C), x, cfg.depth, self._precision(cfg), log=self._sink)
        summary = {
            "M":                        cert.M,
            "depth":                    cert.depth,
            "repair_start":             cert.repair_start,
            "target":                   cert.to_dict()["target"],
            "final_bracket":            cert.final_bracket.to_dict(),
            "final_width":              format_rational(cert.final_bracket.width),
        }
        if cfg.output:
            self._store.save(cert, cfg.output)
            self._sink.append(config.LOG_TAG_OK, f"인증서 저장: {cfg.output}")
            payload = {"summary": summary, "certificate_path": cfg.output}
        else:
            payload = {"summary": summary, "certificate": cert.to_dict()}
        return RunResult("construct", payload, summary=f"{cert.depth}항 구성, M={cert.M}")

    # ==================================================================
    # Verify (스레드)
    # ==================================================================

    def _do_verify(self, cfg: RunConfig) -> RunResult:
        results: List[Optional[VerificationResult]] = [None] * len(cfg.paths)
        stdin_text = self._stdin.read() if "-" in cfg.paths else None

        for index, path in enumerate(cfg.paths):
            self._run_in_thread(self._verify_worker, (index, path, stdin_text, results))
        self._drain_log_queue(len(cfg.paths))

        verdicts = [r.verdict for r in results]
        if VerificationVerdict.INVALID in verdicts:
            code = config.EXIT_FAILURE
        elif VerificationVerdict.UNDECIDED in verdicts:
            code = config.EXIT_UNDECIDED
        else:
            code = config.EXIT_OK
        valid = sum(1 for v in verdicts if v is VerificationVerdict.VALID)
        payload = {"results": [r.to_dict() for r in results]}
        return RunResult("verify", payload, code, f"인증서 {len(results)}건 중 유효 {valid}건")

    def _verify_worker(self, index: int, path: str, stdin_text: Optional[str], results: list):
        """
        스레드에서 실행되는 인증서 한 건 검증.

        @param index       결과 슬롯
        @param path        인증서 경로 ("-" 는 stdin_text)
        @param stdin_text  표준 입력 내용
        @param results     결과 리스트 (슬롯별 단일 기록)
        """
        source = "<stdin>" if path == "-" else path
        try:
            cert = self._store.loads(stdin_text) if path == "-" else self._store.load(path)
            results[index] = VerificationService(cert).verify(source, log=self._thread_log)
        except MalformedCertificate as e:
            failed = VerificationResult(source)
            failed.verdict = VerificationVerdict.INVALID
            failed.reason = e.code
            failed.detail = e.message
            failed.errors.append(e.message)
            results[index] = failed
            self._thread_log(config.LOG_TAG_ERROR, failed.summary)
        except Exception as e:
            failed = VerificationResult(source)
            failed.verdict = VerificationVerdict.UNDECIDED
            failed.reason = "internal-error"
            failed.detail = str(e)
            failed.errors.append(str(e))
            results[index] = failed
            self._thread_log(config.LOG_TAG_ERROR, f"검증 실패: {source}: {e}")
        else:
            self._log_queue.put(("__SUMMARY__", results[index].summary))

    def _run_in_thread(self, target, args=()):
        """
        작업을 백그라운드 daemon 스레드에서 실행한다.
        실행 후 __DONE__ 메시지를 큐에 넣어 _drain_log_queue() 가 완료를 센다.
        """
        def wrapper():
            try:
                target(*args)
            finally:
                self._log_queue.put(("__DONE__", ""))

        thread = threading.Thread(target=wrapper, daemon=True)
        thread.start()

    def _drain_log_queue(self, workers: int):
        """
        모든 작업 스레드가 끝날 때까지 큐를 비우며 LogSink 에 반영한다.

            - __DONE__    : 완료 카운트 증가
            - __SUMMARY__ : LogSink.set_summary()
            - 그 외       : LogSink.append()
        """
        done = 0
        while done < workers:
            tag, message = self._log_queue.get()
            if tag == "__DONE__":
                done += 1
                continue
            if tag == "__SUMMARY__":
                self._sink.set_summary(message)
                continue
            self._sink.append(tag, message)

    def _thread_log(self, tag: str, message: str):
        """작업 스레드에서 안전하게 로그를 남긴다 (큐 경유)."""
        self._log_queue.put((tag, message))


def main(argv: Optional[List[str]] = None) -> int:
    return CliApplication().run(argv)
