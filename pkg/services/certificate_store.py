"""
인증서 파일 저장소.

인증서를 UTF-8 JSON 파일로 쓰고 읽는다. JSON 파일을 직접 다루는 곳은 여기뿐이다.

저장 형식:
    models.certificate 모듈 설명 참조. 키 정렬(sort_keys), indent=2,
    ensure_ascii=False 로 쓰므로 같은 인증서는 바이트 단위로 같은 문서가 된다.

사용처:
    - CliApplication._do_construct() : --output 경로에 저장
    - CliApplication._verify_worker() : 검증 대상 인증서 로드
"""

import json
import os

import config
from models.certificate import Certificate
from services.errors    import FileAccessError, MalformedCertificate


class CertificateStore:
    """
    인증서 JSON 직렬화와 파일 입출력.

    상태를 갖지 않으며, 여러 스레드에서 서로 다른 파일을 동시에 읽어도 된다.
    """

    @staticmethod
    def dumps(cert: Certificate) -> str:
        """
        인증서를 결정적인 JSON 문자열로 바꾼다 (끝에 줄바꿈 포함).

        @example
            text = CertificateStore.dumps(cert)
            CertificateStore.dumps(CertificateStore.loads(text)) == text   # -> True
        """
        return json.dumps(cert.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def loads(text: str) -> Certificate:
        """
        JSON 문자열에서 인증서를 만든다.

        @throws MalformedCertificate JSON 파싱 실패, 필드 누락, 형식/버전 불일치
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedCertificate(f"JSON 파싱 실패: {e}")
        if not isinstance(data, dict):
            raise MalformedCertificate("최상위 구조가 객체가 아닙니다")
        # construct 결과 문서는 result.certificate 에 인증서를 담는다
        if data.get("schema") == config.REPORT_SCHEMA:
            result = data.get("result")
            data = result.get("certificate") if isinstance(result, dict) else None
            if not isinstance(data, dict):
                raise MalformedCertificate("결과 문서에 인증서가 없습니다")
        try:
            return Certificate.from_dict(data)
        except KeyError as e:
            raise MalformedCertificate(f"필수 필드 누락: {e}")
        except (ValueError, TypeError) as e:
            raise MalformedCertificate(str(e))

    def save(self, cert: Certificate, file_path: str) -> None:
        """
        인증서를 파일에 쓴다. 상위 디렉토리가 없으면 만든다.

        @throws FileAccessError 파일 쓰기 실패 시
        """
        try:
            directory = os.path.dirname(os.path.abspath(file_path))
            os.makedirs(directory, exist_ok=True)
            with open(file_path, "w", encoding="utf-8") as f:
                f.write(self.dumps(cert))
        except OSError as e:
            raise FileAccessError(f"인증서를 쓸 수 없습니다: {file_path} ({e})")

    def load(self, file_path: str) -> Certificate:
        """
        파일에서 인증서를 읽는다.

        @throws MalformedCertificate 파일이 없거나 읽을 수 없거나 형식이 잘못된 경우
        """
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                text = f.read()
        except (OSError, UnicodeDecodeError) as e:
            raise MalformedCertificate(f"인증서 파일을 읽을 수 없습니다: {file_path} ({e})")
        return self.loads(text)
