"""
services 패키지.

근 분리, 인클로저 산술, 급수 평가, 진단, 수열 구성, 인증서 저장/검증 등
계산 로직을 담당하는 서비스를 제공한다.

각 서비스는 UI 와 독립적으로 동작하며, 진행 상황은 (tag, message) 로그 콜백으로만 알린다.

외부 모듈에서는 패키지 레벨 임포트를 사용한다:
    from services import construct, VerificationService
"""

from services.construction         import construct
from services.certificate_store    import CertificateStore
from services.schedule             import Schedule
from services.verification_service import VerificationService, verify_certificate

__all__ = [
    "CertificateStore",
    "Schedule",
    "VerificationService",
    "construct",
    "verify_certificate",
]
