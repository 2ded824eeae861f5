"""
models 패키지.

데이터 전송 객체(Data Transfer Object) 및 도메인 모델을 정의한다.
모든 수치는 gmpy2 정수/유리수로 보관하며 부동소수점을 거치지 않는다.

외부 모듈에서는 패키지 레벨 임포트를 사용한다:
    from models import Certificate, Enclosure, WeightVector
"""

from models.enclosure          import Enclosure, Precision
from models.weight_vector      import WeightVector
from models.polynomial         import IntPolynomial, RootEnclosure, RootKind
from models.sequence_spec      import HypothesisReport, SequenceKind, SequenceSpec
from models.diagnostics_report import LocalPeakVerdict, MahlerGapReport, MuSequence, PeakSet, Trilean
from models.certificate        import Certificate, CoveringVerdict, LedgerEntry
from models.run_config         import RunConfig

__all__ = [
    "Certificate",
    "CoveringVerdict",
    "Enclosure",
    "HypothesisReport",
    "IntPolynomial",
    "LedgerEntry",
    "LocalPeakVerdict",
    "MahlerGapReport",
    "MuSequence",
    "PeakSet",
    "Precision",
    "RootEnclosure",
    "RootKind",
    "RunConfig",
    "SequenceKind",
    "SequenceSpec",
    "Trilean",
    "WeightVector",
]
