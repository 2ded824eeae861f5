"""
Rapid Series Certifier - Entry Point

빠르게 증가하는 정수열의 가중 역수 급수를 다루는 명령줄 도구.
특성 다항식 근 분리, 급수 인클로저, 비유리성 진단, 목표 합 수열 구성과 인증서 검증을 제공한다.

주요 명령:
    - roots      : P_w / P~_w / x^d - x^{d-1} - 1 의 양의 근 인클로저
    - eval       : sum b_n / (a_n^{w_0}···a_{n+d-1}^{w_{d-1}}) 의 인증된 인클로저
    - hypotheses : 성장/가중 가설 검사
    - diagnose   : mu_n, 봉우리, 국소 봉우리 부등식, Mahler 간격
    - construct  : 합이 x 인 수열 구성 + 인증서
    - verify     : 인증서 독립 검증 (여러 파일 병렬)

실행 환경:
    - Python 3.9+
    - 의존성: gmpy2, sympy, mpmath (requirements.txt 참조)
    - 빌드  : PyInstaller 단일 실행 파일 배포

Usage:
    개발 환경  : python main.py construct --w 1 --C 2 --depth 12 --output cert.json
    빌드 결과물: dist/rapidseries verify cert.json
"""

import sys
import os

# PyInstaller 번들 환경에서도 패키지 임포트가 정상 동작하도록
# 실행 파일 디렉토리를 sys.path 최상단에 삽입한다.
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from ui.cli_app import CliApplication


def main():
    """명령 하나를 실행하고 종료 코드로 프로세스를 끝낸다."""
    sys.exit(CliApplication().run(sys.argv[1:]))


if __name__ == "__main__":
    main()
