"""
공용 pytest 픽스처.

구성 결과는 비용이 크므로 세션 범위로 한 번만 만든다.
"""

import os
import sys

import mpmath
import pytest
from gmpy2 import mpq

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# 기준값은 인클로저 폭보다 충분히 정밀해야 한다
mpmath.mp.dps = 80

from models.enclosure       import Enclosure, Precision
from models.weight_vector   import WeightVector
from services.construction  import construct


@pytest.fixture
def prec():
    return Precision.parse("1e-12")


@pytest.fixture
def encloses():
    """Enclosure 가 mpmath 기준값을 포함하는지 판정하는 함수."""
    def check(enc: Enclosure, value) -> bool:
        lo = mpmath.mpf(int(enc.lo.numerator)) / int(enc.lo.denominator)
        hi = mpmath.mpf(int(enc.hi.numerator)) / int(enc.hi.denominator)
        return lo <= value <= hi
    return check


@pytest.fixture(scope="session")
def unit_construction():
    """w=(1), C=2, 깊이 6 (c~ = 2 정확 경로)."""
    return construct(WeightVector((1,)), 2, None, 6, Precision.parse("1e-12"))


@pytest.fixture(scope="session")
def pair_construction():
    """w=(1,1), C=2, 깊이 7 (c~ = 황금비, 근 정제 경로)."""
    return construct(WeightVector((1, 1)), 2, None, 7, Precision.parse("1e-12"))


@pytest.fixture(scope="session")
def deep_unit_construction():
    """w=(1), C=2, 깊이 15."""
    return construct(WeightVector((1,)), 2, None, 15, Precision.parse("1e-20"))


@pytest.fixture(scope="session")
def deep_pair_construction():
    """w=(1,1), C=2, 깊이 15."""
    return construct(WeightVector((1, 1)), 2, None, 15, Precision.parse("1e-20"))


@pytest.fixture(scope="session")
def small_base_construction():
    """w=(1,1), C=3/2, 깊이 15."""
    return construct(WeightVector((1, 1)), mpq(3, 2), None, 15, Precision.parse("1e-20"))


@pytest.fixture(scope="session")
def mixed_construction():
    """w=(1,0,2,1), C=2, 깊이 12 (P_w 와 P~_w 의 근이 다름)."""
    return construct(WeightVector((1, 0, 2, 1)), 2, None, 12, Precision.parse("1e-20"))
