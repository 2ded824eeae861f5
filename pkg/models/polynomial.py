"""
정수 계수 다항식과 근 인클로저 데이터 모델.

IntPolynomial 은 P_w, P~_w, x^d - x^{d-1} - 1 및 보조 다항식 Q(x) 를 담는다.
RootEnclosure 는 분리된 양의 실근 하나를 정확한 이진 유리수 끝점으로 감싼다.

사용처:
    - services.charpoly  : 다항식 생성, 근 분리/정제
    - services.schedule  : c~_w 인클로저 정제
    - services.diagnostics: mu_n = ln a_n / c^n 의 c
"""

from dataclasses import dataclass
from enum        import Enum
from typing      import List, Sequence, Tuple

from gmpy2 import mpq, mpz

from models.enclosure import Enclosure, format_rational, RationalLike, to_mpq


class RootKind(str, Enum):
    """분리 대상 근의 종류."""
    UNIQUE_POSITIVE  = "unique-positive"
    LARGEST_POSITIVE = "largest-positive"


@dataclass(frozen=True)
class IntPolynomial:
    """
    정수 계수 다항식. coeffs[j] 는 x^j 의 계수이다.

    생성 시 최고차의 0 계수를 제거한다.

    @param coeffs  계수 튜플 (상수항부터)

    @example
        p = IntPolynomial((-1, -1, 1))    # x^2 - x - 1
        p.degree                          # -> 2
        str(p)                            # -> "x^2 - x - 1"
    """
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "IntPolynomial":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def eval_at(self, x: RationalLike) -> mpq:
        """Horner 법에 의한 정확한 값."""
        x = to_mpq(x)
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: RationalLike) -> int:
        """
        p(x) 의 부호 (-1, 0, 1).

        x = a/b (b > 0) 에서 b^deg · p(a/b) 를 정수로 계산하므로 mpq 정규화가 없다.
        """
        x = to_mpq(x)
        a, b = mpz(x.numerator), mpz(x.denominator)
        n = len(self.coeffs) - 1
        acc = mpz(0)
        bpow = mpz(1)
        # acc = sum_j c_j a^j b^(n-j)
        for j in range(n, -1, -1):
            acc = acc * a + self.coeffs[j] * bpow
            bpow *= b
        return (acc > 0) - (acc < 0)

    def to_list(self) -> List[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        terms = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c == 0:
                continue
            mag = abs(c)
            if j == 0:
                body = str(mag)
            else:
                power = "x" if j == 1 else f"x^{j}"
                body = power if mag == 1 else f"{mag}*{power}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def to_dict(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "text": str(self)}


@dataclass(frozen=True)
class RootEnclosure:
    """
    다항식의 양의 실근 하나에 대한 인증된 인클로저.

    불변식:
        - 1 < lo <= hi
        - lo 와 hi 에서의 부호가 반대이거나 hi 가 근이다; 또는 lo == hi 가 정확한 유리근
        - LARGEST_POSITIVE 이면 (hi, inf) 에서 다항식이 양수

    @param lo    하한 (이진 유리수)
    @param hi    상한 (이진 유리수)
    @param poly  분리된 다항식
    @param kind  근의 종류
    """
    lo:   mpq
    hi:   mpq
    poly: IntPolynomial
    kind: RootKind

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    @property
    def enclosure(self) -> Enclosure:
        return Enclosure(self.lo, self.hi)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def to_dict(self) -> dict:
        return {
            "poly":  self.poly.to_dict(),
            "kind":  self.kind.value,
            "lo":    format_rational(self.lo),
            "hi":    format_rational(self.hi),
            "width": format_rational(self.width),
        }
