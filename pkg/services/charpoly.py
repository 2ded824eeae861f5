"""
특성 다항식 생성 및 양의 실근 분리 서비스.

가중치 벡터 w 로부터 다음 다항식을 만든다.
    P_w(x)  = (x-1) sum_j w_j x^j - W x^{d-1}     (유일한 양의 근 c_w)
    P~_w(x) = (x-1) sum_j w_j x^j -   x^{d-1}     (최대 양의 근 c~_w)
    Q(x)    = w_{d-1} x^{d-1} - sum_{j<=d-2} (W - w_j) x^j,   P_w = (x-1) Q - W

근 분리 절차:
    1. 초기 구간 [1, B], B = ceil(1 + max|c_j| / lead) (Cauchy 형 상한)
    2. Sturm 열(sympy.sturm)로 (a, b] 안의 서로 다른 근의 개수를 센다
    3. 이진 유리수 이분법. 목표 근이 단독으로 분리되면 부호 이분법으로 전환한다
    4. 중점이 정확한 근이면 점 인클로저 [m, m] 을 반환한다

사용처:
    - CliApplication (roots 명령)
    - services.schedule : c~_w 인클로저와 정제
    - services.diagnostics : mu_n 의 c_w
"""

from functools import lru_cache, reduce
from typing    import List, Optional, Tuple

import gmpy2
import sympy
from gmpy2 import mpq, mpz

import config
from models.enclosure     import Precision, RationalLike, to_mpq
from models.polynomial    import IntPolynomial, RootEnclosure, RootKind
from models.weight_vector import WeightVector
from services.errors      import IsolationFailed, PrecisionCapExceeded


_X = sympy.Symbol("x")


# ------------------------------------------------------------------
# 다항식 생성
# ------------------------------------------------------------------

def _times_x_minus_one(w: WeightVector) -> List[int]:
    # (x-1) sum_j w_j x^j 의 계수: x^k -> w_{k-1} - w_k
    ws = list(w.w) + [0]
    coeffs = [-ws[0]]
    for k in range(1, w.d + 1):
        coeffs.append(ws[k - 1] - ws[k])
    return coeffs


def build_pw(w: WeightVector) -> IntPolynomial:
    """
    P_w(x) = (x-1) sum_j w_j x^j - W x^{d-1} 를 전개한다.

    @param w  가중치 벡터
    @returns  차수 d, 최고차 계수 w_{d-1} 인 정수 다항식

    @example
        str(build_pw(WeightVector((1, 0, 2, 1))))   # -> "x^4 - x^3 - 2*x^2 + x - 1"
    """
    coeffs = _times_x_minus_one(w)
    coeffs[w.d - 1] -= w.W
    return IntPolynomial.from_coeffs(coeffs)


def build_pw_tilde(w: WeightVector) -> IntPolynomial:
    """
    P~_w(x) = (x-1) sum_j w_j x^j - x^{d-1} 를 전개한다. W = 1 이면 P_w 와 같다.

    @example
        str(build_pw_tilde(WeightVector((1, 0, 2, 1))))   # -> "x^4 - 2*x^2 + x - 1"
    """
    coeffs = _times_x_minus_one(w)
    coeffs[w.d - 1] -= 1
    return IntPolynomial.from_coeffs(coeffs)


def build_q(w: WeightVector) -> IntPolynomial:
    """P_w = (x-1) Q - W 를 만족하는 보조 다항식 Q. w_j < W 인 j 가 있으면 계수 부호 변화는 정확히 1회이다."""
    coeffs = [-(w.W - w.w[j]) for j in range(w.d - 1)]
    coeffs.append(w.w[-1])
    return IntPolynomial.from_coeffs(coeffs)


def psi_polynomial(d: int) -> IntPolynomial:
    """x^d - x^{d-1} - 1 (모든 가중치가 1 인 경우의 P~)."""
    return build_pw_tilde(WeightVector.ones(d))


def eval_at(p: IntPolynomial, x: RationalLike) -> mpq:
    """다항식의 정확한 유리수 값."""
    return p.eval_at(x)


def sign_variations(p: IntPolynomial) -> int:
    """계수열의 부호 변화 횟수 (Descartes 부호 규칙의 상한)."""
    signs = [1 if c > 0 else -1 for c in p.coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_at_least_two(w: WeightVector) -> bool:
    """
    c_w >= 2 여부. sum_j 2^j w_j <= 2^{d-1} W 와 동치이며 P_w(2) <= 0 과도 같다.

    @example
        root_at_least_two(WeightVector((1,)))      # -> True  (c_w = 2)
        root_at_least_two(WeightVector((1, 1)))    # -> False (c_w = 1.618...)
    """
    lhs = sum(mpz(2) ** j * w.w[j] for j in range(w.d))
    return lhs <= mpz(2) ** (w.d - 1) * w.W


def cauchy_bound(p: IntPolynomial) -> mpz:
    """모든 실근 r 에 대해 r < B 를 만족하는 정수 B = ceil(1 + max|c_j| / |lead|)."""
    lead = abs(p.lead)
    top = max((abs(c) for c in p.coeffs[:-1]), default=0)
    return mpz(1) + (mpz(top) + lead - 1) // lead


# ------------------------------------------------------------------
# Sturm 열 근 개수
# ------------------------------------------------------------------

@lru_cache(maxsize=256)
def _sturm_chain(coeffs: Tuple[int, ...]) -> Tuple[IntPolynomial, ...]:
    """
    sympy.sturm 으로 Sturm 열을 만들고, 각 다항식의 분모를 양의 정수배로 지운다.

    부호만 쓰므로 양의 상수배는 결과에 영향이 없다.
    """
    poly = sympy.Poly(list(reversed(coeffs)), _X, domain="QQ")
    chain = []
    for member in sympy.sturm(poly):
        rationals = [sympy.Rational(c) for c in member.all_coeffs()]
        scale = reduce(gmpy2.lcm, [mpz(int(r.q)) for r in rationals], mpz(1))
        ints = [int(r.p) * (int(scale) // int(r.q)) for r in rationals]
        chain.append(IntPolynomial.from_coeffs(list(reversed(ints))))
    return tuple(chain)


def _sign_changes_at(chain: Tuple[IntPolynomial, ...], x: mpq) -> int:
    signs = [s for s in (member.sign_at(x) for member in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: IntPolynomial, a: RationalLike, b: RationalLike) -> int:
    """
    구간 (a, b] 안의 서로 다른 실근의 개수 (Sturm 정리: V(a) - V(b)).

    @param p  정수 다항식
    @param a  왼쪽 끝 (미포함)
    @param b  오른쪽 끝 (포함), a < b
    @returns  근의 개수

    @example
        count_roots(build_pw(WeightVector((1, 1))), 1, 2)   # -> 1
    """
    a, b = to_mpq(a), to_mpq(b)
    if a >= b:
        return 0
    chain = _sturm_chain(p.coeffs)
    return _sign_changes_at(chain, a) - _sign_changes_at(chain, b)


# ------------------------------------------------------------------
# 근 분리
# ------------------------------------------------------------------

def isolate_root(
    p:         IntPolynomial,
    kind:      RootKind,
    precision: Precision,
    max_steps: Optional[int] = None,
) -> RootEnclosure:
    """
    요청한 양의 실근을 폭 <= precision.target_width 의 인클로저로 분리한다.

    @param p          최고차 계수 양수, p(1) < 0 인 정수 다항식
    @param kind       UNIQUE_POSITIVE 또는 LARGEST_POSITIVE
    @param precision  목표 폭
    @param max_steps  이분법 단계 예산 (기본값: config.ROOT_BISECTION_BUDGET)
    @returns          RootEnclosure
    @throws           IsolationFailed      지원 범위 밖 다항식 (근 개수 인증 실패)
    @throws           PrecisionCapExceeded 예산 소진

    @example
        r = isolate_root(build_pw(WeightVector((1, 1))), RootKind.UNIQUE_POSITIVE,
                         Precision.parse("1e-12"))
        # r.lo <= 1.6180339887... <= r.hi
    """
    kind = RootKind(kind)
    if p.degree < 1 or p.lead <= 0:
        raise IsolationFailed(f"최고차 계수가 양수인 다항식이어야 합니다: {p}")
    if p.sign_at(1) >= 0:
        raise IsolationFailed(f"x = 1 에서 음수여야 합니다: {p}")

    bound = mpq(cauchy_bound(p))
    if kind is RootKind.UNIQUE_POSITIVE:
        positive = count_roots(p, 0, bound)
        if positive != 1:
            raise IsolationFailed(f"양의 근이 {positive}개입니다 (유일성 인증 실패): {p}")
        above_one = 1
    else:
        above_one = count_roots(p, 1, bound)
        if above_one < 1:
            raise IsolationFailed(f"(1, {bound}] 에 근이 없습니다: {p}")

    budget = config.ROOT_BISECTION_BUDGET if max_steps is None else max_steps
    return _bisect(p, kind, mpq(1), bound, above_one == 1, precision.target_width, budget)


def refine_root(
    root:      RootEnclosure,
    width:     RationalLike,
    max_steps: Optional[int] = None,
) -> RootEnclosure:
    """
    이미 분리된 근 인클로저를 폭 <= width 까지 좁힌다. 결과는 항상 입력 안에 있다.

    @param root   isolate_root() 결과
    @param width  목표 폭
    @returns      중첩된 RootEnclosure
    @throws       PrecisionCapExceeded 예산 소진
    """
    width = to_mpq(width)
    if root.is_exact or root.width <= width:
        return root
    budget = config.ROOT_BISECTION_BUDGET if max_steps is None else max_steps
    return _bisect(root.poly, root.kind, root.lo, root.hi, True, width, budget)


def psi(d: int, precision: Precision) -> RootEnclosure:
    """
    x^d = x^{d-1} + 1 의 유일한 양의 해. d = 1 이면 정확히 2, d = 2 이면 황금비.

    @param d          차수 (>= 1)
    @param precision  목표 폭
    """
    return isolate_root(psi_polynomial(d), RootKind.LARGEST_POSITIVE, precision)


def _bisect(
    p:        IntPolynomial,
    kind:     RootKind,
    lo:       mpq,
    hi:       mpq,
    isolated: bool,
    target:   mpq,
    budget:   int,
) -> RootEnclosure:
    # 불변식: 목표 근은 (lo, hi] 안에 있고, hi 위로는 근이 없다 (LARGEST)
    sign_mode = isolated and p.sign_at(lo) < 0 and p.sign_at(hi) > 0
    steps = 0

    while not (lo > 1 and hi - lo <= target):
        if steps >= budget:
            raise PrecisionCapExceeded(
                f"근 분리 예산 {budget}단계 소진 (현재 폭 {hi - lo})"
            )
        steps += 1
        mid = (lo + hi) / 2
        s = p.sign_at(mid)

        if sign_mode:
            if s == 0:
                return RootEnclosure(mid, mid, p, kind)
            if s < 0:
                lo = mid
            else:
                hi = mid
            continue

        above = count_roots(p, mid, hi)
        if above >= 1:
            lo = mid
            if above == 1:
                isolated  = True
                sign_mode = p.sign_at(lo) < 0 and p.sign_at(hi) > 0
        elif s == 0:
            return RootEnclosure(mid, mid, p, kind)
        else:
            hi = mid

    if p.sign_at(lo) > 0 or p.sign_at(hi) < 0:
        raise IsolationFailed(f"부호 변화로 근을 인증할 수 없습니다 (중근 의심): {p}")
    return RootEnclosure(lo, hi, p, kind)
