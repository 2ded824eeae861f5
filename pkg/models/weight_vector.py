"""
가중치 벡터 데이터 모델.

급수의 분모 a_n^{w_0} a_{n+1}^{w_1} ··· a_{n+d-1}^{w_{d-1}} 를 결정하는
음이 아닌 정수 튜플 w = (w_0, ..., w_{d-1}) 을 캡슐화한다.
모든 특성 다항식, 급수 항, 스케줄 커버링 검사가 이 값을 기준으로 동작한다.

사용처:
    - charpoly     : build_pw() / build_pw_tilde() 계수 생성
    - series       : x_n = a_{n-d+1}^{w_0} ··· a_n^{w_{d-1}} 계산
    - construct    : 커버링 부등식 및 혼합 꼬리합
    - Certificate  : "w" 필드 직렬화
"""

from dataclasses import dataclass
from typing      import List, Tuple


@dataclass(frozen=True)
class WeightVector:
    """
    가중치 튜플 w 와 파생값 d, W.

    불변 값 객체이며 생성 시점에 불변식을 검사한다.
        - d >= 1, 모든 w_j >= 0, w_{d-1} >= 1
        - W = max_j w_j >= 1

    @param w  가중치 튜플 (인덱스 j = a_{n+j} 의 지수)
    @throws   ValueError 불변식 위반 시

    @example
        wv = WeightVector((1, 0, 2, 1))
        wv.d   # -> 4
        wv.W   # -> 2
    """
    w: Tuple[int, ...]

    def __post_init__(self):
        if len(self.w) == 0:
            raise ValueError("가중치 벡터가 비어 있습니다")
        if any(int(v) != v or v < 0 for v in self.w):
            raise ValueError(f"가중치는 음이 아닌 정수여야 합니다: {self.w}")
        if self.w[-1] < 1:
            raise ValueError(f"마지막 가중치 w_(d-1) 은 1 이상이어야 합니다: {self.w}")
        object.__setattr__(self, "w", tuple(int(v) for v in self.w))

    @property
    def d(self) -> int:
        return len(self.w)

    @property
    def W(self) -> int:
        return max(self.w)

    @property
    def is_binary(self) -> bool:
        """모든 w_j 가 {0, 1} 에 속하면 True (이때 P_w 와 P~_w 가 일치한다)."""
        return all(v in (0, 1) for v in self.w)

    @property
    def text(self) -> str:
        return ",".join(str(v) for v in self.w)

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        """
        쉼표 구분 문자열을 WeightVector 로 변환한다.

        @param text  "1,0,2,1" 형식
        @returns     WeightVector
        @throws      ValueError 정수가 아닌 항목이 있을 경우

        @example
            WeightVector.parse("1,1").W   # -> 1
        """
        parts = [p.strip() for p in str(text).split(",") if p.strip()]
        try:
            values = tuple(int(p) for p in parts)
        except ValueError:
            raise ValueError(f"가중치 벡터를 해석할 수 없습니다: {text!r}")
        return cls(values)

    @classmethod
    def ones(cls, d: int) -> "WeightVector":
        if d < 1:
            raise ValueError(f"d 는 1 이상이어야 합니다: {d}")
        return cls((1,) * d)

    def to_list(self) -> List[int]:
        return list(self.w)
