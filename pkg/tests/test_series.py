import pytest
from gmpy2 import mpq, mpz

from models.enclosure     import Precision
from models.sequence_spec import SequenceKind, SequenceSpec
from models.weight_vector import WeightVector
from services.errors      import (
    IndexBeyondHorizon,
    InvalidSequence,
    NoCertificate,
    PreconditionViolation,
)
from services.sequences   import IntegerSequence
from services.series      import (
    WeightedSeriesInstance,
    check_hypotheses,
    eval_series,
    eval_series_detail,
    load_terms,
    partial_sum,
    sequence_from_descriptor,
    sylvester,
    tail_bound,
)


def _instance(descriptor, w, b="one"):
    return WeightedSeriesInstance(IntegerSequence.of(descriptor), WeightVector(w), IntegerSequence.of(b))


def test_sylvester_terms():
    assert [sylvester(n) for n in range(1, 6)] == [2, 3, 7, 43, 1807]


@pytest.mark.parametrize(
    "descriptor, first_terms",
    [
        ("geometric:3", [3, 9, 27, 81]),
        ("poly:2", [1, 4, 9, 16]),
        ("tower:2:2", [4, 16, 256, 65536]),
        ("tower:2:3/2", [2, 4, 8, 32]),
    ]
)
def test_descriptor_terms(descriptor, first_terms):
    assert IntegerSequence.of(descriptor).terms(1, 4) == first_terms


def test_descriptor_round_trips_text():
    assert SequenceSpec.parse("tower:2:3").descriptor == "tower:2:3"


def test_unknown_descriptor():
    with pytest.raises(InvalidSequence):
        sequence_from_descriptor("fibonacci")


def test_schedule_sequence_requires_schedule():
    with pytest.raises(PreconditionViolation):
        IntegerSequence.of("beta")


def test_explicit_sequence_horizon():
    seq = IntegerSequence(SequenceSpec.explicit([2, 3, 7]))
    assert seq.term(3) == 7
    with pytest.raises(IndexBeyondHorizon):
        seq.term(4)
    with pytest.raises(NoCertificate):
        seq.decay_ratio(1)


def test_x_n_product():
    inst = _instance("geometric:2", (1, 0, 2, 1))
    # x_4 = a_1 · a_3^2 · a_4
    assert inst.x(4) == mpz(2) * mpz(8) ** 2 * mpz(16)
    with pytest.raises(IndexBeyondHorizon):
        inst.x(3)


def test_partial_sum_is_exact():
    inst = _instance("geometric:2", (1, 1))
    assert partial_sum(inst, 3) == mpq(1, 8) + mpq(1, 32)


def test_tail_bound_geometric_is_sharp():
    inst = _instance("geometric:2", (1,))
    assert tail_bound(inst, 5) == mpq(1, 32)


def test_eval_geometric_pair(prec):
    enc = eval_series(_instance("geometric:2", (1, 1)), prec)
    assert enc.contains(mpq(1, 6))
    assert enc.width <= prec.target_width


def test_eval_sylvester_sums_to_one(prec):
    detail = eval_series_detail(_instance("sylvester", (1,)), prec)
    assert detail.enclosure.contains(1)
    assert detail.enclosure.width <= prec.target_width
    assert detail.partial < 1


def test_eval_with_numerator_sequence(prec):
    # b_n = n, a_n = 2^n, w=(2):  sum n / 4^n = 4/9
    inst = _instance("geometric:2", (2,), b="poly:1")
    enc = eval_series(inst, prec)
    assert enc.contains(mpq(4, 9))


def test_eval_without_ratio_certificate(prec):
    with pytest.raises(NoCertificate):
        eval_series(_instance("poly:3", (1,)), prec)


def test_hypotheses_geometric():
    report = check_hypotheses(_instance("geometric:2", (1,)), mpq(1, 2), mpq(1), 10)
    # 2^3 < 3^2
    assert report.violations == [3]
    assert report.growth_violations == [3]
    assert report.weight_violations == []
    assert not report.ok


def test_hypotheses_sylvester_pass():
    report = check_hypotheses(_instance("sylvester", (1, 1)), mpq(1, 3), mpq(1, 2), 12)
    assert report.ok


def test_hypotheses_hold_for_linear_pair_weights():
    # n (n+1) >= n^{3/2} 는 모든 n 에서 성립
    report = check_hypotheses(_instance("poly:1", (1, 1)), mpq(1, 3), mpq(1, 2), 10 ** 4)
    assert report.ok
    assert report.horizon == 10 ** 4


def test_hypotheses_fail_for_linear_single_weight():
    report = check_hypotheses(_instance("poly:1", (1,)), mpq(1, 3), mpq(1, 2), 100)
    assert report.violations == list(range(2, 101))
    assert report.growth_violations == report.violations
    assert report.weight_violations == []


def test_hypotheses_require_ordered_exponents():
    with pytest.raises(PreconditionViolation):
        check_hypotheses(_instance("sylvester", (1,)), mpq(1), mpq(1, 2), 5)


def test_load_terms_skips_comments(tmp_path):
    path = tmp_path / "terms.txt"
    path.write_text("# 첫 항\n2\n3\n\n7\n43\n", encoding="utf-8")
    assert load_terms(str(path)) == [2, 3, 7, 43]


def test_load_terms_cp949(tmp_path):
    path = tmp_path / "terms.txt"
    path.write_bytes("# 실베스터 수열\n2\n3\n7\n".encode("cp949"))
    seq = sequence_from_descriptor(f"file:{path}")
    assert seq.spec.kind is SequenceKind.EXPLICIT
    assert seq.terms(1, 3) == [2, 3, 7]


@pytest.mark.parametrize("content", ["2\nx\n", "2\n0\n", "2\n-5\n"])
def test_load_terms_rejects(tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(InvalidSequence):
        load_terms(str(path))


def test_eval_geometric_single_is_one():
    enc = eval_series(_instance("geometric:2", (1,)), Precision.parse("1e-30"))
    assert enc.contains(1)
    assert enc.width <= mpq(1, 10 ** 30)


def test_eval_sylvester_to_hundred_digits():
    detail = eval_series_detail(_instance("sylvester", (1,)), Precision.parse("1e-100"))
    assert detail.enclosure.contains(1)
    assert detail.enclosure.width <= mpq(1, 10 ** 100)
    assert detail.N <= 10
