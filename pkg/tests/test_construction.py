import mpmath
import pytest
from gmpy2 import mpq, mpz

from models.enclosure      import Enclosure, Precision
from models.sequence_spec  import SequenceKind
from models.weight_vector  import WeightVector
from services.construction import (
    TAIL_BETA,
    TAIL_GAMMA,
    attainable_interval,
    attainable_midpoint,
    construct,
    endpoint_sum,
    fixed_sum,
)
from services.diagnostics  import distance_upper, growth_exponent
from services.errors       import CoverageViolated, TargetOutsideRange
from services.schedule     import Schedule
from services.series       import WeightedSeriesInstance, partial_sum


def _reciprocal_sum(values):
    return sum(mpmath.mpf(1) / int(v) for v in values)


def test_fixed_sum_single_weight():
    assert fixed_sum(WeightVector((1,)), [mpz(2), mpz(3), mpz(7)]) == mpq(1, 2) + mpq(1, 3) + mpq(1, 7)


def test_fixed_sum_pair_weight():
    # 1/(2·3) + 1/(3·7)
    assert fixed_sum(WeightVector((1, 1)), [mpz(2), mpz(3), mpz(7)]) == mpq(1, 6) + mpq(1, 21)


def test_fixed_sum_resumes_from_base():
    w = WeightVector((1, 1))
    prefix = [mpz(2), mpz(3), mpz(7), mpz(43)]
    partial = fixed_sum(w, prefix[:3])
    assert fixed_sum(w, prefix, 3, partial) == fixed_sum(w, prefix)


def test_endpoint_sum_exact_part_and_remainder():
    sched = Schedule(WeightVector((1,)), 2)
    exact, remainder = endpoint_sum(sched, [mpz(16)], TAIL_GAMMA, 1)
    # gamma_2 = 2^10, gamma_3 = 2^20 는 정확히, 그 뒤는 beta_4 = 2^33 기준 기하 상한
    assert exact == mpq(1, 2 ** 10) + mpq(1, 2 ** 20)
    assert mpq(1, 2 ** 36) < remainder < mpq(1, 2 ** 32)


def test_endpoint_sum_with_candidate():
    sched = Schedule(WeightVector((1,)), 2)
    exact, _ = endpoint_sum(sched, [mpz(16)], TAIL_BETA, 1, candidate=mpz(600))
    assert exact == mpq(1, 600) + mpq(1, 2 ** 18)


def test_attainable_interval_matches_reference(prec, encloses):
    sched = Schedule(WeightVector((1,)), 2)
    prefix = [mpz(16), mpz(512)]
    lo_end, hi_end = attainable_interval(sched, prefix, prec)
    head = _reciprocal_sum(prefix)
    assert encloses(lo_end, head + _reciprocal_sum(sched.gamma(n) for n in range(3, 9)))
    assert encloses(hi_end, head + _reciprocal_sum(sched.beta(n) for n in range(3, 9)))
    assert lo_end.hi < hi_end.lo


def test_attainable_midpoint_is_simplest_dyadic():
    assert attainable_midpoint(Enclosure.point(mpq(1, 3)), Enclosure.point(mpq(2, 3))) == mpq(1, 2)
    assert attainable_midpoint(Enclosure.point(mpq(5, 8)), Enclosure.point(mpq(7, 8))) == mpq(3, 4)


def test_attainable_midpoint_requires_interior():
    with pytest.raises(TargetOutsideRange):
        attainable_midpoint(Enclosure(mpq(1, 3), mpq(1, 2)), Enclosure(mpq(2, 5), mpq(2, 3)))


# ------------------------------------------------------------------
# 전체 구성
# ------------------------------------------------------------------

def test_unit_construction_terms(unit_construction):
    series, cert = unit_construction
    sched = series.schedule
    assert series.depth == 6
    assert series.M == 2
    assert series.repair_start == 1
    assert series.terms[:2] == [16, 512]
    for n, term in enumerate(series.terms, start=1):
        assert sched.contains(n, term)
    assert all(a < b for a, b in zip(series.terms, series.terms[1:]))
    assert cert.terms == series.terms


def test_unit_construction_ledger(unit_construction):
    _series, cert = unit_construction
    assert [e.N for e in cert.ledger] == [2, 3, 4, 5, 6]
    assert cert.final_bracket.contains(cert.target)
    widths = [e.enclosure.width for e in cert.ledger]
    assert all(a >= b for a, b in zip(widths, widths[1:]))
    assert cert.final_bracket.width < mpq(1, 10 ** 30)


def test_unit_construction_partial_sums_approach_target(unit_construction):
    series, cert = unit_construction
    inst = WeightedSeriesInstance(series.sequence(), series.schedule.w)
    assert 0 < cert.target - partial_sum(inst, 6) < mpq(2, series.schedule.beta(7))


def test_constructed_sequence_view(unit_construction):
    series, _cert = unit_construction
    seq = series.sequence()
    assert seq.spec.kind is SequenceKind.CONSTRUCTED
    assert seq.terms(1, 6) == series.terms


def test_pair_construction(pair_construction):
    series, cert = pair_construction
    assert series.M == 4
    assert cert.M == 4
    assert [e.N for e in cert.ledger] == [4, 5, 6, 7]
    for n, term in enumerate(series.terms, start=1):
        assert series.schedule.contains(n, term)
    assert cert.final_bracket.contains(cert.target)


def test_explicit_target_outside_range(prec):
    with pytest.raises(TargetOutsideRange):
        construct(WeightVector((1,)), 2, 1, 4, prec)


def test_depth_below_covering_start(prec):
    with pytest.raises(CoverageViolated):
        construct(WeightVector((1, 1)), 2, None, 3, prec)


def test_explicit_target_is_kept(prec):
    w = WeightVector((1,))
    sched = Schedule(w, 2)
    lo_end, hi_end = attainable_interval(sched, [mpz(16), mpz(512)], prec)
    x = (lo_end.hi + hi_end.lo) / 2
    _series, cert = construct(w, 2, x, 4, Precision.parse("1e-12"))
    assert cert.target == x
    assert cert.final_bracket.contains(x)


def test_growth_exponent_approaches_base(unit_construction, prec):
    series, _cert = unit_construction
    inst = WeightedSeriesInstance(series.sequence(), series.schedule.w)
    # a_n^{1/2^n} ∈ [2^{1 + (n^2+1)/2^n}, 2^{1 + (n^2+n)/2^n}]
    distances = [distance_upper(growth_exponent(inst, 2, n, prec), 2) for n in (4, 5, 6)]
    assert distances[0] > distances[1] > distances[2]


# ------------------------------------------------------------------
# 깊은 구성과 성장 추세
# ------------------------------------------------------------------

@pytest.mark.parametrize("fixture_name", [
    "deep_unit_construction", "deep_pair_construction", "small_base_construction", "mixed_construction",
])
def test_deep_construction_terms_and_width(request, fixture_name):
    series, cert = request.getfixturevalue(fixture_name)
    sched = series.schedule
    for n in range(cert.repair_start, cert.depth + 1):
        assert sched.contains(n, series.terms[n - 1])
    assert all(a < b for a, b in zip(series.terms, series.terms[1:]))
    assert cert.covering_checked_horizon == cert.depth + sched.w.d
    assert cert.final_bracket.contains(cert.target)
    assert cert.final_bracket.width <= mpq(1, 10 ** 20)


def _growth_distances(series, C, indices, prec):
    inst = WeightedSeriesInstance(series.sequence(), series.schedule.w)
    base = series.schedule.c_tilde
    return [distance_upper(growth_exponent(inst, base, n, prec), C) for n in indices]


def test_growth_trend_small_base(small_base_construction, prec):
    series, _cert = small_base_construction
    # ((n+1)^2 + n + 1) / (n^2 + 1) < c~ 이면 다음 지수가 반드시 작다: n >= 5
    distances = _growth_distances(series, mpq(3, 2), range(5, 16), prec)
    assert all(a > b for a, b in zip(distances, distances[1:]))


def test_growth_trend_mixed_weights(mixed_construction, prec):
    series, _cert = mixed_construction
    # c~ ≈ 1.3445 에서는 n^2 / c~^n 이 n = 6 부근까지 커진다. 같은 판정 기준으로 n >= 9
    distances = _growth_distances(series, 2, range(9, 13), prec)
    assert all(a > b for a, b in zip(distances, distances[1:]))
