import mpmath
import pytest
from gmpy2 import mpq, mpz

from models.certificate   import CoveringVerdict
from models.weight_vector import WeightVector
from services.construction import (
    covering_check,
    find_covering_start,
    repair_index,
)
from services.errors      import NoCertificate, PreconditionViolation
from services.schedule    import EnvelopeSchedule, Schedule, schedule_bounds
from services.sequences   import IntegerSequence


def test_schedule_rejects_small_base():
    with pytest.raises(PreconditionViolation):
        Schedule(WeightVector((1,)), 1)


def test_exact_root_schedule():
    sched = Schedule(WeightVector((1,)), 2)
    assert sched.c_tilde.is_exact
    assert schedule_bounds(sched, 1) == (16, 16)
    assert schedule_bounds(sched, 2) == (512, 1024)
    assert schedule_bounds(sched, 3) == (mpz(2) ** 18, mpz(2) ** 20)


def test_schedule_bounds_index_check():
    with pytest.raises(PreconditionViolation):
        schedule_bounds(Schedule(WeightVector((1,)), 2), 0)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_golden_schedule_matches_reference(n):
    sched = Schedule(WeightVector((1, 1)), 2)
    beta = int(mpmath.floor(mpmath.power(2, mpmath.phi ** n + n * n + 1)))
    gamma = int(mpmath.floor(mpmath.power(2, mpmath.phi ** n + n * n + n)))
    assert sched.bounds(n) == (beta, gamma)


def test_rational_base_schedule_matches_reference():
    sched = Schedule(WeightVector((1, 1)), mpq(3, 2))
    for n in range(1, 6):
        beta = int(mpmath.floor(mpmath.power(mpmath.mpf(3) / 2, mpmath.phi ** n + n * n + 1)))
        assert sched.beta(n) == beta


def test_schedule_sequences():
    sched = Schedule(WeightVector((1,)), 2)
    beta = IntegerSequence.of("beta", sched)
    gamma = IntegerSequence.of("gamma", sched)
    assert beta.terms(1, 3) == [16, 512, 2 ** 18]
    assert gamma.term(2) == 1024


def test_cheap_beta_lower_is_below_beta():
    sched = Schedule(WeightVector((1, 1)), 2)
    for m in range(1, 8):
        assert sched.cheap_beta_lower(m) <= sched.beta(m)


def test_decay_ratio_bounds_consecutive_terms():
    sched = Schedule(WeightVector((1, 1)), 2)
    for m in range(2, 7):
        rho = sched.decay_ratio(m)
        assert mpq(sched.gamma(m), sched.beta(m + 1)) <= rho
        assert sched.decay_ratio(m + 1) <= rho


def test_decay_ratio_exact_root():
    sched = Schedule(WeightVector((1,)), 2)
    # g = 2^5 (2 - 1) + 5 + 2
    assert sched.decay_ratio(5) == 1 / (mpq(2) ** 39 - mpq(1, 2 ** 31))


def test_envelope_has_no_decay_certificate():
    env = EnvelopeSchedule(WeightVector((1,)), lambda n: 2 ** n, lambda n: 2 ** n)
    with pytest.raises(NoCertificate):
        env.decay_ratio(1)


# ------------------------------------------------------------------
# 커버링
# ------------------------------------------------------------------

def test_covering_unit_weight():
    sched = Schedule(WeightVector((1,)), 2)
    # N=1: L = 1, R = 4/3
    assert covering_check(sched, 1) is CoveringVerdict.FAIL
    # N=2: L = 8, R = 8/7
    assert covering_check(sched, 2) is CoveringVerdict.PASS


def test_covering_requires_depth():
    with pytest.raises(PreconditionViolation):
        covering_check(Schedule(WeightVector((1, 1)), 2), 1)


def test_covering_fails_for_point_envelope():
    env = EnvelopeSchedule(WeightVector((1,)), lambda n: 2 ** n, lambda n: 2 ** n)
    assert covering_check(env, 3) is CoveringVerdict.FAIL


def test_find_covering_start_golden():
    sched = Schedule(WeightVector((1, 1)), 2)
    M, verdicts = find_covering_start(sched, 2, 8)
    assert verdicts[2] is CoveringVerdict.FAIL
    assert verdicts[3] is CoveringVerdict.FAIL
    assert M == 4
    assert all(verdicts[N] is CoveringVerdict.PASS for N in range(4, 9))


def test_repair_index_without_overlap():
    assert repair_index(Schedule(WeightVector((1,)), 2), 8) == 1


def test_repair_index_with_overlap():
    def gamma(n):
        return 5000 if n == 2 else 10 ** n

    env = EnvelopeSchedule(WeightVector((1,)), lambda n: 10 ** n, gamma)
    assert repair_index(env, 6) == 3
