import pytest
from pydantic import ValidationError

from quintuple.identities import Mutation, UnsupportedMutation
from quintuple.qseries import PoleError
from quintuple.schema import IdentityId, Metrics, VerificationReport
from quintuple.service import (
    Check,
    InvalidCheck,
    SamplingBudgetExhausted,
    VerificationService,
)


def test_finite_quintuple_small(service: VerificationService):
    report = service.verify_finite_quintuple(0)
    assert report.passed
    assert report.identity == IdentityId.FINITE_QUINTUPLE
    assert report.params == {"m": 0}
    assert report.witness is None


@pytest.mark.slow
def test_finite_quintuple_through_25(service: VerificationService):
    for m in range(26):
        assert service.verify_finite_quintuple(m).passed, m


@pytest.mark.slow
def test_bilateral_grid(service: VerificationService):
    extended = 0
    for m in range(11):
        for n in range(11):
            report = service.verify_bilateral(m, n)
            assert report.passed, (m, n)
            if m > n + 1:
                assert report.params["convention"] == "extended-index"
                extended += 1
    assert extended >= 3


def test_bilateral_flags_extended_index(service: VerificationService):
    report = service.verify_bilateral(4, 1)
    assert report.passed
    assert report.params == {"m": 4, "n": 1, "convention": "extended-index"}
    assert "convention" not in service.verify_bilateral(1, 1).params


@pytest.mark.slow
def test_substitution_relation_grid(service: VerificationService):
    for m in range(7):
        for n in range(7):
            for k in range(-m, n + 1):
                assert service.verify_substitution_relation(m, n, k).passed, (m, n, k)


def test_quintuple_low_order(service: VerificationService):
    report = service.verify_quintuple(1)
    assert report.passed
    assert report.metrics.terms == 4


@pytest.mark.slow
def test_quintuple_order_60(service: VerificationService):
    assert service.verify_quintuple(60).passed


@pytest.mark.slow
def test_product_relation_order_60(service: VerificationService):
    assert service.verify_product_relation(0).passed
    assert service.verify_product_relation(60).passed


@pytest.mark.slow
def test_qdixon_sampled(service: VerificationService):
    for m in range(11):
        report = service.verify_qdixon_sampled(m, 50, 42)
        assert report.passed, m
        assert report.metrics.terms == 50


@pytest.mark.slow
def test_qdixon_specialized(service: VerificationService):
    for m in range(7):
        for power in range(1, 7):
            assert service.verify_qdixon_specialized(m, power, 10, 7).passed, (m, power)


@pytest.mark.slow
def test_dixon_limit_and_term_match(service: VerificationService):
    for m in range(11):
        assert service.verify_dixon_limit(m).passed, m
    for m in range(9):
        for k in range(m + 1):
            assert service.verify_dixon_term_match(m, k).passed, (m, k)


@pytest.mark.parametrize(
    "verify,args,mutation",
    [
        ("verify_finite_quintuple", (2,), Mutation.DROP_LINEAR_FACTOR),
        ("verify_bilateral", (1, 1), Mutation.X_POWER_2K),
        ("verify_quintuple", (5,), Mutation.EXPONENT_2C),
        ("verify_product_relation", (2,), Mutation.DROP_EULER_FACTOR),
    ],
)
def test_negative_controls_fail_with_witness(service: VerificationService, verify, args, mutation):
    report = getattr(service, verify)(*args, mutation)
    assert report.status == "fail"
    assert report.witness is not None
    assert report.witness.lhs != report.witness.rhs
    assert report.params["mutation"] == str(mutation)


def test_quintuple_mutation_witness_is_first_discrepancy(service: VerificationService):
    report = service.verify_quintuple(5, Mutation.EXPONENT_2C)
    # k = -1 moves -q x^-2 down to -x^-2
    assert (report.witness.q_exp, report.witness.x_exp) == (0, -2)
    assert report.witness.lhs == "-1/1"
    assert report.witness.rhs == "0/1"


def test_sampling_budget_exhausted(service: VerificationService, monkeypatch):
    def always_pole(*args):
        raise PoleError("pole")

    monkeypatch.setattr("quintuple.service.qdixon_closed_form", always_pole)
    with pytest.raises(SamplingBudgetExhausted):
        service.verify_qdixon_sampled(2, 3, 0)


def test_sampled_failure_carries_sample_point(service: VerificationService, monkeypatch):
    monkeypatch.setattr("quintuple.service.qdixon_closed_form", lambda *args: 12345)
    report = service.verify_qdixon_sampled(1, 5, 0)
    assert report.status == "fail"
    assert report.witness.rhs == "12345/1"
    assert report.witness.point.q not in (0, 1, -1)


def test_check_build_validates_parameters():
    check = Check.build(IdentityId.BILATERAL, None, m=1, n=2, order=30)
    assert check.params == {"m": 1, "n": 2}
    with pytest.raises(InvalidCheck, match="needs parameter 'n'"):
        Check.build(IdentityId.BILATERAL, None, m=1)
    with pytest.raises(UnsupportedMutation):
        Check.build(IdentityId.DIXON_LIMIT, Mutation.X_POWER_2K, m=1)


def test_run_all_sorts_and_parallel_matches_serial(service: VerificationService):
    checks = [
        Check.build(IdentityId.DIXON_LIMIT, m=m) for m in (3, 0, 2, 1)
    ] + [Check.build(IdentityId.FINITE_QUINTUPLE, m=1)]
    serial = service.run_all(checks)
    assert [r.params["m"] for r in serial if r.identity == IdentityId.DIXON_LIMIT] == [0, 1, 2, 3]
    parallel = service.run_all(checks, jobs=2)
    assert [r.model_dump_json() for r in parallel] == [r.model_dump_json() for r in serial]


def test_reports_are_reproducible_without_timing(service: VerificationService):
    first = service.verify_qdixon_sampled(3, 10, 42).model_dump_json()
    second = service.verify_qdixon_sampled(3, 10, 42).model_dump_json()
    assert first == second
    assert '"elapsed_ms":0.0' in first


def test_failed_report_requires_witness():
    with pytest.raises(ValidationError):
        VerificationReport(
            identity=IdentityId.FINITE_QUINTUPLE,
            params={"m": 1},
            status="fail",
            metrics=Metrics(terms=0, max_q_deg=0, max_x_deg=0, elapsed_ms=0),
        )


def test_check_build_validates_summand_index():
    with pytest.raises(InvalidCheck, match="-m <= k <= n"):
        Check.build(IdentityId.SUBSTITUTION_RELATION, m=1, n=0, k=5)
    with pytest.raises(InvalidCheck, match="0 <= k <= m"):
        Check.build(IdentityId.DIXON_TERM_MATCH, m=2, k=9)
    assert Check.build(IdentityId.SUBSTITUTION_RELATION, m=1, n=0, k=-1).params["k"] == -1
