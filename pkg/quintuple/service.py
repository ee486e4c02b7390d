import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from quintuple.algebra import (
    BivariateLaurent,
    RationalFunction,
    TruncatedSeries,
    first_discrepancy,
    format_rational,
)
from quintuple.identities import (
    Mutation,
    UnsupportedMutation,
    bilateral_sum,
    bilateral_uses_extended_index,
    dixon_limit_closed_form,
    dixon_limit_sum,
    dixon_term_match_sides,
    finite_quintuple_sum,
    product_relation_sides,
    qdixon_closed_form,
    qdixon_series,
    quintuple_lhs_series,
    quintuple_rhs_series,
    substitution_relation,
    substitution_uses_extended_index,
)
from quintuple.qseries import PoleError, ProductSpec, bracket_inf, qhyper_eval
from quintuple.schema import (
    SUPPORTED_MUTATIONS,
    CoefficientRecord,
    CoefficientWitness,
    IdentityId,
    Metrics,
    SamplePoint,
    SampleWitness,
    VerificationReport,
)

logger = logging.getLogger(__name__)

SAMPLE_NUMERATORS = [v for v in range(-9, 10) if v != 0]
SAMPLE_DENOMINATORS = range(2, 10)
RESAMPLE_BUDGET = 100

# parameters each identity reads, in report order
CHECK_PARAMS: dict[IdentityId, tuple[str, ...]] = {
    IdentityId.FINITE_QUINTUPLE: ("m",),
    IdentityId.BILATERAL: ("m", "n"),
    IdentityId.SUBSTITUTION_RELATION: ("m", "n", "k"),
    IdentityId.QUINTUPLE_SERIES: ("order",),
    IdentityId.PRODUCT_RELATION: ("order",),
    IdentityId.QDIXON_SAMPLED: ("m", "trials", "seed"),
    IdentityId.QDIXON_SPECIALIZED: ("m", "power", "trials", "seed"),
    IdentityId.DIXON_LIMIT: ("m",),
    IdentityId.DIXON_TERM_MATCH: ("m", "k"),
}


class VerificationServiceError(Exception):
    pass


class SamplingBudgetExhausted(VerificationServiceError):
    pass


class InvalidCheck(VerificationServiceError):
    pass


@dataclass(frozen=True)
class Check:
    identity: IdentityId
    params: dict[str, int] = field(hash=False)
    mutation: Optional[Mutation] = None

    @classmethod
    def build(
        cls, identity: IdentityId, mutation: Optional[Mutation] = None, **values: Optional[int]
    ) -> "Check":
        params = {}
        for name in CHECK_PARAMS[identity]:
            if values.get(name) is None:
                raise InvalidCheck(f"{identity} needs parameter '{name}'")
            params[name] = values[name]
        _check_summand_index(identity, params)
        if mutation is not None and mutation not in SUPPORTED_MUTATIONS.get(
            identity, frozenset()
        ):
            raise UnsupportedMutation(f"Mutation '{mutation}' does not apply to {identity}")
        return cls(identity, params, mutation)

    def sort_key(self) -> tuple:
        return (str(self.identity), tuple(self.params.values()), str(self.mutation or ""))


def _check_summand_index(identity: IdentityId, params: dict[str, int]):
    match identity:
        case IdentityId.SUBSTITUTION_RELATION:
            m, n, k = params["m"], params["n"], params["k"]
            if not -m <= k <= n:
                raise InvalidCheck(f"{identity} needs -m <= k <= n, got m={m}, n={n}, k={k}")
        case IdentityId.DIXON_TERM_MATCH:
            m, k = params["m"], params["k"]
            if not 0 <= k <= m:
                raise InvalidCheck(f"{identity} needs 0 <= k <= m, got m={m}, k={k}")


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.choice(SAMPLE_NUMERATORS), rng.choice(SAMPLE_DENOMINATORS))


def _coefficient_witness(
    lhs: BivariateLaurent, rhs: BivariateLaurent
) -> Optional[CoefficientWitness]:
    found = first_discrepancy(lhs, rhs)
    if found is None:
        return None
    (q_exp, x_exp), left, right = found
    return CoefficientWitness(
        q_exp=q_exp, x_exp=x_exp, lhs=format_rational(left), rhs=format_rational(right)
    )


class VerificationService:
    def __init__(self, timing: bool = True):
        self.timing = timing

    def _report(
        self,
        identity: IdentityId,
        params: dict,
        witness,
        started: float,
        terms: int,
        max_q_deg: int,
        max_x_deg: int,
        mutation: Optional[Mutation] = None,
    ) -> VerificationReport:
        if mutation is not None:
            params = {**params, "mutation": str(mutation)}
        elapsed_ms = (time.perf_counter() - started) * 1000 if self.timing else 0.0
        report = VerificationReport(
            identity=identity,
            params=params,
            status="pass" if witness is None else "fail",
            witness=witness,
            metrics=Metrics(
                terms=terms,
                max_q_deg=max_q_deg,
                max_x_deg=max_x_deg,
                elapsed_ms=round(elapsed_ms, 3),
            ),
        )
        logger.debug("%s %s %s in %.1f ms", identity, params, report.status, elapsed_ms)
        if not report.passed:
            logger.warning("%s failed for %s: %s", identity, params, witness)
        return report

    def _compare_rational(
        self,
        identity: IdentityId,
        params: dict,
        lhs: RationalFunction,
        rhs: RationalFunction,
        started: float,
        mutation: Optional[Mutation] = None,
    ) -> VerificationReport:
        left, right = lhs.cross_products(rhs)
        return self._report(
            identity,
            params,
            _coefficient_witness(left, right),
            started,
            terms=len(left),
            max_q_deg=left.max_q_deg(),
            max_x_deg=left.max_x_deg(),
            mutation=mutation,
        )

    def _compare_series(
        self,
        identity: IdentityId,
        params: dict,
        lhs: TruncatedSeries,
        rhs: TruncatedSeries,
        started: float,
        mutation: Optional[Mutation] = None,
    ) -> VerificationReport:
        return self._report(
            identity,
            params,
            _coefficient_witness(lhs.poly, rhs.poly),
            started,
            terms=len(lhs),
            max_q_deg=lhs.poly.max_q_deg(),
            max_x_deg=lhs.poly.max_x_deg(),
            mutation=mutation,
        )

    def verify_finite_quintuple(
        self, m: int, mutation: Optional[Mutation] = None
    ) -> VerificationReport:
        started = time.perf_counter()
        total = finite_quintuple_sum(m, mutation)
        return self._compare_rational(
            IdentityId.FINITE_QUINTUPLE, {"m": m}, total, RationalFunction(1), started, mutation
        )

    def verify_bilateral(
        self, m: int, n: int, mutation: Optional[Mutation] = None
    ) -> VerificationReport:
        started = time.perf_counter()
        params: dict = {"m": m, "n": n}
        if bilateral_uses_extended_index(m, n):
            params["convention"] = "extended-index"
        total = bilateral_sum(m, n, mutation)
        return self._compare_rational(
            IdentityId.BILATERAL, params, total, RationalFunction(1), started, mutation
        )

    def verify_substitution_relation(self, m: int, n: int, k: int) -> VerificationReport:
        started = time.perf_counter()
        params: dict = {"m": m, "n": n, "k": k}
        if substitution_uses_extended_index(m, n, k):
            params["convention"] = "extended-index"
        before, split, final = substitution_relation(m, n, k)
        report = self._compare_rational(
            IdentityId.SUBSTITUTION_RELATION, params, before, split, started
        )
        if not report.passed:
            return report
        return self._compare_rational(
            IdentityId.SUBSTITUTION_RELATION, params, split, final, started
        )

    def verify_quintuple(
        self, order: int, mutation: Optional[Mutation] = None
    ) -> VerificationReport:
        started = time.perf_counter()
        lhs = quintuple_lhs_series(order, mutation)
        rhs = quintuple_rhs_series(order)
        return self._compare_series(
            IdentityId.QUINTUPLE_SERIES, {"order": order}, lhs, rhs, started, mutation
        )

    def verify_product_relation(
        self, order: int, mutation: Optional[Mutation] = None
    ) -> VerificationReport:
        started = time.perf_counter()
        lhs, rhs = product_relation_sides(order, mutation)
        return self._compare_series(
            IdentityId.PRODUCT_RELATION, {"order": order}, lhs, rhs, started, mutation
        )

    def _sampled_qdixon(
        self,
        identity: IdentityId,
        params: dict,
        m: int,
        trials: int,
        seed: int,
        power: Optional[int] = None,
    ) -> VerificationReport:
        """
        Draws admissible points and compares both q-Dixon sides exactly. Points
        hitting a pole on either side are redrawn and never counted.
        """
        started = time.perf_counter()
        rng = random.Random(seed)
        series = qdixon_series(m)
        for trial in range(trials):
            for _ in range(RESAMPLE_BUDGET):
                q0, x0 = random_rational(rng), random_rational(rng)
                m0 = q0**-power if power is not None else random_rational(rng)
                if q0 in (1, -1):
                    continue
                try:
                    lhs = qhyper_eval(series, q0, x0, m0)
                    rhs = qdixon_closed_form(m, q0, x0, m0)
                except PoleError:
                    continue
                break
            else:
                raise SamplingBudgetExhausted(
                    f"No admissible point for {identity} m={m} after {RESAMPLE_BUDGET} draws "
                    f"(trial {trial + 1})"
                )
            if lhs != rhs:
                witness = SampleWitness(
                    point=SamplePoint(q=q0, x=x0, M=m0),
                    lhs=format_rational(lhs),
                    rhs=format_rational(rhs),
                )
                return self._report(identity, params, witness, started, trial + 1, m, 2 * m + 2)
        return self._report(identity, params, None, started, trials, m, 2 * m + 2)

    def verify_qdixon_sampled(self, m: int, trials: int, seed: int) -> VerificationReport:
        params = {"m": m, "trials": trials, "seed": seed}
        return self._sampled_qdixon(IdentityId.QDIXON_SAMPLED, params, m, trials, seed)

    def verify_qdixon_specialized(
        self, m: int, power: int, trials: int, seed: int
    ) -> VerificationReport:
        """q-Dixon at M = q^(-power), sampled over q and x."""
        params = {"m": m, "power": power, "trials": trials, "seed": seed}
        return self._sampled_qdixon(
            IdentityId.QDIXON_SPECIALIZED, params, m, trials, seed, power=power
        )

    def verify_dixon_limit(self, m: int) -> VerificationReport:
        started = time.perf_counter()
        return self._compare_rational(
            IdentityId.DIXON_LIMIT,
            {"m": m},
            dixon_limit_sum(m),
            dixon_limit_closed_form(m),
            started,
        )

    def verify_dixon_term_match(self, m: int, k: int) -> VerificationReport:
        started = time.perf_counter()
        lhs, rhs = dixon_term_match_sides(m, k)
        return self._compare_rational(
            IdentityId.DIXON_TERM_MATCH, {"m": m, "k": k}, lhs, rhs, started
        )

    def run(self, check: Check) -> VerificationReport:
        p = check.params
        match check.identity:
            case IdentityId.FINITE_QUINTUPLE:
                return self.verify_finite_quintuple(p["m"], check.mutation)
            case IdentityId.BILATERAL:
                return self.verify_bilateral(p["m"], p["n"], check.mutation)
            case IdentityId.SUBSTITUTION_RELATION:
                return self.verify_substitution_relation(p["m"], p["n"], p["k"])
            case IdentityId.QUINTUPLE_SERIES:
                return self.verify_quintuple(p["order"], check.mutation)
            case IdentityId.PRODUCT_RELATION:
                return self.verify_product_relation(p["order"], check.mutation)
            case IdentityId.QDIXON_SAMPLED:
                return self.verify_qdixon_sampled(p["m"], p["trials"], p["seed"])
            case IdentityId.QDIXON_SPECIALIZED:
                return self.verify_qdixon_specialized(
                    p["m"], p["power"], p["trials"], p["seed"]
                )
            case IdentityId.DIXON_LIMIT:
                return self.verify_dixon_limit(p["m"])
            case IdentityId.DIXON_TERM_MATCH:
                return self.verify_dixon_term_match(p["m"], p["k"])
        raise InvalidCheck(f"Unknown identity {check.identity}")

    def run_all(self, checks: Sequence[Check], jobs: int = 1) -> list[VerificationReport]:
        """
        Runs checks, in parallel when jobs > 1. Reports come back in sorted
        parameter order whatever the completion order.
        """
        ordered = sorted(checks, key=Check.sort_key)
        if jobs <= 1 or len(ordered) <= 1:
            return [self.run(check) for check in ordered]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(self.run, ordered))


def expand_products(specs: Sequence[ProductSpec], order: int) -> TruncatedSeries:
    series = TruncatedSeries.one(order)
    for spec in specs:
        series = series * bracket_inf(spec, order)
    return series


def coefficient_records(series: TruncatedSeries) -> list[CoefficientRecord]:
    return [
        CoefficientRecord(q_exp=q_exp, x_exp=x_exp, coeff=format_rational(coeff))
        for (q_exp, x_exp), coeff in series.poly.sorted_items()
    ]


def coefficient_of(
    specs: Sequence[ProductSpec], q_exp: int, x_exp: int, order: int
) -> CoefficientRecord:
    if q_exp < 0:
        return CoefficientRecord(q_exp=q_exp, x_exp=x_exp, coeff=format_rational(0))
    series = expand_products(specs, max(order, q_exp))
    return CoefficientRecord(
        q_exp=q_exp, x_exp=x_exp, coeff=format_rational(series.coeff(q_exp, x_exp))
    )
