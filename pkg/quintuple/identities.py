from __future__ import annotations

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from functools import reduce
from typing import Iterator

from quintuple.algebra import (
    BivariateLaurent,
    FactoredTerm,
    Monomial,
    RationalFunction,
    TruncatedSeries,
    sum_over_common_denominator,
)
from quintuple.qseries import (
    HyperParam,
    HyperSum,
    PoleError,
    ProductSpec,
    bracket_inf,
    poch_factors,
    poch_inf,
    poch_term,
    poch_value,
    qbinom,
    tri,
)


class Mutation(StrEnum):
    DROP_LINEAR_FACTOR = "drop-linear-factor"
    X_POWER_2K = "x-power-2k"
    EXPONENT_2C = "exponent-2c"
    DROP_EULER_FACTOR = "drop-euler-factor"


class UnsupportedMutation(ValueError):
    pass


def _require(mutation: Mutation | None, *allowed: Mutation):
    if mutation is not None and mutation not in allowed:
        raise UnsupportedMutation(f"Mutation '{mutation}' does not apply to this identity")


def mono(coeff, q_exp: int = 0, x_exp: int = 0) -> Monomial:
    return Monomial(coeff, q_exp, x_exp)


# Finite form: 1 = sum_k (1 + x q^k) [m, k] (x;q)_{m+1} / (q^k x^2;q)_{m+1} x^k q^{k^2}


def finite_quintuple_term(
    m: int, k: int, mutation: Mutation | None = None
) -> FactoredTerm:
    _require(mutation, Mutation.DROP_LINEAR_FACTOR)
    term = FactoredTerm(qbinom(m, k).shift(k * k, k))
    if mutation is None:
        term = term.with_factors({mono(-1, k, 1): 1})
    term = term.with_factors(poch_factors(mono(1, 0, 1), m + 1))
    return term.with_factors(poch_factors(mono(1, k, 2), m + 1), power=-1)


def finite_quintuple_terms(m: int, mutation: Mutation | None = None) -> list[FactoredTerm]:
    return [finite_quintuple_term(m, k, mutation) for k in range(m + 1)]


def finite_quintuple_sum(m: int, mutation: Mutation | None = None) -> RationalFunction:
    """
    Right side of the finite form over the denominator (x^2;q)_{2m+1}.
    """
    return sum_over_common_denominator(finite_quintuple_terms(m, mutation))


def finite_quintuple_sum_pairwise(m: int) -> RationalFunction:
    return reduce(
        lambda acc, term: acc + term.expand(),
        finite_quintuple_terms(m),
        RationalFunction(0),
    )


# Bilateral form over -m <= k <= n


def bilateral_term(
    m: int, n: int, k: int, mutation: Mutation | None = None
) -> FactoredTerm:
    _require(mutation, Mutation.X_POWER_2K)
    x_power = 2 * k if mutation is Mutation.X_POWER_2K else 3 * k
    term = FactoredTerm(qbinom(m + n, m + k).shift(k * k + tri(k), x_power))
    term = term.with_factors({mono(1, k, 1): 1})
    term = term.with_factors(poch_factors(mono(-1, 0, 1), 1 + n))
    term = term.with_factors(poch_factors(mono(-1, 1, -1), m))
    term = term.with_factors(poch_factors(mono(1, 0, 2), 1 + n + k), power=-1)
    return term.with_factors(poch_factors(mono(1, 1, -2), m - k), power=-1)


def bilateral_uses_extended_index(m: int, n: int) -> bool:
    # 1+n+k < 0 for k = -m when m > n+1; m-k < 0 for k = n when n > m
    return m > n + 1 or n > m


def bilateral_sum(m: int, n: int, mutation: Mutation | None = None) -> RationalFunction:
    return sum_over_common_denominator(
        [bilateral_term(m, n, k, mutation) for k in range(-m, n + 1)]
    )


# Derivation replay: m -> m+n, x -> -q^{-m} x, k -> k+m


def substitution_relation(
    m: int, n: int, k: int
) -> tuple[RationalFunction, RationalFunction, RationalFunction]:
    """
    The factorial fraction before the split, after the split, and in its
    final form.
    """
    if not -m <= k <= n:
        raise ValueError(f"k must satisfy -m <= k <= n, got m={m}, n={n}, k={k}")
    shifted_x = mono(-1, -m, 1)
    shifted_x2 = mono(1, k - m, 2)

    before = poch_term(shifted_x, m + n + 1).with_factors(
        poch_factors(shifted_x2, m + n + 1), power=-1
    )
    split = (
        poch_term(shifted_x, m)
        .with_factors(poch_factors(mono(-1, 0, 1), 1 + n))
        .with_factors(poch_factors(shifted_x2, m - k), power=-1)
        .with_factors(poch_factors(mono(1, 0, 2), 1 + n + k), power=-1)
    )
    sign = -1 if (m - k) % 2 else 1
    final = (
        FactoredTerm(BivariateLaurent.monomial(sign, tri(k) - m * k, 2 * k - m))
        .with_factors(poch_factors(mono(-1, 1, -1), m))
        .with_factors(poch_factors(mono(-1, 0, 1), 1 + n))
        .with_factors(poch_factors(mono(1, 1, -2), m - k), power=-1)
        .with_factors(poch_factors(mono(1, 0, 2), 1 + n + k), power=-1)
    )
    return before.expand(), split.expand(), final.expand()


def substitution_uses_extended_index(m: int, n: int, k: int) -> bool:
    return 1 + n + k < 0 or m - k < 0


# Quintuple product identity as formal series in q


def quintuple_exponents(k: int, mutation: Mutation | None = None) -> tuple[int, int]:
    """
    q-exponents of the x^{3k} and x^{3k+1} monomials of the k-th summand
    (1 - x q^k) q^{3 C(k,2)} (q x^3)^k.
    """
    base = 2 * tri(k) if mutation is Mutation.EXPONENT_2C else 3 * tri(k)
    return base + k, base + 2 * k


def _outward(order: int, mutation: Mutation | None) -> Iterator[int]:
    for step in (1, -1):
        k = 0 if step == 1 else -1
        while min(quintuple_exponents(k, mutation)) <= order:
            yield k
            k += step


def quintuple_lhs_series(order: int, mutation: Mutation | None = None) -> TruncatedSeries:
    _require(mutation, Mutation.EXPONENT_2C)
    terms: dict[tuple[int, int], int] = {}
    for k in _outward(order, mutation):
        plus, minus = quintuple_exponents(k, mutation)
        if plus <= order:
            terms[(plus, 3 * k)] = terms.get((plus, 3 * k), 0) + 1
        if minus <= order:
            terms[(minus, 3 * k + 1)] = terms.get((minus, 3 * k + 1), 0) - 1
    return TruncatedSeries(order, BivariateLaurent(terms))


QUINTUPLE_BRACKETS = (
    ProductSpec((mono(1, 1, 0), mono(1, 0, 1), mono(1, 1, -1)), 1),
    ProductSpec((mono(1, 1, 2), mono(1, 1, -2)), 2),
)


def quintuple_rhs_series(order: int) -> TruncatedSeries:
    """[q, x, q/x; q]_inf [q x^2, q/x^2; q^2]_inf"""
    first, second = QUINTUPLE_BRACKETS
    return bracket_inf(first, order) * bracket_inf(second, order)


def product_relation_sides(
    order: int, mutation: Mutation | None = None
) -> tuple[TruncatedSeries, TruncatedSeries]:
    """
    Cross-multiplied form of
        (q;q)_inf (x^2;q)_inf (q/x^2;q)_inf / ((-x;q)_inf (-q/x;q)_inf)
            = [q, x, q/x; q]_inf [q x^2, q/x^2; q^2]_inf
    """
    _require(mutation, Mutation.DROP_EULER_FACTOR)
    lhs = poch_inf(mono(1, 0, 2), 1, order) * poch_inf(mono(1, 1, -2), 1, order)
    if mutation is None:
        lhs = poch_inf(mono(1, 1, 0), 1, order) * lhs
    rhs = (
        quintuple_rhs_series(order)
        * poch_inf(mono(-1, 0, 1), 1, order)
        * poch_inf(mono(-1, 1, -1), 1, order)
    )
    return lhs, rhs


# Terminating q-Dixon formula and its M -> infinity limit


def qdixon_series(m: int) -> HyperSum:
    return HyperSum(
        num_params=(
            HyperParam(1, 0, 2, 0),
            HyperParam(-1, 1, 1, 0),
            HyperParam(1, -m, 0, 0),
            HyperParam(1, 0, 0, 1),
        ),
        den_params=(
            HyperParam(-1, 0, 1, 0),
            HyperParam(1, 1 + m, 2, 0),
            HyperParam(1, 1, 2, -1),
        ),
        argument=HyperParam(1, 1 + m, 1, -1),
        length=m,
    )


def qdixon_closed_form(m: int, q0: Fraction, x0: Fraction, m0: Fraction) -> Fraction:
    """(q x^2;q)_m (q x/M;q)_m / ((q x;q)_m (q x^2/M;q)_m) at a point."""
    q0, x0, m0 = Fraction(q0), Fraction(x0), Fraction(m0)
    den = poch_value(q0 * x0, q0, m) * poch_value(q0 * x0**2 / m0, q0, m)
    if den == 0:
        raise PoleError(f"q-Dixon product side has a pole at q={q0}, x={x0}, M={m0}")
    return poch_value(q0 * x0**2, q0, m) * poch_value(q0 * x0 / m0, q0, m) / den


def dixon_limit_term(m: int, k: int) -> FactoredTerm:
    sign = -1 if k % 2 else 1
    term = FactoredTerm(BivariateLaurent.monomial(sign, tri(k) + (1 + m) * k, k))
    term = term.with_factors(poch_factors(mono(1, 0, 2), k))
    term = term.with_factors(poch_factors(mono(-1, 1, 1), k))
    term = term.with_factors(poch_factors(mono(1, -m, 0), k))
    term = term.with_factors(poch_factors(mono(1, 1, 0), k), power=-1)
    term = term.with_factors(poch_factors(mono(-1, 0, 1), k), power=-1)
    return term.with_factors(poch_factors(mono(1, 1 + m, 2), k), power=-1)


def dixon_limit_sum(m: int) -> RationalFunction:
    return sum_over_common_denominator([dixon_limit_term(m, k) for k in range(m + 1)])


def dixon_limit_closed_form(m: int) -> RationalFunction:
    """(q x^2;q)_m / (q x;q)_m"""
    return (
        poch_term(mono(1, 1, 2), m)
        .with_factors(poch_factors(mono(1, 1, 1), m), power=-1)
        .expand()
    )


def dixon_term_match_sides(m: int, k: int) -> tuple[RationalFunction, RationalFunction]:
    """
    k-th summand of the finite form against the k-th limiting q-Dixon summand
    times (q x;q)_m / (q x^2;q)_m.
    """
    if not 0 <= k <= m:
        raise ValueError(f"k must satisfy 0 <= k <= m, got m={m}, k={k}")
    lhs = finite_quintuple_term(m, k)
    rhs = (
        dixon_limit_term(m, k)
        .with_factors(poch_factors(mono(1, 1, 1), m))
        .with_factors(poch_factors(mono(1, 1, 2), m), power=-1)
    )
    return lhs.expand(), rhs.expand()
