from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from quintuple.algebra import (
    BivariateLaurent,
    Coefficient,
    FactoredTerm,
    Monomial,
    RationalFunction,
    TruncatedSeries,
)


class QSeriesError(ValueError):
    pass


class InvalidBaseError(QSeriesError):
    pass


class PoleError(QSeriesError):
    pass


def tri(k: int) -> int:
    """binomial(k, 2) extended to every integer k."""
    return k * (k - 1) // 2


def poch_factors(base: Monomial, n: int) -> dict[Monomial, int]:
    """
    Binomial factors of (base; q)_n. Negative n follows
    (a; q)_{-n} = 1 / (a q^{-n}; q)_n.
    """
    if n >= 0:
        return {base.shift_q(j): 1 for j in range(n)}
    return {base.shift_q(j + n): -1 for j in range(-n)}


def poch_term(base: Monomial, n: int) -> FactoredTerm:
    return FactoredTerm(1, poch_factors(base, n))


def poch(base: Monomial, n: int) -> RationalFunction:
    return poch_term(base, n).expand()


def poch_mod(base: Monomial, n: int, d: int) -> BivariateLaurent:
    if n < 0:
        raise QSeriesError(f"poch_mod needs a nonnegative length, got {n}")
    if d < 1:
        raise QSeriesError(f"Modulus must be positive, got {d}")
    result = BivariateLaurent.one()
    for j in range(n):
        result = result.mul_binomial(base.shift_q(d * j))
    return result


@lru_cache(maxsize=None)
def qbinom(m: int, k: int) -> BivariateLaurent:
    """
    Gaussian binomial coefficient [m over k]_q via the Pascal recurrence
    [m, k] = [m-1, k-1] + q^k [m-1, k].
    """
    if k < 0 or k > m:
        return BivariateLaurent.zero()
    if k == 0 or k == m:
        return BivariateLaurent.one()
    return qbinom(m - 1, k - 1) + qbinom(m - 1, k).shift(k, 0)


def check_infinite_base(base: Monomial, d: int = 1):
    if d < 1:
        raise InvalidBaseError(f"Modulus must be positive, got {d} for base {base}")
    if base.q_exp < 0:
        raise InvalidBaseError(
            f"Base {base} has negative q-exponent; its infinite product is not a power series in q"
        )
    if base.q_exp == 0 and base.x_exp == 0:
        raise InvalidBaseError(
            f"Base {base} is constant in q and x; its infinite product has no formal expansion"
        )


def poch_inf(base: Monomial, d: int, order: int) -> TruncatedSeries:
    """
    (base; q^d)_inf exact through q^order. Factors whose non-constant term
    has q-exponent above order are 1 modulo q^(order+1) and are skipped.
    """
    check_infinite_base(base, d)
    series = TruncatedSeries.one(order)
    j = 0
    while base.q_exp + d * j <= order:
        factor = BivariateLaurent.one().mul_binomial(base.shift_q(d * j))
        series = series * TruncatedSeries(order, factor)
        j += 1
    return series


@dataclass(frozen=True)
class ProductSpec:
    """[a, b, ..., c; q^d]_inf"""

    bases: tuple[Monomial, ...]
    modulus: int = 1

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(self.bases))
        if not self.bases:
            raise QSeriesError("A product needs at least one base")
        if self.modulus < 1:
            raise QSeriesError(f"Modulus must be positive, got {self.modulus}")


def bracket_inf(spec: ProductSpec, order: int) -> TruncatedSeries:
    series = TruncatedSeries.one(order)
    for base in spec.bases:
        series = series * poch_inf(base, spec.modulus, order)
    return series


@dataclass(frozen=True)
class HyperParam:
    """coeff * q^q_exp * x^x_exp * M^m_exp"""

    coeff: Coefficient
    q_exp: int = 0
    x_exp: int = 0
    m_exp: int = 0

    def evaluate(self, q0: Fraction, x0: Fraction, m0: Fraction) -> Fraction:
        return Fraction(self.coeff) * q0**self.q_exp * x0**self.x_exp * m0**self.m_exp

    def __str__(self) -> str:
        powers = [
            name if e == 1 else f"{name}^{e}"
            for name, e in (("q", self.q_exp), ("x", self.x_exp), ("M", self.m_exp))
            if e != 0
        ]
        if self.coeff != 1 or not powers:
            powers.insert(0, str(self.coeff))
        return "*".join(powers)


@dataclass(frozen=True)
class HyperSum:
    """
    Terminating basic hypergeometric sum
        sum_{k=0}^{length} prod (a_i; q)_k / ((q; q)_k prod (b_j; q)_k) * z^k
    """

    num_params: tuple[HyperParam, ...]
    den_params: tuple[HyperParam, ...]
    argument: HyperParam
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise QSeriesError(f"Series length must be nonnegative, got {self.length}")


def _check_sample_base(q0: Fraction):
    if q0 in (0, 1, -1):
        raise PoleError(f"q must avoid 0, 1 and -1, got {q0}")


def qhyper_eval(h: HyperSum, q0: Coefficient, x0: Coefficient, m0: Coefficient) -> Fraction:
    q0, x0, m0 = Fraction(q0), Fraction(x0), Fraction(m0)
    _check_sample_base(q0)
    nums = [a.evaluate(q0, x0, m0) for a in h.num_params]
    dens = [b.evaluate(q0, x0, m0) for b in h.den_params]
    z = h.argument.evaluate(q0, x0, m0)

    term = Fraction(1)
    total = Fraction(1)
    q_pow = Fraction(1)  # q^k
    for k in range(h.length):
        denominator = 1 - q_pow * q0
        if denominator == 0:
            raise PoleError(f"(q;q)_{k + 1} vanishes at q={q0}")
        for param, value in zip(h.den_params, dens):
            factor = 1 - value * q_pow
            if factor == 0:
                raise PoleError(f"({param};q)_{k + 1} vanishes at k={k + 1}")
            denominator *= factor
        numerator = z
        for value in nums:
            numerator *= 1 - value * q_pow
        term = term * numerator / denominator
        total += term
        q_pow *= q0
    return total


def poch_value(a0: Coefficient, q0: Coefficient, n: int) -> Fraction:
    """Exact value of (a0; q0)_n for n >= 0."""
    a0, q0 = Fraction(a0), Fraction(q0)
    value = Fraction(1)
    for _ in range(n):
        value *= 1 - a0
        a0 *= q0
    return value
