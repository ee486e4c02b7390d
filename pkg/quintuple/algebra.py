from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Coefficient = Union[int, Fraction]
Exponents = tuple[int, int]


class AlgebraError(ValueError):
    pass


class ZeroDenominatorError(AlgebraError):
    pass


class OrderMismatchError(AlgebraError):
    pass


class NegativeOrderError(AlgebraError):
    pass


def normalize_coefficient(value: Coefficient) -> Coefficient:
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, int):
        return value
    raise TypeError(f"Unsupported coefficient type: {type(value).__name__}")


def format_rational(value: Coefficient) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Monomial:
    coeff: Coefficient
    q_exp: int = 0
    x_exp: int = 0

    def __post_init__(self):
        if self.coeff == 0:
            raise AlgebraError("Monomial coefficient must be nonzero")
        object.__setattr__(self, "coeff", normalize_coefficient(self.coeff))

    def shift_q(self, j: int) -> Monomial:
        return Monomial(self.coeff, self.q_exp + j, self.x_exp)

    def sort_key(self) -> tuple[int, int, Fraction]:
        return (self.q_exp, self.x_exp, Fraction(self.coeff))

    def __str__(self) -> str:
        return str(BivariateLaurent.from_monomial(self))


class BivariateLaurent:
    """
    Finite sum of monomials c q^a x^b over the rationals, a and b any integers.

    Immutable. Zero coefficients are never stored, so two values are equal
    exactly when their term maps are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponents, Coefficient] | None = None):
        canonical: dict[Exponents, Coefficient] = {}
        for (q_exp, x_exp), coeff in (terms or {}).items():
            if coeff != 0:
                canonical[(int(q_exp), int(x_exp))] = normalize_coefficient(coeff)
        self._terms = canonical
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, terms: dict[Exponents, Coefficient]) -> BivariateLaurent:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> BivariateLaurent:
        return cls._wrap({})

    @classmethod
    def one(cls) -> BivariateLaurent:
        return cls._wrap({(0, 0): 1})

    @classmethod
    def constant(cls, value: Coefficient) -> BivariateLaurent:
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, coeff: Coefficient, q_exp: int = 0, x_exp: int = 0) -> BivariateLaurent:
        return cls({(q_exp, x_exp): coeff})

    @classmethod
    def from_monomial(cls, mono: Monomial) -> BivariateLaurent:
        return cls._wrap({(mono.q_exp, mono.x_exp): mono.coeff})

    @classmethod
    def coerce(cls, value: BivariateLaurent | Monomial | Coefficient) -> BivariateLaurent:
        if isinstance(value, BivariateLaurent):
            return value
        if isinstance(value, Monomial):
            return cls.from_monomial(value)
        return cls.constant(value)

    def items(self) -> Iterable[tuple[Exponents, Coefficient]]:
        return self._terms.items()

    def sorted_items(self) -> list[tuple[Exponents, Coefficient]]:
        return sorted(self._terms.items())

    def coeff(self, q_exp: int, x_exp: int) -> Coefficient:
        return self._terms.get((q_exp, x_exp), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Exponents]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Monomial)):
            other = BivariateLaurent.coerce(other)
        if not isinstance(other, BivariateLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: BivariateLaurent | Monomial | Coefficient) -> BivariateLaurent:
        if not isinstance(other, (BivariateLaurent, Monomial, int, Fraction)):
            return NotImplemented
        other = BivariateLaurent.coerce(other)
        if len(other._terms) > len(self._terms):
            return other + self
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            total = out.get(key, 0) + coeff
            if total:
                out[key] = normalize_coefficient(total)
            else:
                del out[key]
        return BivariateLaurent._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> BivariateLaurent:
        return BivariateLaurent._wrap({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other: BivariateLaurent | Monomial | Coefficient) -> BivariateLaurent:
        if not isinstance(other, (BivariateLaurent, Monomial, int, Fraction)):
            return NotImplemented
        return self + (-BivariateLaurent.coerce(other))

    def __rsub__(self, other: Monomial | Coefficient) -> BivariateLaurent:
        return BivariateLaurent.coerce(other) - self

    def scale(self, factor: Coefficient) -> BivariateLaurent:
        if factor == 0:
            return BivariateLaurent.zero()
        return BivariateLaurent._wrap(
            {key: normalize_coefficient(coeff * factor) for key, coeff in self._terms.items()}
        )

    def shift(self, q_exp: int, x_exp: int) -> BivariateLaurent:
        return BivariateLaurent._wrap(
            {(a + q_exp, b + x_exp): coeff for (a, b), coeff in self._terms.items()}
        )

    def mul_monomial(self, mono: Monomial) -> BivariateLaurent:
        return self.shift(mono.q_exp, mono.x_exp).scale(mono.coeff)

    def mul_binomial(self, mono: Monomial) -> BivariateLaurent:
        """
        Returns self * (1 - mono) in a single pass over the terms.
        """
        out = dict(self._terms)
        c0, da, db = mono.coeff, mono.q_exp, mono.x_exp
        for (a, b), coeff in self._terms.items():
            key = (a + da, b + db)
            total = out.get(key, 0) - coeff * c0
            if total:
                out[key] = normalize_coefficient(total)
            else:
                del out[key]
        return BivariateLaurent._wrap(out)

    def __mul__(self, other: BivariateLaurent | Monomial | Coefficient) -> BivariateLaurent:
        if isinstance(other, Monomial):
            return self.mul_monomial(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, BivariateLaurent):
            return NotImplemented
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        if len(small) == 1:
            ((a, b), coeff), = small._terms.items()
            return large.shift(a, b).scale(coeff)
        out: dict[Exponents, Coefficient] = {}
        get = out.get
        large_items = list(large._terms.items())
        for (a1, b1), c1 in small._terms.items():
            for (a2, b2), c2 in large_items:
                key = (a1 + a2, b1 + b2)
                out[key] = get(key, 0) + c1 * c2
        return BivariateLaurent._wrap(
            {key: normalize_coefficient(coeff) for key, coeff in out.items() if coeff}
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> BivariateLaurent:
        if exponent < 0:
            raise AlgebraError("Negative powers are not polynomial; use RationalFunction")
        result = BivariateLaurent.one()
        for _ in range(exponent):
            result = result * self
        return result

    def max_q_deg(self) -> int:
        return max((a for a, _ in self._terms), default=0)

    def max_x_deg(self) -> int:
        return max((b for _, b in self._terms), default=0)

    def evaluate(self, q0: Coefficient, x0: Coefficient) -> Fraction:
        q0, x0 = Fraction(q0), Fraction(x0)
        total = Fraction(0)
        for (a, b), coeff in self._terms.items():
            total += coeff * q0**a * x0**b
        return total

    def specialize_x(self, x0: Coefficient) -> BivariateLaurent:
        x0 = Fraction(x0)
        out: dict[Exponents, Coefficient] = {}
        for (a, b), coeff in self._terms.items():
            out[(a, 0)] = out.get((a, 0), 0) + coeff * x0**b
        return BivariateLaurent(out)

    def __repr__(self) -> str:
        return f"BivariateLaurent({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for (a, b), coeff in self.sorted_items():
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            powers = [
                name if e == 1 else f"{name}^{e}"
                for name, e in (("q", a), ("x", b))
                if e != 0
            ]
            if magnitude != 1 or not powers:
                powers.insert(0, str(magnitude))
            pieces.append((sign, "*".join(powers)))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


Q = BivariateLaurent.monomial(1, 1, 0)
X = BivariateLaurent.monomial(1, 0, 1)


def first_discrepancy(
    lhs: BivariateLaurent, rhs: BivariateLaurent
) -> tuple[Exponents, Coefficient, Coefficient] | None:
    """
    Smallest exponent pair, in (q_exp, x_exp) order, where lhs and rhs differ.
    """
    keys = sorted(set(lhs) | set(rhs))
    for q_exp, x_exp in keys:
        left, right = lhs.coeff(q_exp, x_exp), rhs.coeff(q_exp, x_exp)
        if left != right:
            return (q_exp, x_exp), left, right
    return None


class RationalFunction:
    """
    Quotient num/den of bivariate Laurent polynomials. Never reduced; equality
    is by cross-multiplication.
    """

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(
        self,
        num: BivariateLaurent | Monomial | Coefficient,
        den: BivariateLaurent | Monomial | Coefficient = 1,
    ):
        self.num = BivariateLaurent.coerce(num)
        self.den = BivariateLaurent.coerce(den)
        if self.den.is_zero():
            raise ZeroDenominatorError(f"Zero denominator for numerator {self.num}")

    @classmethod
    def coerce(cls, value: RationalFunction | BivariateLaurent | Monomial | Coefficient):
        if isinstance(value, RationalFunction):
            return value
        return cls(value)

    def __add__(self, other):
        if not isinstance(other, (RationalFunction, BivariateLaurent, Monomial, int, Fraction)):
            return NotImplemented
        other = RationalFunction.coerce(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, (RationalFunction, BivariateLaurent, Monomial, int, Fraction)):
            return NotImplemented
        return self + (-RationalFunction.coerce(other))

    def __mul__(self, other):
        if not isinstance(other, (RationalFunction, BivariateLaurent, Monomial, int, Fraction)):
            return NotImplemented
        other = RationalFunction.coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def reciprocal(self) -> RationalFunction:
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, (RationalFunction, BivariateLaurent, Monomial, int, Fraction)):
            return NotImplemented
        return self * RationalFunction.coerce(other).reciprocal()

    def cross_products(self, other) -> tuple[BivariateLaurent, BivariateLaurent]:
        other = RationalFunction.coerce(other)
        return self.num * other.den, other.num * self.den

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (RationalFunction, BivariateLaurent, Monomial, int, Fraction)):
            return NotImplemented
        left, right = self.cross_products(other)
        return left == right

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def evaluate(self, q0: Coefficient, x0: Coefficient) -> Fraction:
        den = self.den.evaluate(q0, x0)
        if den == 0:
            raise ZeroDenominatorError(f"Denominator {self.den} vanishes at q={q0}, x={x0}")
        return self.num.evaluate(q0, x0) / den

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num}) / ({self.den}))"


class TruncatedSeries:
    """
    Formal power series in q, exact through q^order, with Laurent polynomial
    coefficients in x.
    """

    __slots__ = ("order", "poly")
    __hash__ = None

    def __init__(self, order: int, poly: BivariateLaurent | Monomial | Coefficient = 0):
        if order < 0:
            raise NegativeOrderError(f"Truncation order must be nonnegative, got {order}")
        poly = BivariateLaurent.coerce(poly)
        for q_exp, _ in poly:
            if not 0 <= q_exp <= order:
                raise AlgebraError(
                    f"q-exponent {q_exp} outside 0..{order} for a truncated series"
                )
        self.order = order
        self.poly = poly

    @classmethod
    def _wrap(cls, order: int, poly: BivariateLaurent) -> TruncatedSeries:
        obj = cls.__new__(cls)
        obj.order = order
        obj.poly = poly
        return obj

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls(order, BivariateLaurent.one())

    @classmethod
    def truncate(cls, poly: BivariateLaurent | Monomial | Coefficient, order: int) -> TruncatedSeries:
        poly = BivariateLaurent.coerce(poly)
        if any(q_exp < 0 for q_exp, _ in poly):
            raise AlgebraError("Cannot truncate a polynomial with negative q-exponents")
        return cls(order, BivariateLaurent({k: c for k, c in poly.items() if k[0] <= order}))

    def _check_order(self, other: TruncatedSeries):
        if self.order != other.order:
            raise OrderMismatchError(
                f"Truncation orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_order(other)
        return TruncatedSeries._wrap(self.order, self.poly + other.poly)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries._wrap(self.order, -self.poly)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_order(other)
        order = self.order
        rhs = other.poly.sorted_items()
        out: dict[Exponents, Coefficient] = {}
        get = out.get
        for (a1, b1), c1 in self.poly.items():
            budget = order - a1
            for (a2, b2), c2 in rhs:
                # rhs is sorted by q-exponent
                if a2 > budget:
                    break
                key = (a1 + a2, b1 + b2)
                out[key] = get(key, 0) + c1 * c2
        return TruncatedSeries._wrap(order, BivariateLaurent(out))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.poly == other.poly

    def coeff(self, q_exp: int, x_exp: int) -> Coefficient:
        return self.poly.coeff(q_exp, x_exp)

    def __len__(self) -> int:
        return len(self.poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def specialize_x(self, x0: Coefficient) -> TruncatedSeries:
        return TruncatedSeries._wrap(self.order, self.poly.specialize_x(x0))

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.poly} + O(q^{self.order + 1}))"


class FactoredTerm:
    """
    scalar * prod (1 - f)^e over binomial factors keyed by their monomial f.
    Positive e sits in the numerator, negative e in the denominator; equal
    factors cancel on construction.
    """

    __slots__ = ("scalar", "factors")

    def __init__(
        self,
        scalar: BivariateLaurent | Monomial | Coefficient = 1,
        factors: Mapping[Monomial, int] | None = None,
    ):
        self.scalar = BivariateLaurent.coerce(scalar)
        self.factors = {f: e for f, e in (factors or {}).items() if e}

    def with_factors(self, factors: Mapping[Monomial, int], power: int = 1) -> FactoredTerm:
        merged = dict(self.factors)
        for f, e in factors.items():
            merged[f] = merged.get(f, 0) + power * e
        return FactoredTerm(self.scalar, merged)

    def numerator_factors(self) -> dict[Monomial, int]:
        return {f: e for f, e in self.factors.items() if e > 0}

    def denominator_factors(self) -> dict[Monomial, int]:
        return {f: -e for f, e in self.factors.items() if e < 0}

    def expand(self) -> RationalFunction:
        num = expand_binomials(self.scalar, self.numerator_factors())
        den = expand_binomials(BivariateLaurent.one(), self.denominator_factors())
        return RationalFunction(num, den)

    def __repr__(self) -> str:
        return f"FactoredTerm({self.scalar}, {self.factors})"


def expand_binomials(
    poly: BivariateLaurent, factors: Mapping[Monomial, int]
) -> BivariateLaurent:
    """
    poly * prod (1 - f)^e for nonnegative e, one binomial at a time.
    """
    for f in sorted(factors, key=Monomial.sort_key):
        for _ in range(factors[f]):
            if poly.is_zero():
                return poly
            poly = poly.mul_binomial(f)
    return poly


def sum_over_common_denominator(terms: Sequence[FactoredTerm]) -> RationalFunction:
    """
    Sums factored terms over their least common factored denominator.

    Each factor f gets denominator depth max_k max(0, -e_k(f)). Factors shared
    by every shifted numerator are applied once, after the summation.
    """
    if not terms:
        return RationalFunction(0)
    keys = sorted({f for term in terms for f in term.factors}, key=Monomial.sort_key)
    depth = {f: max(0, max(-term.factors.get(f, 0) for term in terms)) for f in keys}
    shifted = [{f: term.factors.get(f, 0) + depth[f] for f in keys} for term in terms]
    common = {f: min(exps[f] for exps in shifted) for f in keys}

    num = BivariateLaurent.zero()
    for term, exps in zip(terms, shifted):
        num = num + expand_binomials(term.scalar, {f: exps[f] - common[f] for f in keys})
    num = expand_binomials(num, common)
    den = expand_binomials(BivariateLaurent.one(), depth)
    return RationalFunction(num, den)
