"""
Parser and printer for bracket product expressions such as

    [q,x,q/x;q] [q*x^2,q/x^2;q^2]

Grammar:
    exprs   := bracket { ws bracket }
    bracket := "[" base { "," base } ";" "q" [ "^" posint ] "]"
    base    := [ "-" ] factor { ("*" | "/") factor }
    factor  := "q" [ "^" int ] | "x" [ "^" int ] | int [ "/" posint ]

"/" between factors multiplies by the inverse, so q/x is q*x^-1.
"""

from fractions import Fraction
from typing import Sequence

from quintuple.algebra import Monomial
from quintuple.qseries import ProductSpec


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


def _is_digit(char: str) -> bool:
    return "0" <= char <= "9"


class _ProductExprParser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.src[index] if index < len(self.src) else ""

    def error(self, message: str, pos: int | None = None):
        raise ExpressionSyntaxError(message, (self.pos if pos is None else pos) + 1)

    def found(self) -> str:
        char = self.peek()
        return repr(char) if char else "end of input"

    def expect(self, char: str, bracket_start: int):
        if self.peek() == char:
            self.pos += 1
            return
        if not self.peek():
            self.error("unterminated bracket", bracket_start)
        self.error(f"expected {char!r}, found {self.found()}")

    def skip_whitespace(self) -> bool:
        start = self.pos
        while self.peek().isspace():
            self.pos += 1
        return self.pos > start

    def digits(self) -> int:
        start = self.pos
        while _is_digit(self.peek()):
            self.pos += 1
        if start == self.pos:
            self.error(f"expected a number, found {self.found()}")
        return int(self.src[start : self.pos])

    def signed_int(self) -> int:
        if self.peek() == "-":
            self.pos += 1
            return -self.digits()
        return self.digits()

    def exprs(self) -> list[ProductSpec]:
        self.skip_whitespace()
        specs = [self.bracket()]
        while True:
            separated = self.skip_whitespace()
            if not self.peek():
                return specs
            if not separated:
                self.error(f"expected whitespace between brackets, found {self.found()}")
            specs.append(self.bracket())

    def bracket(self) -> ProductSpec:
        start = self.pos
        if self.peek() != "[":
            self.error(f"expected '[', found {self.found()}")
        self.pos += 1
        bases = [self.base(start)]
        while self.peek() == ",":
            self.pos += 1
            bases.append(self.base(start))
        self.expect(";", start)
        self.expect("q", start)
        modulus = 1
        if self.peek() == "^":
            self.pos += 1
            modulus_pos = self.pos
            modulus = self.digits()
            if modulus == 0:
                self.error("modulus must be positive", modulus_pos)
        self.expect("]", start)
        return ProductSpec(tuple(bases), modulus)

    def base(self, bracket_start: int) -> Monomial:
        if not self.peek():
            self.error("unterminated bracket", bracket_start)
        sign = 1
        if self.peek() == "-":
            sign = -1
            self.pos += 1
        coeff, q_exp, x_exp = self.factor(bracket_start)
        while self.peek() in ("*", "/"):
            op = self.peek()
            self.pos += 1
            factor_pos = self.pos
            c, a, b = self.factor(bracket_start)
            if op == "*":
                coeff, q_exp, x_exp = coeff * c, q_exp + a, x_exp + b
            else:
                if c == 0:
                    self.error("division by zero", factor_pos)
                coeff, q_exp, x_exp = coeff / c, q_exp - a, x_exp - b
        if coeff == 0:
            self.error("base has a zero coefficient")
        return Monomial(sign * coeff, q_exp, x_exp)

    def factor(self, bracket_start: int) -> tuple[Fraction, int, int]:
        char = self.peek()
        if char in ("q", "x"):
            self.pos += 1
            exponent = 1
            if self.peek() == "^":
                self.pos += 1
                exponent = self.signed_int()
            return (Fraction(1), exponent, 0) if char == "q" else (Fraction(1), 0, exponent)
        if _is_digit(char):
            value = Fraction(self.digits())
            # int "/" posint is a rational literal; "/" before q or x is division
            if self.peek() == "/" and _is_digit(self.peek(1)):
                self.pos += 1
                denominator_pos = self.pos
                denominator = self.digits()
                if denominator == 0:
                    self.error("division by zero", denominator_pos)
                value /= denominator
            return value, 0, 0
        if not char:
            self.error("unterminated bracket", bracket_start)
        self.error(f"expected 'q', 'x' or an integer, found {self.found()}")


def parse_product_expr(src: str) -> list[ProductSpec]:
    return _ProductExprParser(src).exprs()


def render_monomial(mono: Monomial) -> str:
    coeff = Fraction(mono.coeff)
    magnitude = abs(coeff)
    numerator_parts: list[str] = []
    denominator_parts: list[str] = []
    if magnitude != 1:
        numerator_parts.append(
            str(magnitude.numerator)
            if magnitude.denominator == 1
            else f"{magnitude.numerator}/{magnitude.denominator}"
        )
    for name, exponent in (("q", mono.q_exp), ("x", mono.x_exp)):
        if exponent == 0:
            continue
        power = name if abs(exponent) == 1 else f"{name}^{abs(exponent)}"
        (numerator_parts if exponent > 0 else denominator_parts).append(power)
    text = "*".join(numerator_parts) if numerator_parts else "1"
    text += "".join(f"/{part}" for part in denominator_parts)
    return ("-" if coeff < 0 else "") + text


def render_product_spec(spec: ProductSpec) -> str:
    modulus = "" if spec.modulus == 1 else f"^{spec.modulus}"
    return f"[{','.join(render_monomial(b) for b in spec.bases)};q{modulus}]"


def render_product_expr(specs: Sequence[ProductSpec]) -> str:
    return " ".join(render_product_spec(spec) for spec in specs)
