try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)
from pydantic.json_schema import WithJsonSchema

from quintuple.algebra import format_rational
from quintuple.identities import Mutation


class IdentityId(StrEnum):
    FINITE_QUINTUPLE = "finite-quintuple"
    BILATERAL = "bilateral"
    SUBSTITUTION_RELATION = "substitution-relation"
    QUINTUPLE_SERIES = "quintuple-series"
    PRODUCT_RELATION = "product-relation"
    QDIXON_SAMPLED = "qdixon-sampled"
    QDIXON_SPECIALIZED = "qdixon-specialized"
    DIXON_LIMIT = "dixon-limit"
    DIXON_TERM_MATCH = "dixon-term-match"


# which negative control each identity accepts
SUPPORTED_MUTATIONS: dict[IdentityId, frozenset[Mutation]] = {
    IdentityId.FINITE_QUINTUPLE: frozenset({Mutation.DROP_LINEAR_FACTOR}),
    IdentityId.BILATERAL: frozenset({Mutation.X_POWER_2K}),
    IdentityId.QUINTUPLE_SERIES: frozenset({Mutation.EXPONENT_2C}),
    IdentityId.PRODUCT_RELATION: frozenset({Mutation.DROP_EULER_FACTOR}),
}


# exact rational, written as "p/r"
Rational = Annotated[Fraction, WithJsonSchema({"type": "string", "examples": ["-3/4"]})]


class SamplePoint(BaseModel):
    q: Rational
    x: Rational
    M: Rational

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("q")
    @classmethod
    def q_avoids_roots_of_unity(cls, v: Fraction) -> Fraction:
        if v in (0, 1, -1):
            raise ValueError(f"q must avoid 0, 1 and -1, got {v}")
        return v

    @field_serializer("q", "x", "M")
    def serialize_rational(self, v: Fraction) -> str:
        return format_rational(v)


class CoefficientWitness(BaseModel):
    q_exp: int
    x_exp: int
    lhs: str
    rhs: str


class SampleWitness(BaseModel):
    point: SamplePoint
    lhs: str
    rhs: str


class Metrics(BaseModel):
    terms: int
    max_q_deg: int
    max_x_deg: int
    elapsed_ms: float


class VerificationReport(BaseModel):
    identity: IdentityId
    params: dict[str, int | str]
    status: Literal["pass", "fail"]
    witness: Optional[CoefficientWitness | SampleWitness] = None
    metrics: Metrics

    @model_validator(mode="after")
    def failure_has_witness(self) -> "VerificationReport":
        if self.status == "fail" and self.witness is None:
            raise ValueError("A failed verification must carry a witness")
        return self

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class CoefficientRecord(BaseModel):
    q_exp: int
    x_exp: int
    coeff: str


class CommandConfig(BaseModel):
    command: Literal["verify", "expand", "coeff"]
    identity: Optional[IdentityId] = None
    expr: Optional[str] = None
    m: Optional[int] = Field(None, ge=0)
    n: Optional[int] = Field(None, ge=0)
    k: Optional[int] = None
    m_max: int = Field(10, ge=0)
    n_max: int = Field(10, ge=0)
    order: int = Field(30, ge=0)
    trials: int = Field(50, ge=1)
    seed: int = 0
    q_exp: Optional[int] = None
    x_exp: Optional[int] = None
    format: Literal["text", "json", "csv"] = "text"
    out: Optional[Path] = None
    no_timing: bool = False
    jobs: int = Field(1, ge=1)
    mutation: Optional[Mutation] = None
    verbose: bool = False

    @model_validator(mode="after")
    def check_command_fields(self) -> "CommandConfig":
        if self.command == "verify":
            if self.identity is None:
                raise ValueError("verify needs an identity")
            if self.format == "csv":
                raise ValueError("csv output is only available for expand and coeff")
            if self.mutation is not None and self.mutation not in SUPPORTED_MUTATIONS.get(
                self.identity, frozenset()
            ):
                raise ValueError(
                    f"Mutation '{self.mutation}' does not apply to {self.identity}"
                )
        else:
            if not self.expr:
                raise ValueError(f"{self.command} needs a product expression")
            if self.mutation is not None:
                raise ValueError("Mutations only apply to verify")
        if self.command == "coeff" and (self.q_exp is None or self.x_exp is None):
            raise ValueError("coeff needs both --q and --x")
        return self
