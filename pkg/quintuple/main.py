from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import RedirectResponse

from quintuple.expr import parse_product_expr
from quintuple.identities import Mutation
from quintuple.schema import CoefficientRecord, IdentityId, VerificationReport
from quintuple.service import (
    Check,
    VerificationService,
    VerificationServiceError,
    coefficient_of,
    coefficient_records,
    expand_products,
)

# request bounds; the CLI has none
MAX_ORDER = 200
MAX_INDEX = 40
MAX_TRIALS = 1000

app = FastAPI(title="quintuple")
verification_service = VerificationService()


@app.get("/", include_in_schema=False)
def docs_redirect():
    return RedirectResponse(url="/docs")


@app.get("/verify/{identity}")
def verify(
    identity: IdentityId,
    m: Optional[int] = Query(
        None, ge=0, le=MAX_INDEX, description="m of the finite or bilateral form"
    ),
    n: Optional[int] = Query(None, ge=0, le=MAX_INDEX, description="n of the bilateral form"),
    k: Optional[int] = Query(None, ge=-MAX_INDEX, le=MAX_INDEX, description="summand index"),
    order: Optional[int] = Query(
        None, ge=0, le=MAX_ORDER, description="q-truncation order for series identities"
    ),
    trials: Optional[int] = Query(
        None, ge=1, le=MAX_TRIALS, description="sample points for q-Dixon"
    ),
    seed: Optional[int] = Query(None, description="seed of the sample point stream"),
    power: Optional[int] = Query(
        None, ge=0, le=MAX_INDEX, description="N in the specialization M = q^-N"
    ),
    mutation: Optional[Mutation] = Query(None, description="negative-control mutation"),
) -> VerificationReport:
    """
    Runs a single check of the given identity. Each identity reads only the
    parameters it needs:

    - finite-quintuple, dixon-limit: m
    - bilateral: m, n
    - substitution-relation: m, n, k
    - quintuple-series, product-relation: order
    - qdixon-sampled: m, trials, seed
    - qdixon-specialized: m, power, trials, seed
    - dixon-term-match: m, k
    """
    try:
        check = Check.build(
            identity,
            mutation,
            m=m,
            n=n,
            k=k,
            order=order,
            trials=trials,
            seed=seed,
            power=power,
        )
        return verification_service.run(check)
    except (VerificationServiceError, ValueError) as e:
        raise HTTPException(400, str(e))


@app.get("/expand")
def expand(
    expr: str = Query(..., description="Bracket expression, e.g. [q,x,q/x;q]"),
    order: int = Query(30, ge=0, le=MAX_ORDER, description="q-truncation order"),
) -> list[CoefficientRecord]:
    """
    Coefficients of the product of the given brackets through q^order,
    sorted by (q_exp, x_exp).
    """
    try:
        return coefficient_records(expand_products(parse_product_expr(expr), order))
    except (VerificationServiceError, ValueError) as e:
        raise HTTPException(400, str(e))


@app.get("/coefficient")
def coefficient(
    expr: str = Query(..., description="Bracket expression"),
    q_exp: int = Query(..., le=MAX_ORDER),
    x_exp: int = Query(...),
    order: int = Query(30, ge=0, le=MAX_ORDER),
) -> CoefficientRecord:
    try:
        return coefficient_of(parse_product_expr(expr), q_exp, x_exp, order)
    except (VerificationServiceError, ValueError) as e:
        raise HTTPException(400, str(e))
