"""
Local Router - Provides GET /api/local
Local solvability of the genus-one model of C(17, p)
"""

from typing import Literal

from fastapi import APIRouter, Query

from app.models.local import LocalSolveResponse
from app.routers.errors import bad_request, server_error
from app.services.arith import Place
from app.services.localsolve import (
    ORACLE_LIMIT,
    c17_model,
    exhaustive_oracle,
    local_search,
    solvable_real,
)


router = APIRouter()


@router.get("/local", response_model=LocalSolveResponse)
def get_local(
    prime: int = Query(..., description="Twisting prime p with (17/p) = -1"),
    at: str = Query(..., description="Place: a prime l, or 'inf'"),
    quartic: Literal["c17"] = Query("c17", description="Model family"),
    oracle: bool = Query(False, description="Confirm insolubility by exhaustive search"),
):
    """
    Does C(17, p) have points over Q_l (or R)?

    Insoluble answers carry the residue-class certificate and the congruence
    depth at which exhaustive_oracle sees the same answer.
    """
    try:
        model = c17_model(prime)
        place = Place.parse(at)
        if place.is_infinite:
            return LocalSolveResponse(model=str(model), place=str(place), solvable=solvable_real(model))

        result = local_search(model, place.prime)
        confirmed = None
        if oracle and not result.solvable and place.prime ** result.precision <= ORACLE_LIMIT:
            confirmed = not exhaustive_oracle(model, place.prime, result.precision)
    except ValueError as e:
        raise bad_request(e)
    except Exception as e:
        raise server_error(e, "LocalSolve")
    return LocalSolveResponse.from_search(model, result, oracle=confirmed)
