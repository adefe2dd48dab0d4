"""
Deficiency Router - Provides GET /api/deficiency
"""

from fastapi import APIRouter, Query

from app.models.deficiency import DeficiencyResponse
from app.routers.errors import bad_request, server_error
from app.services.deficiency import classify


router = APIRouter()


@router.get("/deficiency", response_model=DeficiencyResponse)
def get_deficiency(
    level: int = Query(..., description="Squarefree level N"),
    prime: int = Query(..., description="Odd prime p with (N/p) = -1"),
):
    """Deficient places of C(N, p) with the rule that decided each one"""
    try:
        report = classify(level, prime)
    except ValueError as e:
        raise bad_request(e)
    except Exception as e:
        raise server_error(e, "Deficiency")
    return DeficiencyResponse.from_report(report)
