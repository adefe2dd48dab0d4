"""
Rank Router - Provides GET /api/rank
Analytic-rank verdicts for C(11, p) and C(19, p)
"""

from typing import Optional

from fastapi import APIRouter, Depends, Query

from app.models.rank import RankResponse
from app.routers.errors import bad_request, server_error
from app.services.ap_cache import ApCache, get_ap_cache
from app.services.lseries import analytic_rank, build_profile, functional_equation_defect


router = APIRouter()


@router.get("/rank", response_model=RankResponse)
def get_rank(
    level: int = Query(..., description="N, 11 or 19"),
    prime: int = Query(..., description="Twisting prime p with (N/p) = -1"),
    tau: Optional[float] = Query(None, gt=0, description="Zero threshold; defaults to RANK_TAU"),
    check: bool = Query(False, description="Also run the functional-equation self-check"),
    cache: ApCache = Depends(get_ap_cache),
):
    """
    Sign, L(1), L'(1) and the rank estimate for C(N, p)

    Large p means large conductors: the coefficient table grows like p.
    """
    try:
        verdict = analytic_rank(level, prime, tau=tau, cache=cache)
        defect = None
        if check:
            profile = build_profile(level, prime, nmax=2 * verdict.nmax_used, cache=cache)
            defect = functional_equation_defect(profile)
    except ValueError as e:
        raise bad_request(e)
    except Exception as e:
        raise server_error(e, "Rank")
    return RankResponse.from_verdict(verdict, defect)
