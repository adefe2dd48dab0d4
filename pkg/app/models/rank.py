"""
Pydantic models for the analytic-rank endpoint
"""

from typing import Optional

from pydantic import BaseModel, Field

from app.services.lseries import RankVerdict


class RankResponse(BaseModel):
    """
    Analytic-rank verdict for C(N, p)

    estimate is one of "0", "1", "apparent-even-≥2", "apparent-odd-≥3";
    the apparent values are numerical evidence, not proofs.
    """

    N: int = Field(..., description="Level, 11 or 19")
    p: int = Field(..., description="Twisting prime")
    conductor: int = Field(..., description="N * p^2")
    sign: int = Field(..., description="Functional-equation sign (-N/p)")
    parity: str = Field(..., description="'even' or 'odd'")
    estimate: str = Field(..., description="Rank estimate")
    L1: float = Field(..., description="L(1), zero when the sign is -1")
    L1prime: float = Field(..., description="L'(1), zero when the sign is +1")
    nmax: int = Field(..., description="Number of coefficients summed")
    tau: float = Field(..., description="Zero threshold")
    defect: Optional[float] = Field(None, description="Functional-equation self-check, when requested")

    @classmethod
    def from_verdict(cls, verdict: RankVerdict, defect: float | None = None) -> "RankResponse":
        return cls(
            N=verdict.N,
            p=verdict.p,
            conductor=verdict.N * verdict.p * verdict.p,
            sign=verdict.sign,
            parity=verdict.parity,
            estimate=verdict.estimate.value,
            L1=verdict.l_value,
            L1prime=verdict.l_prime_value,
            nmax=verdict.nmax_used,
            tau=verdict.tau,
            defect=defect,
        )
