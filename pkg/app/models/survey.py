"""
Pydantic models for the survey and worked-example endpoints
"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from app.services.survey import ExampleCheck, SurveyConfig, SurveyResult


class SurveyRequest(BaseModel):
    """Request body for POST /api/survey"""

    bound: int = Field(..., description="Census bound X", ge=2)
    stratum: Literal["A", "B", "both"] = Field("both", description="A: p = 1 (mod 4), B: p = 3 (mod 4)")
    ranks: bool = Field(False, description="Attach analytic-rank verdicts (slow)")
    tau: Optional[float] = Field(None, description="Zero threshold; defaults to RANK_TAU", gt=0)

    def to_config(self) -> SurveyConfig:
        return SurveyConfig(bound=self.bound, stratum=self.stratum, ranks=self.ranks, tau=self.tau)


class SurveyResponse(BaseModel):
    total: int = Field(..., description="Number of census records")
    smallest: Optional[int] = Field(None, description="Smallest census prime")
    counts: Dict[str, Dict[str, int]] = Field(..., description="Per-stratum records/realized/pending")
    primes: List[int]
    paths: Dict[str, str] = Field(..., description="Written artifacts")

    @classmethod
    def from_result(cls, result: SurveyResult) -> "SurveyResponse":
        return cls(
            total=result.summary["total"],
            smallest=result.summary["smallest"],
            counts=result.summary["counts"],
            primes=[r.p for r in result.records],
            paths=result.paths,
        )


class ExampleCheckModel(BaseModel):
    name: str
    N: int
    p: int
    reconstructed: bool = Field(..., description="c_curve(N, p) could be built")
    isomorphic: bool = Field(..., description="Printed model is isomorphic to the twist")
    on_curve: bool = Field(..., description="Printed point satisfies the printed equation")
    nontorsion: bool = Field(..., description="No multiple up to torsion_bound is the identity")
    torsion_bound: int
    scale: Optional[str] = Field(None, description="u with c4' = u^4 c4, c6' = u^6 c6")
    passed: bool

    @classmethod
    def from_check(cls, check: ExampleCheck) -> "ExampleCheckModel":
        return cls(**check.__dict__, passed=check.passed)


class VerifyExamplesResponse(BaseModel):
    passed: bool
    examples: List[ExampleCheckModel]
