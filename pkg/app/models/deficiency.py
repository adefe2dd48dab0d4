"""
Pydantic models for the deficiency endpoint
"""

from typing import List, Optional

from pydantic import BaseModel, Field

from app.services.deficiency import DeficiencyReport


class PlaceStatus(BaseModel):
    place: str = Field(..., description="Prime, or 'inf'")
    status: str = Field(..., description="Deficient, NotDeficient or Unknown")
    provenance: str = Field(..., description="Rule that decided the status")


class DeficiencyResponse(BaseModel):
    """Deficient places of C(N, p); unlisted places are NotDeficient"""

    N: int
    p: int
    genus: int = Field(..., description="Genus of X_0(N)")
    obstruction_constant: Optional[int] = Field(None, description="c_N in <c_N, p*>, when defined")
    deficient: List[str] = Field(..., description="Deficient places")
    places: List[PlaceStatus]

    @classmethod
    def from_report(cls, report: DeficiencyReport) -> "DeficiencyResponse":
        return cls(
            N=report.N,
            p=report.p,
            genus=report.genus,
            obstruction_constant=report.obstruction,
            deficient=[str(v) for v in report.deficient_places()],
            places=[
                PlaceStatus(place=str(v), status=report.status(v).value, provenance=report.note(v))
                for v in report.places()
            ],
        )
