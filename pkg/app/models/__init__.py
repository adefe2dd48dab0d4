"""Pydantic models for API requests and responses"""

from app.models.deficiency import DeficiencyResponse, PlaceStatus
from app.models.local import LocalSolveResponse, ResidueNodeModel
from app.models.number_theory import ClassNumberResponse, ConjectureResponse
from app.models.rank import RankResponse
from app.models.survey import (
    ExampleCheckModel,
    SurveyRequest,
    SurveyResponse,
    VerifyExamplesResponse,
)

__all__ = [
    "ClassNumberResponse",
    "ConjectureResponse",
    "DeficiencyResponse",
    "ExampleCheckModel",
    "LocalSolveResponse",
    "PlaceStatus",
    "RankResponse",
    "ResidueNodeModel",
    "SurveyRequest",
    "SurveyResponse",
    "VerifyExamplesResponse",
]
