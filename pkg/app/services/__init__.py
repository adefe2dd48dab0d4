"""Arithmetic, L-series, local-solvability, deficiency and survey services"""

from app.services.ap_cache import ApCache, get_ap_cache
from app.services.survey import SurveyService, get_survey_service

__all__ = ["ApCache", "SurveyService", "get_ap_cache", "get_survey_service"]
