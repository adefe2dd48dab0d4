"""
Survey Router - Provides POST /api/survey and GET /api/verify-examples
"""

from fastapi import APIRouter, Depends

from app.models.survey import (
    ExampleCheckModel,
    SurveyRequest,
    SurveyResponse,
    VerifyExamplesResponse,
)
from app.routers.errors import bad_request, server_error
from app.services.survey import (
    SurveyService,
    get_survey_service,
    verify_examples,
)


router = APIRouter()


@router.post("/survey", response_model=SurveyResponse)
def post_survey(
    request: SurveyRequest,
    survey_service: SurveyService = Depends(get_survey_service),
):
    """
    Run a census survey and write census.csv, census.json, summary.json
    under OUTPUT_DIR

    With ranks=true every record gets L-series verdicts; expect minutes for
    bounds in the tens of thousands.
    """
    try:
        result = survey_service.run(request.to_config())
    except ValueError as e:
        raise bad_request(e)
    except Exception as e:
        raise server_error(e, "Survey")
    return SurveyResponse.from_result(result)


@router.get("/verify-examples", response_model=VerifyExamplesResponse)
def get_verify_examples():
    """Check both worked examples: twist, isomorphism, point on curve, nontorsion"""
    try:
        checks = verify_examples()
    except Exception as e:
        raise server_error(e, "Survey")
    return VerifyExamplesResponse(
        passed=all(c.passed for c in checks),
        examples=[ExampleCheckModel.from_check(c) for c in checks],
    )
