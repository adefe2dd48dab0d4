"""
Atkin-Lehner Twist Toolkit - Main FastAPI application
HTTP surface over the census, rank, local-solvability and deficiency services
"""

import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.config import settings
from app.routers import deficiency, local, number_theory, rank, survey

# Run with: uvicorn app.main:app --reload --port 8000

logging.basicConfig(
    level=settings.log_level,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)

app = FastAPI(
    title=settings.api_title,
    version=settings.api_version,
    description=settings.api_description,
)

# Read-only numerical API; local tools only
app.add_middleware(
    CORSMiddleware,
    allow_origin_regex=r"http://localhost(:\d+)?|http://127\.0\.0\.1(:\d+)?",
    allow_credentials=False,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)

app.include_router(number_theory.router, prefix="/api", tags=["number-theory"])
app.include_router(rank.router, prefix="/api", tags=["rank"])
app.include_router(local.router, prefix="/api", tags=["local"])
app.include_router(deficiency.router, prefix="/api", tags=["deficiency"])
app.include_router(survey.router, prefix="/api", tags=["survey"])


@app.get("/")
async def root():
    """
    Service information and endpoint map
    """
    return {
        "status": "ok",
        "service": settings.api_title,
        "version": settings.api_version,
        "endpoints": {
            "classno": "/api/classno",
            "conjecture": "/api/conjecture",
            "rank": "/api/rank",
            "local": "/api/local",
            "deficiency": "/api/deficiency",
            "survey": "/api/survey",
            "verify_examples": "/api/verify-examples",
            "docs": "/docs",
        }
    }


@app.get("/health")
async def health_check():
    """
    Health check endpoint for monitoring
    """
    return {
        "status": "healthy",
        "service": settings.api_title
    }
