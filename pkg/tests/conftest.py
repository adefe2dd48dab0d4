"""Shared fixtures: an in-memory a_ell cache and a scratch output directory"""

import random

import pytest

from app.services import ap_cache, survey
from app.services.ap_cache import ApCache


@pytest.fixture(scope="session")
def memory_cache() -> ApCache:
    return ApCache(None)


@pytest.fixture(autouse=True)
def isolated_cache(monkeypatch, memory_cache):
    """Keep tests off the on-disk cache"""
    monkeypatch.setattr(ap_cache, "_default_cache", memory_cache)
    monkeypatch.setattr(survey, "_survey_service", None)
    return memory_cache


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    out = tmp_path / "output"
    monkeypatch.setattr(survey, "_survey_service", survey.SurveyService(out, workers=1))
    return out


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
