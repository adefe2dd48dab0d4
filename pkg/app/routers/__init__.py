"""API routers"""

from app.routers import deficiency, local, number_theory, rank, survey

__all__ = ["deficiency", "local", "number_theory", "rank", "survey"]
