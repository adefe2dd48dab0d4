"""
Number-theory Router - Provides /api/classno and /api/conjecture
"""

from fastapi import APIRouter, Query

from app.models.number_theory import ClassNumberResponse, ConjectureResponse
from app.routers.errors import bad_request, server_error
from app.services.arith import class_number
from app.services.survey import conjecture_count


router = APIRouter()


@router.get("/classno", response_model=ClassNumberResponse)
def get_class_number(disc: int = Query(..., description="Negative discriminant D = 0, 1 (mod 4)")):
    """Class number h(D) by counting reduced forms"""
    try:
        return ClassNumberResponse(discriminant=disc, class_number=class_number(disc))
    except ValueError as e:
        raise bad_request(e, "Invalid discriminant")
    except Exception as e:
        raise server_error(e, "ClassNumber")


@router.get("/conjecture", response_model=ConjectureResponse)
def get_conjecture_count(
    bound: int = Query(..., ge=2, description="X"),
    residue: int = Query(..., description="m"),
    modulus: int = Query(..., ge=1, description="M"),
):
    """
    F(X): primes p <= X, p = m (mod M), with h(Q(sqrt(-3p))) prime to 3
    """
    try:
        count = conjecture_count(bound, residue, modulus)
    except ValueError as e:
        raise bad_request(e)
    except Exception as e:
        raise server_error(e, "Conjecture")
    return ConjectureResponse(bound=bound, residue=residue, modulus=modulus, count=count)
