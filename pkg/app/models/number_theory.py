"""
Pydantic models for the class-number and conjecture endpoints
"""

from pydantic import BaseModel, Field


class ClassNumberResponse(BaseModel):
    """Response for GET /api/classno"""

    discriminant: int = Field(..., description="Negative discriminant D = 0, 1 (mod 4)")
    class_number: int = Field(..., description="Number of reduced primitive positive-definite forms of discriminant D")


class ConjectureResponse(BaseModel):
    """
    Response for GET /api/conjecture
    F(X) = #{p <= X, p != 3, p = m (mod M) : 3 does not divide h(Q(sqrt(-3p)))}
    """

    bound: int = Field(..., description="X")
    residue: int = Field(..., description="m")
    modulus: int = Field(..., description="M")
    count: int = Field(..., description="F(X)")
