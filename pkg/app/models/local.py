"""
Pydantic models for the local-solvability endpoint
"""

from typing import List, Optional

from pydantic import BaseModel, Field

from app.services.localsolve import LocalSearchResult, QuarticModel, ResidueNode


class ResidueNodeModel(BaseModel):
    chart: str = Field(..., description="'affine' (x in Z_l) or 'reciprocal' (x = 1/t, t in lZ_l)")
    residue: int
    depth: int = Field(..., description="The class is residue mod l^depth")
    status: str = Field(..., description="square, nonsquare, root, hensel or split")
    value_valuation: Optional[int] = None

    @classmethod
    def from_node(cls, node: ResidueNode) -> "ResidueNodeModel":
        return cls(**node.__dict__)


class LocalSolveResponse(BaseModel):
    """
    Response for GET /api/local

    For ell = infinity only `solvable` is meaningful.
    """

    model: str = Field(..., description="The quartic model d*y^2 = P(x)")
    place: str = Field(..., description="Prime l, or 'inf'")
    solvable: bool
    depth_bound: Optional[int] = None
    precision: Optional[int] = Field(None, description="Congruence depth at which insolubility is visible")
    oracle: Optional[bool] = Field(None, description="exhaustive_oracle at `precision`, when requested")
    witness: Optional[ResidueNodeModel] = None
    certificate: List[ResidueNodeModel] = Field(default_factory=list)

    @classmethod
    def from_search(cls, model: QuarticModel, result: LocalSearchResult,
                    oracle: bool | None = None) -> "LocalSolveResponse":
        return cls(
            model=str(model),
            place=str(result.ell),
            solvable=result.solvable,
            depth_bound=result.depth_bound,
            precision=None if result.solvable else result.precision,
            oracle=oracle,
            witness=None if result.witness is None else ResidueNodeModel.from_node(result.witness),
            certificate=[ResidueNodeModel.from_node(n) for n in result.nodes],
        )
