from datetime import datetime, timezone
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from .. import __version__


class CountReport(BaseModel):
    """Closed-form and enumerated size of one level of L^n."""
    n: int = Field(..., description="Number of qubits.")
    k: int = Field(..., description="Level (subspace dimension).")
    closed_form: int = Field(..., description="Level size from the product formula.")
    enumerated: Optional[int] = Field(None, description="Size found by enumeration (n <= 4 only).")
    fixture_path: Optional[str] = Field(None, description="Where the enumerated subspaces were written, if requested.")

    class Config:
        populate_by_name = True
        extra = "forbid"


class SpectrumReport(BaseModel):
    """Adjacency spectrum of a graph, with its spectral parameter and ratio."""
    graph: str = Field(..., description="Graph tag (gwp, gw, b, sn, random, walk, ...).")
    n: Optional[int] = Field(None, description="Number of qubits the graph is built over.")
    vertex_count: int = Field(..., description="Number of vertices (for b: the side whose Gram matrix was diagonalised).")
    eigenvalues: List[float] = Field(..., description="All eigenvalues, sorted descending.")
    max_eigenvalue: float = Field(..., description="Largest eigenvalue.")
    spectral_parameter: float = Field(..., description="Second largest distinct absolute eigenvalue.")
    spectral_ratio: float = Field(..., description="spectral_parameter / max_eigenvalue.")
    method: Literal["closed-form", "numeric"] = Field("numeric", description="How the eigenvalues were obtained.")
    residual: float = Field(0.0, description="Largest eigenpair residual ||Av - λv||.")
    integral: bool = Field(False, description="Whether every eigenvalue snapped to an integer.")
    notes: List[str] = Field(default_factory=list, description="Erratum and cross-check notes.")

    class Config:
        populate_by_name = True
        extra = "forbid"

    def multiplicities(self) -> List[Tuple[float, int]]:
        out: List[Tuple[float, int]] = []
        for value in self.eigenvalues:
            if out and abs(out[-1][0] - value) < 1e-6:
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((value, 1))
        return out


class SolveReport(BaseModel):
    """Result of an exact or bounded search. Heuristic results are bounds, never optima."""
    problem: str = Field(..., description="Which quantity was solved for.")
    n: int = Field(..., description="Number of qubits.")
    optimum: Optional[float] = Field(None, description="The optimum when the search closed.")
    optimum_exact: Optional[str] = Field(None, description="The optimum as an exact fraction.")
    lower: float = Field(..., description="Certified lower bound.")
    upper: float = Field(..., description="Certified upper bound.")
    certificate: List[str] = Field(default_factory=list, description="Certificate lines in the outcome fixture format.")
    certificate_path: Optional[str] = Field(None, description="File the certificate was written to.")
    nodes: int = Field(0, description="Search nodes expanded.")
    wall_time: float = Field(0.0, description="Seconds spent.")
    proof_closed: bool = Field(False, description="True iff the search finished and the optimum is proven.")
    details: Dict[str, Any] = Field(default_factory=dict, description="Problem-specific extras.")

    class Config:
        populate_by_name = True
        extra = "forbid"

    @model_validator(mode="after")
    def _ordered(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        return self


class ValueEstimate(BaseModel):
    """A game value: exact over the full question set, or a Monte Carlo mean with a Wilson interval."""
    value: float = Field(..., description="Exact value or Monte Carlo mean.")
    exact: Optional[str] = Field(None, description="Exact rational value, when fully iterated.")
    ci_low: Optional[float] = Field(None, description="Lower end of the 99% Wilson interval.")
    ci_high: Optional[float] = Field(None, description="Upper end of the 99% Wilson interval.")
    samples: Optional[int] = Field(None, description="Monte Carlo sample count.")
    seed: Optional[int] = Field(None, description="Seed of the sampler.")

    class Config:
        populate_by_name = True
        extra = "forbid"

    @model_validator(mode="after")
    def _exact_has_no_interval(self):
        if self.exact is not None and (self.ci_low is not None or self.ci_high is not None):
            raise ValueError("exact values carry no interval")
        return self

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def contains(self, target: float, slack: float = 1e-9) -> bool:
        if self.is_exact:
            return abs(self.value - target) <= slack
        return self.ci_low - slack <= target <= self.ci_high + slack


class GameResult(BaseModel):
    game: str = Field(..., description="Game name (z1, z_half, agreement, z1^k).")
    n: int = Field(..., description="Number of qubits.")
    strategy: str = Field(..., description="Strategy kind.")
    mode: Literal["exact", "mc"] = Field(..., description="Evaluation mode.")
    estimate: ValueEstimate

    class Config:
        populate_by_name = True
        extra = "forbid"


class CheckResult(BaseModel):
    suite: str
    name: str
    status: Literal["pass", "pass-with-note", "fail"]
    note: Optional[str] = Field(None, description="Why the check failed, or the erratum it surfaces.")
    detail: Dict[str, Any] = Field(default_factory=dict)

    class Config:
        extra = "forbid"

    @property
    def ok(self) -> bool:
        return self.status != "fail"


class VerifyReport(BaseModel):
    suite: str
    n_max: int
    checks: List[CheckResult] = Field(default_factory=list)

    class Config:
        extra = "forbid"

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)


class BoundChainReport(BaseModel):
    """A numeric inequality chain evaluated with exact counts."""
    name: str = Field(..., description="Which chain.")
    n: int
    terms: Dict[str, float] = Field(default_factory=dict, description="Every quantity in the chain.")
    holds: bool = Field(..., description="Whether every link of the chain held.")
    notes: List[str] = Field(default_factory=list)

    class Config:
        extra = "forbid"


class WalkReport(BaseModel):
    """The walk construction pipeline on L^n."""
    n: int
    k: int = Field(..., description="Walk length.")
    degree: int = Field(..., description="Degree d of the random regular graph R.")
    seed: int
    vertex_count: int = Field(..., description="|V(W)|.")
    theta: float = Field(..., description="θ(W), certified by a clique cover and a representation sum.")
    alpha_lower: int = Field(..., description="Best independent set found in W.")
    alpha_exact: bool = Field(..., description="Whether alpha_lower is the proven optimum.")
    t_estimate: float = Field(..., description="T(W) from alpha_lower; an upper estimate unless alpha_exact.")
    lambda_over_d: float = Field(..., description="Measured spectral ratio of R.")
    ratio_bound: float = Field(..., description="(P + (λ/d)(1 - P))^k.")
    t_lower_bound: float = Field(..., description="-log(ratio_bound) / log|V(W)|.")

    class Config:
        extra = "forbid"


class ReportEnvelope(BaseModel):
    report: str = Field(..., description="Payload kind.")
    version: str = Field(default=__version__)
    generated_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    config: Dict[str, Any] = Field(default_factory=dict, description="The run configuration, echoed.")
    payload: Dict[str, Any]

    class Config:
        extra = "forbid"


def envelope(report: str, payload: BaseModel, config: Optional[BaseModel] = None) -> ReportEnvelope:
    return ReportEnvelope(
        report=report,
        config=config.model_dump(mode="json") if config is not None else {},
        payload=payload.model_dump(mode="json"),
    )
