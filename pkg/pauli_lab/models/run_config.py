import json
import logging
import os
from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from .. import __version__
from ..common.utils import parse_count

logger = logging.getLogger(__name__)

# Define the directory where the run defaults are stored.
CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "configs")
DEFAULTS_FILE = os.path.join(CONFIG_DIR, "defaults.json")

SEED_ENV = "PAULI_LAB_SEED"
BUDGET_ENV = "PAULI_LAB_BUDGET"

OutputFormat = Literal["json", "csv", "text"]


class HittingDefaults(BaseModel):
    """Parameters of the hitting-lemma walk test."""
    vertices: int = Field(256, description="Vertices of the random regular graph.")
    degree: int = Field(8, description="Its degree.")
    k: int = Field(5, description="Walk length.")
    mu: float = Field(0.125, description="Density of every target set.")

    class Config:
        populate_by_name = True
        extra = "forbid"


class RunDefaults(BaseModel):
    """Pydantic model for configs/defaults.json."""
    seed: int = Field(0xC0FFEE, description="Seed for every randomised step.")
    budget: int = Field(10_000_000, description="Search budget in branch-and-bound nodes.")
    samples: int = Field(100_000, description="Monte Carlo sample count.")
    format: OutputFormat = Field("json", description="Default output format.")
    mixing_trials: int = Field(1000, description="Random (S, T) pairs per mixing check.")
    walks: int = Field(100_000, description="Random walks sampled by the hitting test.")
    hitting: HittingDefaults = Field(default_factory=HittingDefaults)

    class Config:
        populate_by_name = True
        extra = "forbid"


class RunConfig(BaseModel):
    """One invocation; echoed into every report."""
    command: str
    n: Optional[int] = Field(None, description="Number of qubits.")
    k: Optional[int] = Field(None, description="Level, repetition count or walk length.")
    seed: int
    budget: int
    format: OutputFormat = "json"
    out: Optional[str] = Field(None, description="Output path; stdout when unset.")
    suite: Optional[str] = None
    graph: Optional[str] = None
    name: Optional[str] = Field(None, description="Game name.")
    strategy: Optional[str] = None
    mode: Optional[str] = None
    samples: int = 100_000
    n_max: Optional[int] = Field(None, description="Cap on object-level n in verify suites.")
    version: str = Field(default=__version__)

    class Config:
        populate_by_name = True
        extra = "forbid"


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if not raw:
        return None
    try:
        return parse_count(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}")
        return None


def load_defaults(path: str = DEFAULTS_FILE) -> RunDefaults:
    """
    Loads the run defaults from JSON, falling back to the model defaults when the
    file is missing or malformed, then applies PAULI_LAB_SEED / PAULI_LAB_BUDGET.
    """
    defaults = RunDefaults()
    if not os.path.isfile(path):
        logger.warning(f"Defaults file not found at {path}. Using built-in defaults.")
    else:
        try:
            with open(path, "r", encoding="utf-8") as f:
                defaults = RunDefaults(**json.load(f))
            logger.debug(f"Loaded run defaults from {path}")
        except json.JSONDecodeError as e:
            logger.error(f"Failed to parse JSON from {path}: {e}")
        except ValidationError as e:
            logger.error(f"Invalid run defaults in {path}: {e}")

    seed = _env_int(SEED_ENV)
    budget = _env_int(BUDGET_ENV)
    updates = {}
    if seed is not None:
        updates["seed"] = seed
    if budget is not None:
        updates["budget"] = budget
    return defaults.model_copy(update=updates) if updates else defaults
