"""
Shared CLI Models

File formats, the resolved run configuration and the report envelope every
command prints.
"""

import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from pairent import __version__
from pairent.config import settings
from pairent.errors import DimensionMismatch, UsageError
from pairent.services.pairstate import PairDensityMatrix, PurePairState, make_density, make_pure

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"


class StateFile(BaseModel):
    """State file: separate real and imaginary arrays, imag optional."""

    kind: Literal["pure", "mixed"]
    dim: int = Field(ge=2)
    real: Union[List[float], List[List[float]]]
    imag: Optional[Union[List[float], List[List[float]]]] = None

    def to_state(self) -> Union[PurePairState, PairDensityMatrix]:
        real = np.asarray(self.real, dtype=float)
        imag = np.zeros_like(real) if self.imag is None else np.asarray(self.imag, dtype=float)
        if imag.shape != real.shape:
            raise DimensionMismatch(f"imag shape {imag.shape} differs from real shape {real.shape}")
        values = real + 1j * imag
        if self.kind == "pure":
            if values.ndim != 1:
                raise DimensionMismatch(f"Pure state needs a vector, got shape {values.shape}")
            return make_pure(self.dim, values)
        if values.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"Expected a {self.dim}x{self.dim} matrix, got {values.shape}")
        return make_density(values)


class RunConfig(BaseModel):
    """Settings merged with command-line flags; echoed into reports."""

    log_base: Literal["2", "e"] = settings.log_base
    seed: int = settings.seed
    threads: int = Field(default=settings.threads, ge=1)
    num_samples: int = Field(default=settings.num_samples, ge=0)
    members: Optional[int] = Field(default=settings.members, ge=1)
    grid_size: int = Field(default=settings.grid_size, ge=100)
    grid_eps: float = Field(default=settings.grid_eps, gt=0.0, le=1e-3)
    restarts: int = Field(default=settings.restarts, ge=1)
    iters: int = Field(default=settings.iters, ge=1)
    tail_threshold: float = Field(default=settings.tail_threshold, gt=0.0, le=1e-6)
    out: Optional[Path] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Take every flag the command defined and left non-None."""
        overrides = {
            name: value
            for name, value in vars(args).items()
            if name in cls.model_fields and value is not None
        }
        try:
            return cls(**overrides)
        except ValidationError as e:
            raise UsageError(str(e)) from e


class ReportEnvelope(BaseModel):
    """Reproducibility header carried by every JSON output."""

    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__
    command: str
    log_base: str
    seed: Optional[int] = None


class ErrorResponse(BaseModel):
    status: Literal["error"] = "error"
    reason: str
    detail: str
    diagnostics: Optional[Dict[str, Any]] = None


def load_state(path: Path) -> Union[PurePairState, PairDensityMatrix]:
    """
    Read and validate a state file.

    Raises:
        UsageError: if the file cannot be read or does not match StateFile
        PairEntError subclasses: if the state fails validation
    """
    try:
        raw = Path(path).read_text(encoding="utf-8")
        state_file = StateFile.model_validate_json(raw)
    except OSError as e:
        raise UsageError(f"Cannot read {path}: {e}") from e
    except ValidationError as e:
        raise UsageError(f"{path} is not a valid state file: {e.error_count()} errors") from e
    logger.debug(f"Loaded {state_file.kind} state with d={state_file.dim} from {path}")
    return state_file.to_state()


def emit(report: BaseModel, out: Optional[Path] = None) -> str:
    """Print the report as JSON and optionally write it to out."""
    text = json.dumps(report.model_dump(mode="json", by_alias=True), indent=2)
    print(text)
    if out is not None:
        try:
            Path(out).write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            raise UsageError(f"Cannot write {out}: {e}") from e
    return text
