"""
Oracle Command

Numerical convex-roof EOF of a small state file (d <= 4), certified against
the F, G and s lower bounds.
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pairent.api.v1.models import ReportEnvelope, RunConfig, emit, load_state
from pairent.config import settings
from pairent.services.oracle import certify_bounds
from pairent.services.pairstate import PurePairState, density_of_pure

logger = logging.getLogger(__name__)


class RoofResponse(ReportEnvelope):
    """Response model for the oracle command."""

    eof_estimate: float
    F: float
    G: float
    s: float
    best: float
    gaps: Dict[str, float]
    restarts_used: int
    converged: bool
    members: int
    rank: int
    wootters: Optional[float] = None
    decomposition: Dict[str, Any]


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    state = load_state(args.input)
    rho = density_of_pure(state) if isinstance(state, PurePairState) else state
    report = certify_bounds(
        rho,
        members=args.members if args.members is not None else settings.roof_members,
        restarts=config.restarts,
        iters=config.iters,
        seed=config.seed,
        base=config.log_base,
        threads=config.threads,
    )
    roof = report.roof.to_dict()
    emit(
        RoofResponse(
            command="oracle",
            log_base=config.log_base,
            seed=config.seed,
            eof_estimate=report.roof.eof_estimate,
            F=report.bounds.F,
            G=report.bounds.G,
            s=report.bounds.s,
            best=report.bounds.best,
            gaps=report.gaps,
            restarts_used=report.roof.restarts_used,
            converged=report.roof.converged,
            members=report.roof.members,
            rank=report.roof.rank,
            wootters=report.wootters,
            decomposition=roof["decomposition"],
        ),
        config.out,
    )
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("oracle", parents=parents, help="Convex-roof EOF for d <= 4")
    parser.add_argument("--input", type=Path, required=True, help="State file (JSON)")
    parser.add_argument("--restarts", type=int, help="Maximum random restarts")
    parser.add_argument("--iters", type=int, help="Coordinate sweeps per restart")
    parser.add_argument("--members", type=int, help="Decomposition size K (default: rank + 2)")
    parser.set_defaults(handler=run)
