"""
Bounds Command

F, G, s(N) and their maximum for a state file.
"""

import argparse
import logging
from pathlib import Path

from pairent.api.v1.models import ReportEnvelope, RunConfig, emit, load_state
from pairent.services.bounds import best_bound

logger = logging.getLogger(__name__)


class BoundsResponse(ReportEnvelope):
    """Response model for the bounds command."""

    dim: int
    N: float
    F: float
    G: float
    s: float
    best: float


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    state = load_state(args.input)
    report = best_bound(state, config.log_base)
    emit(
        BoundsResponse(
            command="bounds",
            log_base=config.log_base,
            dim=report.dim,
            N=report.negativity,
            F=report.F,
            G=report.G,
            s=report.s,
            best=report.best,
        ),
        config.out,
    )
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("bounds", parents=parents, help="EOF lower bounds F, G and s(N)")
    parser.add_argument("--input", type=Path, required=True, help="State file (JSON)")
    parser.set_defaults(handler=run)
