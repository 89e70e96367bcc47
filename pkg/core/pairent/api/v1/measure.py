"""
Measure Command

Exact measures of a state file: S and D (pure only), N and E_N.
"""

import argparse
import logging
from pathlib import Path
from typing import Optional

from pairent.api.v1.models import ReportEnvelope, RunConfig, emit, load_state
from pairent.services.measures import measure

logger = logging.getLogger(__name__)


class MeasureResponse(ReportEnvelope):
    """Response model for the measure command."""

    S: Optional[float] = None
    D: Optional[float] = None
    N: float
    E_N: float


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    state = load_state(args.input)
    report = measure(state, config.log_base)
    logger.info(f"Measured d={state.dim} state from {args.input}")
    emit(
        MeasureResponse(
            command="measure",
            log_base=config.log_base,
            S=report.entropy,
            D=report.concurrence_sum_D,
            N=report.negativity,
            E_N=report.log_negativity,
        ),
        config.out,
    )
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("measure", parents=parents, help="Entropy, concurrence sum and negativity")
    parser.add_argument("--input", type=Path, required=True, help="State file (JSON)")
    parser.set_defaults(handler=run)
