"""
Squeezed Command

Closed-form S, F and N of two-mode squeezed states over an r range, as CSV,
plus optional truncation checks at chosen r values.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pairent.api.v1.models import ReportEnvelope, RunConfig, emit
from pairent.errors import UsageError
from pairent.services import squeezed
from pairent.services.figures import squeezed_figure

logger = logging.getLogger(__name__)


class TruncationResponse(ReportEnvelope):
    """Response model for --check runs."""

    tail_threshold: float
    checks: List[Dict[str, Any]]
    csv: Optional[str] = None


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    if args.r_min < 0.0 or args.r_min >= args.r_max:
        raise UsageError(f"Need 0 <= --r-min < --r-max, got {args.r_min} and {args.r_max}")
    if args.steps < 2:
        raise UsageError(f"--steps must be >= 2, got {args.steps}")

    rows = squeezed.sweep_curve(
        args.r_min, args.r_max, args.steps, config.log_base, config.tail_threshold, config.threads
    )
    if config.out is not None:
        try:
            squeezed.write_curve_csv(rows, config.out)
        except OSError as e:
            raise UsageError(f"Cannot write {config.out}: {e}") from e
        logger.info(f"Wrote {len(rows)} rows to {config.out}")
    elif not args.check:
        squeezed.write_curve_rows(rows, sys.stdout)

    if args.svg is not None:
        squeezed_figure(rows, args.svg, config.log_base)

    if args.check:
        checks = [
            squeezed.verify_against_truncation(r, config.tail_threshold, config.log_base).to_dict()
            for r in args.check
        ]
        emit(
            TruncationResponse(
                command="squeezed",
                log_base=config.log_base,
                tail_threshold=config.tail_threshold,
                checks=checks,
                csv=str(config.out) if config.out is not None else None,
            )
        )
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("squeezed", parents=parents, help="Two-mode squeezed state curves")
    parser.add_argument("--r-min", type=float, default=0.0, help="Smallest squeezing parameter")
    parser.add_argument("--r-max", type=float, default=3.0, help="Largest squeezing parameter")
    parser.add_argument("--steps", type=int, default=300, help="Number of r values (>= 2)")
    parser.add_argument("--tail", dest="tail_threshold", type=float, help="Truncation tail threshold")
    parser.add_argument(
        "--check", type=float, action="append", help="Verify truncated states at this r (repeatable)"
    )
    parser.add_argument("--svg", type=Path, help="Write the S and F curves")
    parser.set_defaults(handler=run)
