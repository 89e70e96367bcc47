"""
Convexity Command

Runs the Sylvester grid scan and, on request, finite-difference Hessian
checks of F at random interior points. Exits 0 only when the certificate
passes.
"""

import argparse
import logging
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import Field

from pairent.api.v1.models import ReportEnvelope, RunConfig, emit
from pairent.errors import CertificationFailure
from pairent.services import convexity
from pairent.services.ensembles import derive_seed
from pairent.services.figures import determinant_heatmap

logger = logging.getLogger(__name__)


class CertificateResponse(ReportEnvelope):
    """Response model for the convexity command."""

    grid_size: int
    margin: float
    min_alpha: float
    min_eta: float
    min_det: float
    det_monotone_in_r: bool
    passed: bool = Field(serialization_alias="pass")
    failures: List[List[float]] = []
    hessian_min_eigenvalue: Optional[Dict[str, float]] = None


def hessian_minima(points: int, seed: int, base: str) -> Dict[str, float]:
    """Smallest finite-difference Hessian eigenvalue of F per d in 2..5."""
    minima = {}
    for dim in range(2, 6):
        sample = convexity.random_interior_points(dim, points, derive_seed(seed, dim))
        minima[str(dim)] = min(convexity.hessian_fd_check(v, base) for v in sample)
    return minima


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    certificate = convexity.scan_grid(config.grid_size, config.grid_eps, config.log_base)
    if args.csv is not None:
        rows = convexity.write_heatmap_csv(config.grid_size, config.grid_eps, args.csv, config.log_base)
        logger.info(f"Wrote {rows} grid rows to {args.csv}")
    if args.svg is not None:
        determinant_heatmap(config.grid_size, config.grid_eps, args.svg, config.log_base)

    minima = None
    passed = certificate.passed
    if args.hessian_points:
        minima = hessian_minima(args.hessian_points, config.seed, config.log_base)
        passed = passed and min(minima.values()) >= -1e-6

    emit(
        CertificateResponse(
            command="convexity",
            log_base=config.log_base,
            seed=config.seed if args.hessian_points else None,
            grid_size=certificate.grid_size,
            margin=certificate.margin,
            min_alpha=certificate.min_alpha,
            min_eta=certificate.min_eta,
            min_det=certificate.min_det,
            det_monotone_in_r=certificate.det_monotone_in_r,
            passed=passed,
            failures=[list(point) for point in certificate.failures],
            hessian_min_eigenvalue=minima,
        ),
        config.out,
    )
    if not passed:
        logger.error("Convexity certificate failed")
        return CertificationFailure.exit_code
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("convexity", parents=parents, help="Certify the convexity of F")
    parser.add_argument("--grid", dest="grid_size", type=int, help="Points per grid axis (>= 100)")
    parser.add_argument("--eps", dest="grid_eps", type=float, help="Distance kept from the domain edges")
    parser.add_argument("--csv", type=Path, help="Write alpha, eta and det for every grid point")
    parser.add_argument("--svg", type=Path, help="Write a determinant heatmap")
    parser.add_argument(
        "--hessian-points", type=int, default=0, help="Random interior Hessian checks per d in 2..5"
    )
    parser.set_defaults(handler=run)
