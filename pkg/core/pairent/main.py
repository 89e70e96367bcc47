"""
Command-line entry point.

Builds the top-level parser, includes every command router and maps
library errors to exit codes: 0 success, 1 usage or I/O, 2 validation,
3 certification failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pairent import __version__
from pairent.api.v1 import bounds
from pairent.api.v1 import convexity
from pairent.api.v1 import measure
from pairent.api.v1 import oracle
from pairent.api.v1 import sample
from pairent.api.v1 import squeezed
from pairent.api.v1.models import ErrorResponse
from pairent.config import settings
from pairent.errors import PairEntError, UsageError

logger = logging.getLogger(__name__)

ROUTERS = (measure, bounds, convexity, sample, squeezed, oracle)


class CliParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(UsageError.exit_code, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    common = CliParser(add_help=False)
    common.add_argument("--log-base", choices=["2", "e"], help="Logarithm base (default 2)")
    common.add_argument("--seed", type=int, help="Root seed for every random draw")
    common.add_argument("--out", type=Path, help="Output file")

    parser = CliParser(prog="pairent", description="Entanglement measures and EOF bounds for pair-basis states")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for router in ROUTERS:
        router.register(subparsers, [common])
    return parser


def _fail(error: PairEntError) -> int:
    body = ErrorResponse(
        reason=error.reason,
        detail=error.detail,
        diagnostics=getattr(error, "diagnostics", None),
    )
    print(json.dumps(body.model_dump(mode="json", exclude_none=True)))
    logger.error(f"{error.reason}: {error.detail}")
    return error.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=logging.DEBUG if settings.debug else settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except PairEntError as e:
        return _fail(e)


if __name__ == "__main__":
    sys.exit(main())
