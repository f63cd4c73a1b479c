"""
imginfo - command-line entry point.

Information content analysis of grayscale images: multi-stage pyramid,
local information maps, top-down segmentation and per-level object lists.
"""
import argparse
import logging
import sys
from typing import List, Optional
from app.commands import lowlevel, pyramid, segment
from app.config import settings
from app.exceptions import ImageInfoError

logger = logging.getLogger(__name__)


def create_parser() -> argparse.ArgumentParser:
    """Build the argument parser with every subcommand registered."""
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Image information content: pyramid, low-level maps, segmentation and object lists.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="log progress to standard error (-vv for debug detail)",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    
    # Register commands
    pyramid.register(subparsers)
    lowlevel.register(subparsers)
    segment.register(subparsers)
    return parser


def configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.
    
    Returns:
        int: 0 on success, 1 on processing errors, 2 on usage errors
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except ImageInfoError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        logger.debug("I/O failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
