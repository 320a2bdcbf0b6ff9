"""
Hidden-Neuron Advisor - Main Entry Point
Recommends the hidden-layer size of an Extreme Learning Machine from dataset meta-features.
"""

import argparse
import sys
from typing import List, Optional

from loguru import logger

from config import EXIT_OK, EXIT_RUNTIME, LOG_LEVEL, MESSAGES, TOOL_VERSION
from exceptions import AdvisorError

# Remove default handler and add custom one; stdout stays clean for data
logger.remove()
logger.add(
    sys.stderr,
    level=LOG_LEVEL,
    format="<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
)

from handlers import (
    register_ingest,
    register_features,
    register_sweep,
    register_metabase,
    register_meta,
    register_report,
    register_pipeline,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elm-advisor",
        description="Meta-learning advisor for the hidden-neuron count of ELM networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Register subcommands in pipeline order
    register_ingest(subparsers)
    register_features(subparsers)
    register_sweep(subparsers)
    register_metabase(subparsers)
    register_meta(subparsers)
    register_report(subparsers)
    register_pipeline(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and run one subcommand.

    Returns:
        0 on success, 1 on validation errors, 2 on runtime failures
    """
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args) or EXIT_OK
    except AdvisorError as e:
        # Our own exceptions carry a short user message and an exit code
        logger.warning(f"{type(e).__name__}: {e.message}")
        logger.error(e.user_message)
        return e.exit_code
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_RUNTIME
    except Exception as e:
        logger.opt(exception=e).error(f"{type(e).__name__}: {e}")
        logger.error(MESSAGES["unexpected_error"])
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
