import argparse
import logging
import sys
from typing import List, Optional

from chainmap import __version__
from chainmap.commands import app, build, color, hom
from chainmap.commands import map as map_command
from chainmap.commands.common import RunContext
from chainmap.core.config import settings
from chainmap.core.errors import EXIT_OK, EXIT_USAGE, ChainMapError, exit_code_for
from chainmap.services.exporters import canonical_json

logger = logging.getLogger("chainmap")


def configure_logging(level_name: Optional[str] = None) -> None:
    """Configura logging basato su settings (o sul flag --log-level); i log vanno su stderr"""
    level_name = level_name or settings.log_level
    log_level = getattr(logging, level_name.upper(), logging.INFO)
    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
        force=True  # Forza la riconfigurazione anche se già configurato
    )
    logger.setLevel(log_level)
    logger.debug(f"Logging configured with level: {level_name}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainmap",
        description="Mappe di catene tra complessi simpliciali: classi di omotopia, ottimizzazione, applicazioni.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=settings.default_seed, help="Seme globale (default 0)")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)
    parser.add_argument("--output-dir", help=f"Cartella degli artefatti (default {settings.data_output_path})")

    subparsers = parser.add_subparsers(dest="command", required=True)
    # L'ordine determina l'help
    build.register(subparsers)
    hom.register(subparsers)
    map_command.register(subparsers)
    app.register(subparsers)
    color.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    configure_logging(args.log_level)
    ctx = RunContext(argv, args.seed, args.output_dir)
    try:
        result = args.handler(args, ctx)
    except ChainMapError as e:
        code = exit_code_for(e)
        logger.error(f"{type(e).__name__}: {e} (exit code {code})")
        return code

    sys.stdout.write(canonical_json(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
