import argparse
import logging
import sys

from dotenv import load_dotenv

from core.errors import ConfigError, FuncMechError, OutputError
from core.log_setup import configure_logging
from scenario_schema.models import ScenarioKind
from scenarios import load_config, run_scenario, with_overrides

logger = logging.getLogger(__name__)

VALIDATE = "validate"


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description="Run a phase-space or measurement scenario")
    commands = parser.add_subparsers(dest="command", required=True)
    for name in [*(kind.value for kind in ScenarioKind), VALIDATE]:
        sub = commands.add_parser(
            name, help="Parse the config only" if name == VALIDATE else f"Run the {name} scenario"
        )
        sub.add_argument("--config", required=True, help="Path to the scenario TOML file")
        sub.add_argument("--output-dir", default=None, help="Override [scenario] output_dir")
        sub.add_argument("--seed", type=int, default=None, help="Override [scenario] seed")
        sub.add_argument(
            "-v", "--verbose", action="count", default=0, help="Log at DEBUG level"
        )
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    configure_logging(args.verbose)
    try:
        cfg = with_overrides(load_config(args.config), args.output_dir, args.seed)
        if args.command == VALIDATE:
            logger.info("%s: valid %s config", args.config, cfg.scenario.kind)
            return 0
        if cfg.scenario.kind != args.command:
            raise ConfigError(
                f"Subcommand {args.command!r} does not match config kind "
                f"{cfg.scenario.kind.value!r}"
            )
        report = run_scenario(cfg)
    except FuncMechError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return e.exit_code
    except OSError as e:
        logger.error("I/O error: %s", e)
        return OutputError.exit_code
    for emitted in report.files:
        print(f"{emitted.role:>14}  {report.output_dir}/{emitted.path}")
    return 0


if __name__ == "__main__":
    load_dotenv()
    sys.exit(main())
