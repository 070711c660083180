import sys

from dotenv import load_dotenv

load_dotenv()

from program.program import Program  # noqa: E402
from program.utils.cli import handle_args  # noqa: E402
from program.utils.logging import logger, setup_logger  # noqa: E402


def main(argv: list[str] | None = None) -> int:
    args = handle_args(argv)
    setup_logger(args.log_level)
    try:
        return Program(args).run()
    except KeyboardInterrupt:
        logger.log("PROGRAM", "Exiting Gracefully.")
        return 130


if __name__ == "__main__":
    sys.exit(main())
