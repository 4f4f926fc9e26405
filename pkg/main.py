from __future__ import annotations

import logging
import sys

from complexpath.cli import exit_code, run
from complexpath.config import LOG_LEVEL


def configure_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
    )


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    try:
        return run(argv)
    except Exception as exc:
        code = exit_code(exc)
        if code == 1:
            logging.getLogger(__name__).exception("Application error")
        else:
            logging.getLogger(__name__).error("%s", exc)
        print(f"Error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
