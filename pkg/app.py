from dotenv import load_dotenv
load_dotenv()  # must run before core.settings reads os.environ

import logging
import sys
from core.settings import get_settings


def main():
    try:
        level = get_settings().log_level.upper()
    except RuntimeError as e:
        print(e)
        raise SystemExit(2)

    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    from cli.parser import run
    raise SystemExit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
