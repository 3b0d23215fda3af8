"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 protocol abort.
"""

import sys

from .errors import ConfigError, ProtocolAbort
from .harness import emit, parse_config, run_experiment


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(f"kakqkd: config error: {exc}", file=sys.stderr)
        return 1
    try:
        stats = run_experiment(config)
    except ProtocolAbort as exc:
        print(f"kakqkd: protocol aborted: {exc}", file=sys.stderr)
        return 2
    sys.stdout.buffer.write(emit(stats, config.output))
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
