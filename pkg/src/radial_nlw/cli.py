"""Command-line entry point: ``nlw <kind> --config PATH [--out DIR] [--resume] [--threads K]``."""
import argparse
import json
import sys

from .errors import ConfigError
from .runner import KINDS, RunConfig, run

EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlw", description=__doc__)
    parser.add_argument("kind", choices=KINDS, help="experiment to run")
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", help="output directory (overrides the config)")
    parser.add_argument("--resume", action="store_true", help="continue a partial run")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $NLW_THREADS or 1)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            data.setdefault("kind", args.kind)
            if data["kind"] != args.kind:
                raise ConfigError(f"config kind {data['kind']!r} does not match "
                                  f"subcommand {args.kind!r}")
        cfg = RunConfig.from_dict(data)
        return run(cfg, output_dir=args.out, resume=args.resume or None, threads=args.threads)
    except (ConfigError, json.JSONDecodeError, OSError) as exc:
        print(f"nlw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"nlw: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
