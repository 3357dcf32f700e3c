"""Command-line entry point: render one figure from a JSON plot spec."""

from __future__ import annotations

import argparse
import sys

from .spec import SchemaError, load_spec
from .render import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fdnls-render",
        description="Render a CSV artifact into a figure described by a JSON plot spec.",
    )
    parser.add_argument("--spec", required=True, help="path to a JSON plot spec")
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec)
        written = render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
