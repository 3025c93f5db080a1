"""catplot <kind> --in <file...> --out <img>

Kinds: wigner-heatmap | fidelity-curves | scan-panels.
Exit codes: 0 success, 2 schema/usage error.
"""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .render import render_fidelity, render_scan_panels, render_wigner

KINDS = ("wigner-heatmap", "fidelity-curves", "scan-panels")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="catplot",
                                     description="Render floquet-cat output files.")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="input CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", nargs="*", help="per-panel titles (wigner)")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)

    try:
        if args.kind == "wigner-heatmap":
            render_wigner(args.inputs, args.out, titles=args.title, dpi=args.dpi)
        elif args.kind == "fidelity-curves":
            if len(args.inputs) != 1:
                raise SchemaError("fidelity-curves expects exactly one input file")
            render_fidelity(args.inputs[0], args.out, dpi=args.dpi)
        else:
            if len(args.inputs) != 1:
                raise SchemaError("scan-panels expects exactly one input file")
            render_scan_panels(args.inputs[0], args.out, dpi=args.dpi)
    except (SchemaError, OSError) as exc:
        print(f"catplot error: {exc}", file=sys.stderr)
        return 2
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
