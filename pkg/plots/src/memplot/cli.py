"""`plot` command line front-end.

Exit codes: 0 success, 1 bad input (unknown figure, missing columns, empty
CSV), 2 I/O error.
"""

import argparse
import sys

from .figures import FIGURE_IDS, FigureError, render


def build_parser():
    p = argparse.ArgumentParser(
        prog="plot",
        description="Render one figure from a simulator results CSV.")
    p.add_argument("--figure", required=True, choices=FIGURE_IDS,
                   help="figure id")
    p.add_argument("--in", dest="in_path", required=True, metavar="CSV",
                   help="input results CSV")
    p.add_argument("--out", dest="out_path", required=True, metavar="IMAGE",
                   help="output image path (format from extension)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        render(args.figure, args.in_path, args.out_path)
    except FigureError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except OSError as e:
        print("I/O error: %s" % e, file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
