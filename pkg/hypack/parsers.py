"""Argument parsers."""


import argparse

from hypack import __version__, settings
from hypack.rational import fraction_arg, range_arg


def float_list(text):
    """argparse type for comma separated radii, e.g. 1,2,3"""
    try:
        return [float(value) for value in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected numbers like 1,2,3, got {text!r}")


def point_arg(text):
    """argparse type for points written "x,y" (components may be p/q)."""
    try:
        x, y = (fraction_arg(value) for value in text.split(","))
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"Expected a point like 0,1, got {text!r}")
    return x, y


def get_common_parser():
    """Flags shared by every working subcommand."""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("Common options")
    group.add_argument("-o", "--out", help="Output file (or directory for reproduce)")
    group.add_argument("--seed", type=int, help="Random seed (def. from config, else 0)")
    group.add_argument(
        "--threads",
        type=int,
        help="Worker threads for parallel searches (def. from config, else 1)",
    )
    group.add_argument(
        "--tol",
        type=float,
        help="Numerical tolerance for integration (def. from config, else 1e-6)",
    )
    return parser


def add_parameter_group(parser):
    group = parser.add_argument_group("Body parameters")
    group.add_argument(
        "-e",
        "--epsilon",
        type=fraction_arg,
        required=True,
        help="Target density, a rational in (0, 1), e.g. 7/10",
    )
    group.add_argument("--m", type=int, help="Force the scale base m (needs 1/m < epsilon)")
    group.add_argument("--delta", type=fraction_arg, help="Pocket margin (def. chosen)")
    group.add_argument(
        "--delta-prime",
        type=fraction_arg,
        help="Slot half-width (def. delta/5)",
    )


def add_family_group(parser, scales=True):
    group = parser.add_argument_group("Candidate family")
    if scales:
        group.add_argument(
            "--scales",
            type=range_arg,
            default=settings.FIT_SCALES,
            help="Scale exponents a, as lo:hi (def. %(default)s)",
        )
    group.add_argument(
        "--grid",
        type=fraction_arg,
        help="Translation grid step h",
    )


def add_build_body_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "build-body",
        parents=[common],
        help="Construct the tiling body K for a target density",
        description="Construct the body K(epsilon) and write it as JSON.",
        epilog="Usage examples\n--------------\n"
        "Build K for epsilon = 7/10 and draw it:\n"
        "  $ hypack build-body --epsilon 7/10 --out body.json --svg body.svg\n",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    add_parameter_group(parser)
    parser.add_argument("--svg", help="Also write an SVG outline")


def add_render_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "render",
        parents=[common],
        help="Draw a body or packing as SVG",
        description="Draw the outline of a body or packing JSON file.",
    )
    parser.add_argument("input", help="body.json or patch.json")


def add_tile_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "tile",
        parents=[common],
        help="Generate a patch of the tiling s^i t^j K",
        description="Generate the copies s^i tau^j K for i, j in the given ranges.",
        epilog="Usage examples\n--------------\n"
        "  $ hypack tile --body body.json --i=-2:2 --j=-4:4 --verify --out patch.json\n",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--body", required=True, help="body.json")
    parser.add_argument(
        "--i",
        type=range_arg,
        default=settings.PATCH_I,
        help="Scale rows, lo:hi (write --i=-2:2 for negative bounds)",
    )
    parser.add_argument(
        "--j", type=range_arg, default=settings.PATCH_J, help="Translations, lo:hi"
    )
    parser.add_argument(
        "--verify",
        action="store_true",
        help="Check that the patch covers the central tile's rectangle R",
    )


def add_verify_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "verify",
        parents=[common],
        help="Check the density bound, the fit condition and packings",
        description="Check a body against its target density and the protrusion fit"
        " condition; optionally check that a packing file is a packing.",
    )
    parser.add_argument("--body", required=True, help="body.json")
    parser.add_argument(
        "-e", "--epsilon", type=fraction_arg, help="Target density (def. body's own)"
    )
    parser.add_argument("--packing", help="Packing JSON to check for overlaps")
    parser.add_argument(
        "--margin", type=fraction_arg, default=0, help="Widen the translation range"
    )
    add_family_group(parser)


def add_saturate_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "saturate",
        parents=[common],
        help="Local saturation, reduction and saturating-map searches",
        description="Search a packing for local improvements within a region.",
        epilog="Usage examples\n--------------\n"
        "  $ hypack saturate --packing patch.json --region F.json --kmax 2 \\\n"
        "      --grid 1/2 --out sat.json\n",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--packing", required=True, help="Packing JSON")
    parser.add_argument("--region", help="Region JSON (def. the packing's window)")
    parser.add_argument(
        "--check",
        choices=["unsaturated", "reducible", "map"],
        default="unsaturated",
        help="Search to run (def. %(default)s)",
    )
    parser.add_argument(
        "--kmax", type=int, default=settings.DEFAULT_KMAX, help="Largest |F1| (def. %(default)s)"
    )
    parser.add_argument("--cell", type=fraction_arg, help="Cell side j for --check map")
    parser.add_argument(
        "--budget",
        type=int,
        default=settings.DEFAULT_BUDGET,
        help="Search node budget per filling (def. %(default)s)",
    )
    add_family_group(parser)


def add_density_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "density",
        parents=[common],
        help="Ball densities of a packing window or a periodic packing",
        description="Estimate ball densities about a center, or the exact cell"
        " density of a periodic packing.",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--packing", help="Packing window JSON")
    source.add_argument("--periodic", help="Periodic packing JSON")
    parser.add_argument("--center", type=point_arg, default=(0, 1), help="Center x,y")
    parser.add_argument("--r", type=float_list, help="Radii, e.g. 1,2,3")
    parser.add_argument(
        "--monte-carlo",
        action="store_true",
        help="Also report the Monte Carlo estimate at each radius",
    )


def add_metric_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "metric",
        parents=[common],
        help="Distance d_K between two packing windows",
        description="Compute d_K between two windows of packings by the same body.",
    )
    parser.add_argument("first", help="Packing JSON")
    parser.add_argument("second", help="Packing JSON")
    parser.add_argument("--n-max", type=int, default=10, help="Largest n (def. %(default)s)")
    parser.add_argument(
        "--norm", choices=["gauge", "orbit"], default="gauge", help="Group norm"
    )
    parser.add_argument("--w-scale", type=float, default=1.0, help="Scale weight")
    parser.add_argument("--w-trans", type=float, default=1.0, help="Translation weight")


def add_bound_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "bound",
        parents=[common],
        help="Emit the density bound chain for a body",
        description="Evaluate the chain bounding the density of any invariant"
        " measure on packings by K.",
    )
    parser.add_argument("--body", required=True, help="body.json")
    parser.add_argument(
        "--mu-upper",
        type=fraction_arg,
        default=1,
        help="Upper bound on the frequency of R' (def. 1)",
    )


def add_reproduce_subparser(subparsers, common):
    parser = subparsers.add_parser(
        "reproduce",
        parents=[common],
        help="Run the whole construction and every check",
        description="Choose parameters, build K, verify the bound and fit condition,"
        " tile, evaluate the bound chain and draw everything into --out.",
        epilog="Usage examples\n--------------\n"
        "  $ hypack reproduce --epsilon 7/10 --out run/\n",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "-e", "--epsilon", type=fraction_arg, required=True, help="Target density"
    )
    parser.add_argument("--m", type=int, help="Force the scale base m")


def add_config_subparser(subparsers):
    parser = subparsers.add_parser(
        "config",
        help="Configure hypack defaults",
        description="Store default seed, tolerance and thread count",
        epilog=(
            "Example usage\n-------------\n"
            "Use four threads by default:\n"
            " $ hypack config --threads 4\n\n"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--seed", type=int, help="Default random seed")
    parser.add_argument("--tol", type=float, help="Default numerical tolerance")
    parser.add_argument("--threads", type=int, help="Default worker threads")


def get_parser():
    parser = argparse.ArgumentParser(
        "hypack",
        description="hypack: exact packings, tilings and density bounds in the"
        " hyperbolic upper half-plane.",
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + __version__
    )
    common = get_common_parser()
    subparsers = parser.add_subparsers(dest="command")
    add_build_body_subparser(subparsers, common)
    add_render_subparser(subparsers, common)
    add_tile_subparser(subparsers, common)
    add_verify_subparser(subparsers, common)
    add_saturate_subparser(subparsers, common)
    add_density_subparser(subparsers, common)
    add_metric_subparser(subparsers, common)
    add_bound_subparser(subparsers, common)
    add_reproduce_subparser(subparsers, common)
    add_config_subparser(subparsers)
    return parser


def parse_args(args):
    parser = get_parser()
    args = parser.parse_args(args)

    if not args.command:
        parser.print_help()
        parser.exit(1)

    if args.command == "saturate" and args.check == "map" and args.cell is None:
        raise ValueError("--check map needs --cell")

    if args.command == "density" and args.packing and not args.r:
        raise ValueError("Ball densities need radii (--r)")

    if args.command == "reproduce" and not args.out:
        raise ValueError("reproduce needs an output directory (--out)")

    return args
