import argparse
import logging
import sys

from cli.commands import COMMANDS
from core.errors import ConsistencyError, GeometryError
from core.settings import get_settings, load_env_file

logger = logging.getLogger(__name__)


def float_list(count: int):
    """argparse type for comma-separated floats, e.g. --at 0.4,0.1,1,2."""
    def parse(text: str) -> list[float]:
        try:
            values = [float(part) for part in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers, got '{text}'")
        if len(values) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers, got {len(values)}")
        return values
    return parse


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="tolerance of closed-form checks")
    common.add_argument("--seed", type=int, default=None, help="seed of every random sample")
    common.add_argument("--no-timestamp", action="store_true", help="omit generated_at from the report")
    common.add_argument("--env-file", default=None, help="env file layered over the process environment")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neutral-geom",
        description="Numerical checks for neutral metrics, line spaces and their contact structures. "
                    "Angles are in radians.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = [_common()]

    p = sub.add_parser("compactify", parents=common, help="conformal compactification of R^{2,2}")
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("curvature", parents=common, help="Ricci tensor of the compactified metric")
    p.add_argument("--at", type=float_list(4), default=[0.4, 0.1, 1.0, 2.0], metavar="P,Q,T1,T2")

    p = sub.add_parser("linespace", parents=common, help="tangent hypersurfaces in the space of lines")
    p.add_argument("--axes", type=float_list(3), default=[1.0, 1.5, 2.0], metavar="A,B,C")
    p.add_argument("--samples", type=int, default=50)

    p = sub.add_parser("contact", parents=common, help="contact defects, flat and space-form")
    p.add_argument("--axes", type=float_list(3), default=[1.0, 1.5, 2.0], metavar="A,B,C")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--eps", type=float, default=0.5, help="constant-angle parameter tan(a/2)")

    p = sub.add_parser("legendrian", parents=common, help="Legendrian classification of test knots")
    p.add_argument("--axes", type=float_list(3), default=[1.0, 1.5, 2.0], metavar="A,B,C")
    p.add_argument("--knot", default=None, help="knot CSV (u, re_nu, im_nu, A) to classify instead")
    p.add_argument("--closed", action="store_true", help="the --knot file is a closed knot")
    p.add_argument("--legendrian-tol", type=float, default=1e-3)

    p = sub.add_parser("reeb", parents=common, help="Reeb and geodesic flows")
    p.add_argument("--axes", type=float_list(3), default=[1.0, 1.5, 2.0], metavar="A,B,C")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--out", default=None, help="trajectory CSV path")

    p = sub.add_parser("spaceform", parents=common, help="null planes of line spaces of S³ and H³")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--sign", type=int, choices=[1, -1], default=1)
    p.add_argument("--r", type=float, default=0.6, help="Clifford torus parameter")
    p.add_argument("--angle", type=float, default=0.7, help="constant angle in (0, π/2)")
    p.add_argument("--samples", type=int, default=20)

    p = sub.add_parser("intersect", parents=common, help="intersection of tangent hypersurfaces of two spheres")
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--grid", type=int, default=None, help="grid size of the brute-force scan")
    p.add_argument("--out", default=None, help="point-cloud CSV path")

    p = sub.add_parser("parity", parents=common, help="parity condition for closed neutral 4-manifolds")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    return parser


def run(argv: list[str] | None = None) -> int:
    """Exit codes: 0 all checks pass, 1 a check failed or a consistency alarm fired, 2 usage or domain error."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings = load_env_file(args.env_file) if args.env_file else get_settings()
        settings = settings.with_overrides(tol=args.tol, seed=args.seed)
        report = COMMANDS[args.command](args, settings)
    except ConsistencyError as e:
        print(e, file=sys.stderr)
        return 1
    except (GeometryError, ValueError, RuntimeError) as e:
        print(e if str(e).startswith("[NeutralGeom]") else f"[NeutralGeom] {e}", file=sys.stderr)
        return 2

    if not args.no_timestamp:
        report.stamp()
    print(report.to_json())
    for path in report.artifacts:
        print(f"[NeutralGeom] wrote {path}", file=sys.stderr)
    failed = [c.name for c in report.checks if not c.passed]
    if failed:
        print(f"[NeutralGeom] {len(failed)} of {len(report.checks)} checks failed: {', '.join(failed)}",
              file=sys.stderr)
        return 1
    logger.debug("%s: %d checks passed", args.command, len(report.checks))
    return 0
