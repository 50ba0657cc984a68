"""
Command-line front end.

JSON documents go to standard output, log records to standard error.

Exit codes:
    0   success
    1   a verification suite reported failures
    2   usage error or invalid input
    3   any other computation error
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from .config import ARCHIVE_URL_ENV, Settings
from .errors import ConfigurationError, Error, InvalidInputError
from .kn import kn_fiber, verify_chart_cartesian, verify_orbits
from .monoid import (
    AffineMonoid,
    parse_monoid_spec,
    relation_lattice,
    saturate,
    saturation_or_none,
)
from .points import cpoint_from_json, knpoint_from_json
from .report import VerificationReport, dumps
from .rootstack import (
    DEFAULT_TOWER_PAIRS,
    mu_n,
    phi_n,
    root_fiber,
    verify_cube,
    verify_factorization,
    verify_orbit_stabilizer,
    verify_phi_well_defined,
    verify_tower,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_COMPUTATION = 3

NEGATIVE_CONTROL_ANGLE = 1e-3

SUITES = (
    "charts",
    "orbits",
    "cube",
    "tower",
    "factorization",
    "orbit-stabilizer",
    "phi-well-defined",
    "all",
)

_REAL = {"type": "string", "description": "decimal real, 17 significant digits"}

SCHEMAS: Dict[str, Any] = {
    "monoid": {
        "ambient_dim": "integer",
        "generators": [["integer"]],
    },
    "monoid info": {
        "spec": "string",
        "monoid": "monoid",
        "gp_rank": "integer",
        "gp": {"ambient_dim": "integer", "basis": "IntMatrix"},
        "sharp": "boolean",
        "saturated": "boolean or null",
        "fine": "boolean",
        "faces": [{"generators": ["integer"], "dim": "integer", "gp_rank": "integer"}],
        "face_count": "integer",
        "relation_lattice": {"ambient_dim": "integer", "basis": "IntMatrix"},
        "cone": {
            "ambient_dim": "integer",
            "rays": [["integer"]],
            "facets": [["integer"]],
        },
    },
    "monoid saturate": {"spec": "string", "monoid": "monoid", "added": [["integer"]]},
    "IntMatrix": {"rows": "integer", "cols": "integer", "entries": [["string"]]},
    "mu": {
        "n": "integer",
        "rank": "integer",
        "order": "integer",
        "invariant_factors": ["integer"],
        "enumerated": "boolean",
        "elements": [["integer"]],
    },
    "cpoint": {
        "monoid": "monoid",
        "face": ["integer"],
        "modulus": [_REAL],
        "angles": [_REAL],
        "values": [[_REAL, _REAL]],
        "precision": "integer",
    },
    "knpoint": {
        "monoid": "monoid",
        "face": ["integer"],
        "log_modulus": [_REAL],
        "sigma": [_REAL],
        "precision": "integer",
    },
    "root-fiber": {
        "n": "integer",
        "base": "cpoint",
        "lifts": ["cpoint without monoid, with n"],
        "orbit_size": "integer",
        "stabilizer": {
            "order": "integer",
            "invariant_factors": ["integer"],
            "elements": [["integer"]],
        },
    },
    "kn-fiber": {
        "base": "cpoint",
        "rank": "integer",
        "lattice": {
            "free_rank": "integer",
            "invariant_factors": ["integer"],
            "order": "integer or null",
            "projection": "IntMatrix",
        },
        "stalk": "monoid",
        "samples": ["knpoint"],
    },
    "phi": {
        "point": "cpoint without monoid, with n",
        "lift": {"monoid": "monoid", "face": ["integer"], "u": [_REAL], "v": [_REAL]},
        "mu": {"n": "integer", "order": "integer", "invariant_factors": ["integer"]},
        "stabilizer": {"order": "integer", "invariant_factors": ["integer"]},
    },
    "verify": {
        "suite": "string",
        "parameters": "object",
        "passed": "boolean",
        "cases_run": "integer",
        "failure_count": "integer",
        "failures": [
            {
                "check": "string",
                "input": "any",
                "expected": "any",
                "actual": "any",
                "detail": "string",
            }
        ],
    },
    "verify all": {"passed": "boolean", "reports": ["verify"]},
    "point input": {
        "values": "[[re, im] | number, ...] on the generators",
        "radii": "[number, ...] on the generators (KN points)",
        "phases": "[number, ...] on the generators (KN points)",
    },
}


# MARK: - Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knroots",
        description="Affine monoids, Kato-Nakayama local models and root-stack fibers.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    parser.add_argument(
        "--tol", type=float, default=None, help="angle and log tolerance"
    )
    parser.add_argument(
        "--schema", action="store_true", help="print JSON schemas and exit"
    )

    commands = parser.add_subparsers(dest="command")

    monoid = commands.add_parser(
        "monoid",
        help="monoid structure",
        description=(
            "info: groupification, faces, cone and saturation (null when the "
            "Hilbert basis is out of reach). saturate: the saturation inside "
            "P^gp; with --ambient, inside Z^d, so <(1,0),(1,2)> gains (1,1)."
        ),
    )
    monoid.add_argument("action", choices=("info", "saturate"))
    monoid.add_argument("spec")
    monoid.add_argument(
        "--ambient",
        action="store_true",
        help="saturate in Z^d rather than P^gp (default: P^gp)",
    )

    mu = commands.add_parser("mu", help="the group μ_n(P)")
    mu.add_argument("spec")
    mu.add_argument("--n", type=int, default=2)

    fiber = commands.add_parser("root-fiber", help="lifts of a C-point to level n")
    fiber.add_argument("spec")
    fiber.add_argument("--n", type=int, default=2)
    fiber.add_argument("--point", required=True, help="C-point JSON")

    kn = commands.add_parser("kn-fiber", help="the KN fiber over a C-point")
    kn.add_argument("spec")
    kn.add_argument("--point", required=True, help="C-point JSON")
    kn.add_argument("--samples", type=int, default=10)
    kn.add_argument("--seed", type=int, default=0)

    phi = commands.add_parser("phi", help="Φ_n of a KN point")
    phi.add_argument("spec")
    phi.add_argument("--n", type=int, default=2)
    phi.add_argument("--point", required=True, help="KN point JSON")

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("spec")
    verify.add_argument("--n", type=int, default=2)
    verify.add_argument("--samples", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    verify.add_argument(
        "--archive", default=None, help="SQLAlchemy URL for stored reports"
    )
    verify.add_argument(
        "--negative-control",
        action="store_true",
        help="perturb charts lifts by 1e-3 and use the root 1/(n+1) in cube",
    )
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _settings(args: argparse.Namespace) -> Settings:
    settings = Settings.from_env()
    if args.tol is not None:
        try:
            settings = settings.with_tolerance(args.tol)
        except ConfigurationError as e:
            raise InvalidInputError(str(e)) from e
    return settings


def _point_json(raw: str) -> Any:
    try:
        return json.loads(raw)
    except ValueError as e:
        raise InvalidInputError(f"--point is not valid JSON: {e}") from e


# MARK: - Commands


def _monoid_info(spec: str, monoid: AffineMonoid, settings: Settings) -> Dict[str, Any]:
    sharp = monoid.is_sharp
    faces = [f.to_json() for f in monoid.faces] if sharp else None
    return {
        "spec": spec,
        "monoid": monoid.to_json(),
        "gp_rank": monoid.groupification.rank,
        "gp": monoid.groupification.to_json(),
        "sharp": sharp,
        "saturated": saturation_or_none(monoid),
        "fine": monoid.is_fine,
        "faces": faces,
        "face_count": None if faces is None else len(faces),
        "relation_lattice": relation_lattice(monoid).to_json(),
        "cone": monoid.cone.to_json(),
    }


def _monoid_saturate(
    spec: str, monoid: AffineMonoid, settings: Settings, ambient: bool = False
) -> Dict[str, Any]:
    saturated = saturate(monoid, settings, ambient=ambient)
    original = set(monoid.generator_vectors)
    return {
        "spec": spec,
        "monoid": saturated.to_json(),
        "added": [list(g) for g in saturated.generator_vectors if g not in original],
    }


def _run_suite(
    suite: str, monoid: AffineMonoid, args: argparse.Namespace, settings: Settings
) -> List[VerificationReport]:
    n, samples, seed = args.n, args.samples, args.seed
    negative = args.negative_control
    runners: Dict[str, Callable[[], VerificationReport]] = {
        "charts": lambda: verify_chart_cartesian(
            monoid,
            samples,
            seed,
            settings,
            angle_perturbation=NEGATIVE_CONTROL_ANGLE if negative else 0.0,
        ),
        "orbits": lambda: verify_orbits(monoid, samples, seed, settings),
        "cube": lambda: verify_cube(
            monoid,
            n,
            samples,
            seed,
            settings,
            root_override=1.0 / (n + 1) if negative else None,
        ),
        "tower": lambda: verify_tower(
            monoid, DEFAULT_TOWER_PAIRS, samples, seed, settings
        ),
        "factorization": lambda: verify_factorization(
            monoid, n, samples, seed, settings
        ),
        "orbit-stabilizer": lambda: verify_orbit_stabilizer(monoid, 4, seed, settings),
        "phi-well-defined": lambda: verify_phi_well_defined(
            monoid, n, samples, 10, seed, settings
        ),
    }
    names = [s for s in SUITES if s != "all"] if suite == "all" else [suite]
    reports = []
    for name in names:
        report = runners[name]()
        level = logging.INFO if report.passed else logging.WARNING
        logger.log(
            level,
            "%s: %d checks, %d failures",
            name,
            report.cases_run,
            report.failure_count,
        )
        reports.append(report)
    return reports


def _archive_reports(url: str, reports: Sequence[VerificationReport]) -> None:
    from .archive import ReportArchive

    archive = ReportArchive(url)
    for report in reports:
        reproducible = archive.is_reproducible(report)
        report_id = archive.store(report)
        if reproducible is False:
            logger.warning(
                "%s report %d differs from the previous run", report.suite, report_id
            )
        elif reproducible:
            logger.info(
                "%s report %d reproduces the previous run", report.suite, report_id
            )


def _dispatch(args: argparse.Namespace, settings: Settings) -> int:
    monoid = parse_monoid_spec(args.spec)
    logger.debug(
        "monoid %s: %d generators in Z^%d",
        args.spec,
        monoid.num_generators,
        monoid.ambient_dim,
    )

    if args.command == "monoid":
        if args.action == "info":
            _emit(_monoid_info(args.spec, monoid, settings))
        else:
            _emit(_monoid_saturate(args.spec, monoid, settings, args.ambient))
        return EXIT_OK
    if args.command == "mu":
        _emit(mu_n(monoid, args.n, settings).to_json())
        return EXIT_OK
    if args.command == "root-fiber":
        x = cpoint_from_json(monoid, _point_json(args.point), settings)
        _emit(root_fiber(monoid, args.n, x, settings).to_json())
        return EXIT_OK
    if args.command == "kn-fiber":
        x = cpoint_from_json(monoid, _point_json(args.point), settings)
        _emit(kn_fiber(monoid, x, args.samples, args.seed).to_json())
        return EXIT_OK
    if args.command == "phi":
        k = knpoint_from_json(monoid, _point_json(args.point), settings)
        _emit(phi_n(k, args.n, settings).to_json())
        return EXIT_OK

    reports = _run_suite(args.suite, monoid, args, settings)
    archive_url = args.archive or os.environ.get(ARCHIVE_URL_ENV)
    if archive_url:
        _archive_reports(archive_url, reports)
    passed = all(r.passed for r in reports)
    if args.suite == "all":
        _emit({"passed": passed, "reports": [r.to_json() for r in reports]})
    else:
        _emit(reports[0].to_json())
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def _emit(document: Any) -> None:
    sys.stdout.write(dumps(document) + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args)
    if args.schema:
        _emit(SCHEMAS)
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        return _dispatch(args, _settings(args))
    except (InvalidInputError, ConfigurationError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except Error as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_COMPUTATION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
