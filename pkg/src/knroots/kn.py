"""
Kato-Nakayama local model: fibers of τ and pointwise checks of the chart
theorem and of the orbit correspondences between C̄(P), (R≥0 × S¹)(P) and
R≥0(P).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .config import Settings, resolve
from .errors import MonoidMismatchError
from .intlattice import FinAbGroup
from .monoid import AffineMonoid, char_stalk, require_sharp
from .points import (
    TWO_PI,
    CBarPoint,
    Character,
    CPoint,
    KNPoint,
    angle_distance,
    cbar_to_kn,
    cplus_act,
    cpoints_close,
    cstar_act,
    exp_group,
    exp_point,
    extend_from_face,
    integral_part,
    integral_translation,
    kn_to_real,
    knpoints_close,
    lift_kn,
    make_rng,
    max_difference,
    random_cbar_point,
    random_cplus,
    random_face,
    random_integral,
    random_kn_point,
    same_orbit_cplus,
    same_orbit_cstar,
    same_orbit_real,
    tau,
    wrap_angles,
)
from .report import VerificationReport, suite_parameters

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TorusFiber:
    """τ⁻¹(x): a torus of dimension ``rank`` represented by samples."""

    base: CPoint
    rank: int
    lattice: FinAbGroup
    stalk: AffineMonoid
    samples: Tuple[KNPoint, ...]

    def to_json(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_json(),
            "rank": self.rank,
            "lattice": self.lattice.to_json(),
            "stalk": self.stalk.to_json(),
            "samples": [s.to_json() for s in self.samples],
        }


def kn_fiber(
    monoid: AffineMonoid, x: CPoint, samples: int = 10, seed: Optional[int] = 0
) -> TorusFiber:
    """The fiber of τ over x, with sampled points.

    Samples extend the character of x from F^gp to P^gp and twist it by
    random characters of P^gp / F^gp pulled back along the quotient map.
    """
    if x.monoid != monoid:
        raise MonoidMismatchError("Point does not live over the given monoid")
    stalk, group = char_stalk(monoid, x.face)
    rank = group.free_rank
    base_angles = np.asarray(extend_from_face(monoid, x.face, x.character.angles))
    pullback = group.projection.to_array().astype(float)

    rng = make_rng(seed)
    points = []
    for _ in range(samples):
        twist = rng.uniform(0.0, TWO_PI, size=rank)
        angles = base_angles + pullback.T @ twist if rank else base_angles
        sigma = Character(monoid.groupification, wrap_angles(angles))
        points.append(KNPoint(monoid, x.face, x.modulus, sigma))

    logger.debug("fiber over face %s has rank %d", x.face.generator_indices, rank)
    return TorusFiber(x, rank, group, stalk, tuple(points))


def verify_chart_cartesian(
    monoid: AffineMonoid,
    n_samples: int = 100,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
    angle_perturbation: float = 0.0,
) -> VerificationReport:
    """Pointwise check that C̄(P) / Z(P) -> (R≥0 × S¹)(P) -> C(P) commutes with exp.

    Checks per sample: Z(P)-invariance of C̄ -> KN and its converse, existence
    of C̄-lifts of KN points, and τ ∘ (C̄ -> KN) = exp. A nonzero
    ``angle_perturbation`` is added to the first angle of every lift.
    """
    settings = resolve(settings)
    require_sharp(monoid)
    report = VerificationReport(
        "charts",
        suite_parameters(
            monoid,
            settings,
            samples=n_samples,
            seed=seed,
            angle_perturbation=angle_perturbation,
        ),
    )
    rng = make_rng(seed)
    for i in range(n_samples):
        x = random_cbar_point(monoid, rng)
        k = random_integral(monoid, rng)
        image = cbar_to_kn(x)

        translated = cplus_act(integral_translation(monoid, k), x)
        report.check(
            knpoints_close(image, cbar_to_kn(translated), settings),
            "z_invariance",
            input={"sample": i, "translation": list(k)},
            detail="C̄ -> KN changed under a Z(P) translation",
        )

        canonical = lift_kn(image)
        g = same_orbit_cplus(x, canonical)
        difference = None if g is None else integral_part(g, settings)
        report.check(
            difference is not None,
            "equal_images_differ_by_z",
            input={"sample": i},
            detail="points with equal KN image are not Z(P)-translates",
        )

        target = random_kn_point(monoid, rng)
        lift = lift_kn(target)
        if angle_perturbation and lift.v:
            v = (lift.v[0] + angle_perturbation,) + lift.v[1:]
            lift = CBarPoint(lift.monoid, lift.face, lift.u, v)
        lifted = cbar_to_kn(lift)
        error = angle_distance(lifted.sigma.angles, target.sigma.angles)
        report.check(
            knpoints_close(lifted, target, settings),
            "lift_exists",
            input={"sample": i},
            expected=list(target.sigma.angles),
            actual=list(lifted.sigma.angles),
            detail=f"angle error {error:.3e}",
        )

        report.check(
            cpoints_close(tau(image), exp_point(x), settings),
            "tau_exp_triangle",
            input={"sample": i},
            detail="tau(C̄ -> KN) differs from exp",
        )
    logger.debug(
        "charts: %d checks, %d failures", report.cases_run, report.failure_count
    )
    return report


def verify_orbits(
    monoid: AffineMonoid,
    n_samples: int = 100,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
) -> VerificationReport:
    """Orbits of C⁺, C^× and R>0 on the three models all correspond to faces.

    Also checks that exp is equivariant along C⁺(P) -> C^×(P).
    """
    settings = resolve(settings)
    require_sharp(monoid)
    report = VerificationReport(
        "orbits", suite_parameters(monoid, settings, samples=n_samples, seed=seed)
    )
    rng = make_rng(seed)
    for i in range(n_samples):
        x = random_cbar_point(monoid, rng)
        face = x.face if rng.random() < 0.5 else random_face(monoid, rng)
        y = random_cbar_point(monoid, rng, face)
        kx, ky = cbar_to_kn(x), cbar_to_kn(y)

        same_face = x.face == y.face
        g = same_orbit_cplus(x, y)
        h = same_orbit_cstar(kx, ky)
        t = same_orbit_real(kn_to_real(kx), kn_to_real(ky))
        verdicts = [g is not None, h is not None, t is not None]
        report.check(
            all(v == same_face for v in verdicts),
            "orbits_match_faces",
            input={"sample": i},
            expected=same_face,
            actual=verdicts,
        )
        if g is not None:
            moved = cplus_act(g, x)
            report.check(
                max_difference(moved.u, y.u) <= settings.log_tol
                and max_difference(moved.v, y.v) <= settings.log_tol,
                "cplus_connector",
                input={"sample": i},
            )
        if h is not None:
            report.check(
                knpoints_close(
                    cstar_act(h, kx), ky, settings  # type: ignore[arg-type]
                ),
                "cstar_connector",
                input={"sample": i},
            )

        c = random_cplus(monoid, rng)
        lhs = exp_point(cplus_act(c, x))
        rhs = cstar_act(exp_group(c), exp_point(x))
        report.check(
            cpoints_close(lhs, rhs, settings),  # type: ignore[arg-type]
            "exp_equivariance",
            input={"sample": i},
        )
    return report
