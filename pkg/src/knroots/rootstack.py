"""
Root-stack fibers over chart points.

(1/n)P is identified with P, so that the inclusion P -> (1/n)P is p ↦ n·p.
A point y of C((1/n)P) is then a C-point of P, and it lies over x when
y^n = x. The group μ_n(P) is the character group of Z^k / nZ^k
(k = rank P^gp); its elements are stored as exact exponent vectors a mod n,
acting by e^{2πi<a, ·>/n}.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from .config import Settings, resolve
from .errors import (
    GroupMismatchError,
    InvalidInputError,
    NonDivisorError,
    ResourceLimitError,
)
from .intlattice import (
    FinAbGroup,
    IntMatrix,
    Sublattice,
    Vector,
    as_vector,
    cokernel,
    kernel_basis,
    solve_integral,
)
from .monoid import AffineMonoid, char_stalk, require_sharp
from .points import (
    TWO_PI,
    CBarPoint,
    Character,
    CPoint,
    KNPoint,
    cplus_act,
    cpoints_close,
    eval_c,
    exp_point,
    integral_translation,
    lift_kn,
    make_rng,
    max_difference,
    random_cbar_point,
    random_integral,
    random_kn_point,
    restriction_matrix,
    scale,
    tau,
    wrap_angles,
)
from .report import VerificationReport, suite_parameters

logger = logging.getLogger(__name__)

DEFAULT_TOWER_PAIRS: Tuple[Tuple[int, int], ...] = ((1, 2), (2, 4), (2, 6), (3, 6))


def _check_level(n: int) -> None:
    if n < 1:
        raise InvalidInputError(f"Root level must be positive, got {n}")


# MARK: - μ_n(P)


@dataclass(frozen=True)
class MuElement:
    """The character e^{2πi<a, ·>/n} of (1/n)P^gp, trivial on P^gp."""

    monoid: AffineMonoid
    n: int
    exponents: Vector

    def __mul__(self, other: "MuElement") -> "MuElement":
        _check_same_group(self.monoid, self.n, other.monoid, other.n)
        return MuElement(
            self.monoid,
            self.n,
            tuple((a + b) % self.n for a, b in zip(self.exponents, other.exponents)),
        )

    @property
    def is_identity(self) -> bool:
        return not any(self.exponents)

    def value(self, coords: Sequence[int]) -> complex:
        """Value on an element of (1/n)P^gp given in P^gp coordinates."""
        turns = sum(a * c for a, c in zip(self.exponents, coords)) % self.n
        return complex(np.exp(1j * TWO_PI * turns / self.n))


def _check_same_group(m1: AffineMonoid, n1: int, m2: AffineMonoid, n2: int) -> None:
    if m1 != m2 or n1 != n2:
        raise GroupMismatchError("μ_n element and point belong to different (P, n)")


@dataclass(frozen=True)
class MuN:
    """μ_n(P) with its cokernel structure and, when small enough, all elements.

    Without enumeration ``elements`` holds the standard generators only.
    """

    monoid: AffineMonoid
    n: int
    group: FinAbGroup
    elements: Tuple[MuElement, ...]
    enumerated: bool

    @property
    def rank(self) -> int:
        return self.monoid.groupification.rank

    @property
    def order(self) -> int:
        return self.n**self.rank

    def identity(self) -> MuElement:
        return MuElement(self.monoid, self.n, (0,) * self.rank)

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "rank": self.rank,
            "order": self.order,
            "invariant_factors": list(self.group.invariant_factors),
            "enumerated": self.enumerated,
            "elements": [list(g.exponents) for g in self.elements],
        }


def mu_n(monoid: AffineMonoid, n: int, settings: Optional[Settings] = None) -> MuN:
    """μ_n(P): characters of coker(P^gp -> (1/n)P^gp) = (Z/n)^k."""
    settings = resolve(settings)
    _check_level(n)
    k = monoid.groupification.rank
    group = cokernel(IntMatrix.identity(k).scaled(n))
    if n**k <= settings.enumeration_limit:
        exponents = itertools.product(range(n), repeat=k)
        elements = tuple(MuElement(monoid, n, tuple(a)) for a in exponents)
        enumerated = True
    else:
        logger.warning(
            "μ_%d has order %d^%d above the enumeration limit %d; "
            "listing generators only",
            n,
            n,
            k,
            settings.enumeration_limit,
        )
        elements = tuple(
            MuElement(monoid, n, tuple(1 if j == i else 0 for j in range(k)))
            for i in range(k)
        )
        enumerated = False
    return MuN(monoid, n, group, elements, enumerated)


# MARK: - Root Fibers


@dataclass(frozen=True)
class RootFiberPoint:
    """A point of C((1/n)P) lying over ``base``."""

    point: CPoint
    base: CPoint
    n: int

    def to_json(self) -> Dict[str, Any]:
        data = self.point.to_json()
        data.pop("monoid")
        data["n"] = self.n
        return data


@dataclass(frozen=True)
class RootFiber:
    """All lifts of x to level n and the stabilizer of any lift in μ_n(P)."""

    base: CPoint
    n: int
    mu: MuN
    lifts: Tuple[RootFiberPoint, ...]
    stabilizer_group: FinAbGroup
    stabilizer: Tuple[MuElement, ...]

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "base": self.base.to_json(),
            "lifts": [p.to_json() for p in self.lifts],
            "orbit_size": len(self.lifts),
            "stabilizer": {
                "order": self.stabilizer_group.order,
                "invariant_factors": list(self.stabilizer_group.invariant_factors),
                "elements": [list(g.exponents) for g in self.stabilizer],
            },
        }


def power_point(y: CPoint, e: int) -> CPoint:
    """y^e: restriction along p ↦ e·p."""
    return CPoint(
        y.monoid,
        y.face,
        tuple(e * m for m in y.modulus),
        Character(y.face.gp, wrap_angles(np.asarray(y.character.angles) * e)),
    )


def _stabilizer_lattice(R: IntMatrix, n: int, k: int) -> Sublattice:
    """K = {a ∈ Z^k : R a ∈ nZ^s}."""
    s = R.rows
    system = R.hstack(IntMatrix.identity(s).scaled(n))
    solutions = kernel_basis(system).vectors()
    return Sublattice.from_generators(k, (v[:k] for v in solutions))


def stabilizer(
    monoid: AffineMonoid, face: Any, n: int, settings: Optional[Settings] = None
) -> Tuple[FinAbGroup, Tuple[MuElement, ...]]:
    """Stabilizer in μ_n(P) of any lift of a point with support ``face``.

    Returns:
        K / nZ^k as a finite group, and its elements (or generators when the
        order exceeds the enumeration limit) as μ_n exponent vectors
    """
    settings = resolve(settings)
    k = monoid.groupification.rank
    R = restriction_matrix(monoid, face)
    K = _stabilizer_lattice(R, n, k)
    scaled = IntMatrix.identity(k).scaled(n).row_vectors()
    n_in_K = K.coordinate_matrix(Sublattice.from_generators(k, scaled))
    group = cokernel(n_in_K.T)
    order = group.order or 0
    if order <= settings.enumeration_limit:
        coords_list = list(group.elements())
    else:
        coords_list = [
            tuple(1 if j == i else 0 for j in range(len(group.invariant_factors)))
            for i in range(len(group.invariant_factors))
        ]
    elements = []
    for coords in coords_list:
        a = K.combination(group.lift(coords))
        elements.append(MuElement(monoid, n, tuple(x % n for x in a)))
    return group, tuple(sorted(set(elements), key=lambda g: g.exponents))


def root_fiber(
    monoid: AffineMonoid, n: int, x: CPoint, settings: Optional[Settings] = None
) -> RootFiber:
    """Lifts of x to C((1/n)P) and their common stabilizer.

    The lifts form one μ_n(P)-orbit of size n^{rank F^gp}; the stabilizer
    has order n^{rank P^gp − rank F^gp}.

    Raises:
        ResourceLimitError: If there are more lifts than the enumeration limit
    """
    settings = resolve(settings)
    _check_level(n)
    if x.monoid != monoid:
        raise GroupMismatchError("Point does not live over the given monoid")
    s = x.face.rank
    if n**s > settings.enumeration_limit:
        raise ResourceLimitError(
            f"Root fiber has {n}^{s} lifts, above the enumeration limit"
        )

    modulus = tuple(m / n for m in x.modulus)
    theta = np.asarray(x.character.angles, dtype=float)
    lifts = []
    for b in itertools.product(range(n), repeat=s):
        angles = (theta + TWO_PI * np.asarray(b, dtype=float)) / n if s else theta
        character = Character(x.face.gp, wrap_angles(angles))
        point = CPoint(monoid, x.face, modulus, character)
        lifts.append(RootFiberPoint(point, x, n))

    group, elements = stabilizer(monoid, x.face, n, settings)
    logger.debug(
        "root fiber at level %d over face %s: %d lifts, stabilizer order %s",
        n,
        x.face.generator_indices,
        len(lifts),
        group.order,
    )
    return RootFiber(x, n, mu_n(monoid, n, settings), tuple(lifts), group, elements)


def mu_act(g: MuElement, p: RootFiberPoint) -> RootFiberPoint:
    """Twist the angles of a lift by g; the base is unchanged."""
    _check_same_group(g.monoid, g.n, p.point.monoid, p.n)
    R = restriction_matrix(p.point.monoid, p.point.face)
    turns = np.asarray([c % g.n for c in R @ g.exponents], dtype=float)
    angles = np.asarray(p.point.character.angles, dtype=float) + TWO_PI * turns / g.n
    point = CPoint(
        p.point.monoid,
        p.point.face,
        p.point.modulus,
        Character(p.point.face.gp, wrap_angles(angles)),
    )
    return RootFiberPoint(point, p.base, p.n)


def orbit_connector(
    y1: RootFiberPoint, y2: RootFiberPoint, settings: Optional[Settings] = None
) -> Optional[MuElement]:
    """Some g ∈ μ_n(P) with g·y1 = y2, or None if they lie in different orbits."""
    settings = resolve(settings)
    a, b = y1.point, y2.point
    if y1.n != y2.n or a.monoid != b.monoid or a.face != b.face:
        return None
    if max_difference(a.modulus, b.modulus) > settings.log_tol:
        return None
    n = y1.n
    delta = np.asarray(b.character.angles) - np.asarray(a.character.angles)
    turns = n * delta / TWO_PI
    rounded = np.round(turns)
    error = float(np.abs(turns - rounded).max()) * TWO_PI / n if turns.size else 0.0
    if error > settings.angle_tol:
        return None
    target = [int(c) for c in rounded]

    R = restriction_matrix(a.monoid, a.face)
    k = a.monoid.groupification.rank
    system = R.hstack(IntMatrix.identity(R.rows).scaled(n))
    solution = solve_integral(system, target)
    if solution is None:
        return None
    return MuElement(a.monoid, n, tuple(x % n for x in solution[:k]))


def same_mu_orbit(
    y1: RootFiberPoint, y2: RootFiberPoint, settings: Optional[Settings] = None
) -> bool:
    return orbit_connector(y1, y2, settings) is not None


# MARK: - Φ_n


@dataclass(frozen=True)
class PhiResult:
    """Φ_n(k): the canonical representative and its orbit certificate.

    ``stabilizer`` is the stabilizer of the representative in μ_n(P); a C̄-lift
    changed by k' ∈ Z(P) moves the representative by ``twist_for(k')``.
    """

    point: RootFiberPoint
    lift: CBarPoint
    mu: MuN
    stabilizer: FinAbGroup

    def twist_for(self, translation: Sequence[Any]) -> MuElement:
        return twist_for_translation(self.point.point.monoid, self.point.n, translation)

    def to_json(self) -> Dict[str, Any]:
        return {
            "point": self.point.to_json(),
            "lift": self.lift.to_json(),
            "mu": {
                "n": self.mu.n,
                "order": self.mu.order,
                "invariant_factors": list(self.mu.group.invariant_factors),
            },
            "stabilizer": {
                "order": self.stabilizer.order,
                "invariant_factors": list(self.stabilizer.invariant_factors),
            },
        }


def twist_for_translation(
    monoid: AffineMonoid, n: int, translation: Sequence[Any]
) -> MuElement:
    """The character e^{2πi k'/n} ∈ μ_n(P) induced by k' ∈ Z(P)."""
    k = as_vector(translation)
    return MuElement(monoid, n, tuple(c % n for c in k))


def phi_n_from_lift(x: CBarPoint, n: int) -> RootFiberPoint:
    """exp(scale(x, 1/n)), read as a point of C((1/n)P) over exp(x)."""
    _check_level(n)
    return RootFiberPoint(exp_point(scale(x, 1.0 / n)), exp_point(x), n)


def phi_n(k: KNPoint, n: int, settings: Optional[Settings] = None) -> PhiResult:
    """Φ_n on a KN point through its canonical C̄-lift (v in [0, 2π))."""
    _check_level(n)
    lift = lift_kn(k)
    point = phi_n_from_lift(lift, n)
    group, _ = stabilizer(k.monoid, k.face, n, settings)
    return PhiResult(point, lift, mu_n(k.monoid, n, settings), group)


def real_root_point(x: CBarPoint, r: float) -> CPoint:
    """exp(scale(x, r)) for any r > 0."""
    return exp_point(scale(x, r))


def tower_project(
    monoid: AffineMonoid, m: int, n: int, p: RootFiberPoint
) -> RootFiberPoint:
    """Restrict a level-m point along (1/n)P ⊆ (1/m)P.

    Raises:
        NonDivisorError: If n does not divide m
    """
    _check_level(m)
    _check_level(n)
    if m % n:
        raise NonDivisorError(f"{n} does not divide {m}")
    if p.n != m or p.point.monoid != monoid:
        raise GroupMismatchError(f"Point is not at level {m} over the given monoid")
    return RootFiberPoint(power_point(p.point, m // n), p.base, n)


# MARK: - Verification Suites


def verify_cube(
    monoid: AffineMonoid,
    n: int,
    n_samples: int = 100,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
    root_override: Optional[float] = None,
) -> VerificationReport:
    """Route (1), scaling a Z(P)-translate of a C̄-lift, agrees with Φ_n up to μ_n.

    Both routes must also project to τ(k) at level 1. ``root_override``
    replaces the scale factor 1/n of route (1).
    """
    settings = resolve(settings)
    _check_level(n)
    require_sharp(monoid)
    factor = 1.0 / n if root_override is None else root_override
    report = VerificationReport(
        "cube",
        suite_parameters(
            monoid, settings, n=n, samples=n_samples, seed=seed, scale=factor
        ),
    )
    rng = make_rng(seed)
    for i in range(n_samples):
        k = random_kn_point(monoid, rng)
        translation = random_integral(monoid, rng)
        lift = cplus_act(integral_translation(monoid, translation), lift_kn(k))
        route1 = RootFiberPoint(exp_point(scale(lift, factor)), tau(k), n)
        route2 = phi_n(k, n, settings).point

        report.check(
            same_mu_orbit(route1, route2, settings),
            "routes_agree",
            input={"sample": i, "translation": list(translation)},
            expected=route2.to_json(),
            actual=route1.to_json(),
        )
        for name, route in (("route1_over_base", route1), ("route2_over_base", route2)):
            base = tower_project(monoid, n, 1, route).point
            report.check(
                cpoints_close(base, tau(k), settings),
                name,
                input={"sample": i},
            )
    return report


def verify_tower(
    monoid: AffineMonoid,
    pairs: Sequence[Tuple[int, int]] = DEFAULT_TOWER_PAIRS,
    n_samples: int = 100,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
) -> VerificationReport:
    """tower_project(Φ_m(k), m -> n) lies in the μ_n-orbit of Φ_n(k)."""
    settings = resolve(settings)
    require_sharp(monoid)
    report = VerificationReport(
        "tower",
        suite_parameters(
            monoid,
            settings,
            pairs=[list(p) for p in pairs],
            samples=n_samples,
            seed=seed,
        ),
    )
    rng = make_rng(seed)
    for n, m in pairs:
        for i in range(n_samples):
            k = random_kn_point(monoid, rng)
            projected = tower_project(monoid, m, n, phi_n(k, m, settings).point)
            direct = phi_n(k, n, settings).point
            report.check(
                same_mu_orbit(projected, direct, settings),
                "tower_coherent",
                input={"n": n, "m": m, "sample": i},
            )
    return report


def verify_factorization(
    monoid: AffineMonoid,
    n: int,
    n_samples: int = 1000,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
) -> VerificationReport:
    """(Φ_n values)^n equal exp values on every generator."""
    settings = resolve(settings)
    _check_level(n)
    report = VerificationReport(
        "factorization",
        suite_parameters(monoid, settings, n=n, samples=n_samples, seed=seed),
    )
    rng = make_rng(seed)
    for i in range(n_samples):
        x = random_cbar_point(monoid, rng)
        root = phi_n_from_lift(x, n).point
        target = exp_point(x)
        for j, g in enumerate(monoid.generator_vectors):
            expected = eval_c(target, g, settings)
            actual = eval_c(root, g, settings) ** n
            report.check(
                abs(actual - expected) <= settings.log_tol * max(1.0, abs(expected)),
                "power_equals_exp",
                input={"sample": i, "generator": j},
                expected=[expected.real, expected.imag],
                actual=[actual.real, actual.imag],
            )
    return report


def verify_orbit_stabilizer(
    monoid: AffineMonoid,
    n_max: int = 4,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
) -> VerificationReport:
    """Orbit-stabilizer counts and stalk stabilizers for every face and n <= n_max."""
    settings = resolve(settings)
    require_sharp(monoid)
    report = VerificationReport(
        "orbit-stabilizer", suite_parameters(monoid, settings, n_max=n_max, seed=seed)
    )
    rng = make_rng(seed)
    k = monoid.groupification.rank
    for face in monoid.faces:
        stalk, _ = char_stalk(monoid, face)
        x = exp_point(random_cbar_point(monoid, rng, face))
        for n in range(1, n_max + 1):
            fiber = root_fiber(monoid, n, x, settings)
            case = {"face": list(face.generator_indices), "n": n}
            order = fiber.stabilizer_group.order or 0
            report.check(
                len(fiber.lifts) * order == n**k,
                "orbit_stabilizer_count",
                input=case,
                expected=n**k,
                actual=len(fiber.lifts) * order,
            )
            expected_factors = mu_n(stalk, n, settings).group.invariant_factors
            report.check(
                fiber.stabilizer_group.invariant_factors == expected_factors,
                "stabilizer_is_stalk_mu",
                input=case,
                expected=list(expected_factors),
                actual=list(fiber.stabilizer_group.invariant_factors),
            )
            report.check(
                all(
                    cpoints_close(power_point(y.point, n), x, settings)
                    for y in fiber.lifts
                ),
                "lifts_over_base",
                input=case,
            )
            first = fiber.lifts[0]
            report.check(
                all(same_mu_orbit(first, y, settings) for y in fiber.lifts),
                "lifts_form_one_orbit",
                input=case,
            )
            report.check(
                all(
                    cpoints_close(mu_act(g, first).point, first.point, settings)
                    for g in fiber.stabilizer
                ),
                "stabilizer_fixes_lift",
                input=case,
            )
    return report


def verify_phi_well_defined(
    monoid: AffineMonoid,
    n: int,
    n_samples: int = 100,
    translates: int = 10,
    seed: Optional[int] = 0,
    settings: Optional[Settings] = None,
) -> VerificationReport:
    """The μ_n-orbit of Φ_n(k) does not depend on the chosen C̄-lift."""
    settings = resolve(settings)
    _check_level(n)
    report = VerificationReport(
        "phi-well-defined",
        suite_parameters(
            monoid, settings, n=n, samples=n_samples, translates=translates, seed=seed
        ),
    )
    rng = make_rng(seed)
    for i in range(n_samples):
        k = random_kn_point(monoid, rng)
        result = phi_n(k, n, settings)
        for _ in range(translates):
            translation = random_integral(monoid, rng)
            moved = cplus_act(integral_translation(monoid, translation), result.lift)
            other = phi_n_from_lift(moved, n)
            expected = mu_act(result.twist_for(translation), result.point)
            report.check(
                cpoints_close(expected.point, other.point, settings),
                "translate_moves_by_twist",
                input={"sample": i, "translation": list(translation)},
            )
            report.check(
                same_mu_orbit(result.point, other, settings),
                "orbit_independent_of_lift",
                input={"sample": i, "translation": list(translation)},
            )
    return report
