"""
Points of the local models over an affine monoid P.

All homomorphisms are stored as real vectors on HNF bases: hom data on a
face F lives on the basis of F^gp, data defined on all of P on the basis of
P^gp. Angles are normalized to [0, 2π). The value −∞ is never stored; it is
encoded by the support face.

    CPoint          x ∈ Hom(P, C)                (face, log|x| on F^gp, arg x on F^gp)
    CBarPoint       x ∈ Hom(P, C̄)                (face, u on F^gp, v on P^gp)
    KNPoint         x ∈ Hom(P, R≥0 × S¹)         (face, log ρ on F^gp, σ on P^gp)
    RealPoint       x ∈ Hom(P, R≥0)              (face, log ρ on F^gp)
    CPlusElement    g ∈ Hom(P, C⁺)               (Re g, Im g on P^gp)
    CStarElement    h ∈ Hom(P, C^×)              (log|h|, arg h on P^gp)
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import Settings, resolve
from .errors import (
    InvalidInputError,
    MonoidMismatchError,
    NotAHomomorphismError,
    NotInMonoidError,
)
from .intlattice import IntMatrix, Sublattice, Vector, as_vector, hnf, solve_integral
from .monoid import AffineMonoid, MonoidFace

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
PRECISION = 17

Reals = Tuple[float, ...]


# MARK: - Real Vector Helpers


def wrap_angles(angles: Any) -> Reals:
    """Normalize angles to [0, 2π)."""
    wrapped = np.mod(np.asarray(angles, dtype=float), TWO_PI)
    wrapped[wrapped >= TWO_PI] = 0.0
    return tuple(float(a) for a in wrapped)


def angle_distance(a: Any, b: Any) -> float:
    """Largest circular distance between two angle vectors."""
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if diff.size == 0:
        return 0.0
    circular = np.abs(np.mod(diff + math.pi, TWO_PI) - math.pi)
    return float(circular.max())


def max_difference(a: Any, b: Any) -> float:
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return float(np.abs(diff).max()) if diff.size else 0.0


def _reals(values: Any, length: int, name: str) -> Reals:
    result = tuple(float(x) for x in values)
    if len(result) != length:
        raise InvalidInputError(f"{name} has length {len(result)}, expected {length}")
    if not all(math.isfinite(x) for x in result):
        raise InvalidInputError(f"{name} must be finite")
    return result


def _to_json_reals(values: Sequence[float]) -> List[str]:
    return [f"{x:.{PRECISION}g}" for x in values]


# MARK: - Face Restriction and Extension


@lru_cache(maxsize=512)
def restriction_matrix(monoid: AffineMonoid, face: MonoidFace) -> IntMatrix:
    """Rows: the F^gp basis in P^gp coordinates."""
    return monoid.groupification.coordinate_matrix(face.gp)


def restrict_to_face(
    monoid: AffineMonoid, face: MonoidFace, values: Sequence[float]
) -> Reals:
    """Restriction of a real hom on P^gp to F^gp."""
    R = restriction_matrix(monoid, face)
    if R.rows == 0:
        return ()
    restricted = R.to_array().astype(float) @ np.asarray(values, dtype=float)
    return tuple(float(x) for x in restricted)


def extend_from_face(
    monoid: AffineMonoid, face: MonoidFace, values: Sequence[float]
) -> Reals:
    """A real hom on P^gp restricting to ``values`` on F^gp.

    The extension vanishes on the P^gp basis vectors outside the HNF pivot
    columns of the restriction matrix, which fixes a complement of F^gp.
    """
    R = restriction_matrix(monoid, face)
    k = monoid.groupification.rank
    result = np.zeros(k)
    if R.rows:
        H, _ = hnf(R)
        pivots = Sublattice(k, H).pivot_columns()
        square = R.select_columns(pivots).to_array().astype(float)
        result[pivots] = np.linalg.solve(square, np.asarray(values, dtype=float))
    return tuple(float(x) for x in result)


def _integral_inverse(coords: Sequence[Vector], rank: int) -> np.ndarray:
    """Integer A with A @ coords == I, for coords generating Z^rank."""
    C = IntMatrix.from_rows(coords, cols=rank)
    rows = []
    for i in range(rank):
        target = [1 if j == i else 0 for j in range(rank)]
        solution = solve_integral(C.T, target)
        if solution is None:
            raise InvalidInputError("Generators do not span their lattice")
        rows.append(solution)
    return np.array(rows, dtype=float).reshape(rank, len(coords))


def _evaluate(
    lattice: Sublattice, values: Sequence[float], element: Sequence[int]
) -> float:
    coords = lattice.coordinates(element)
    if coords is None:
        raise NotInMonoidError(f"{tuple(element)} is not in the lattice")
    return float(sum(c * w for c, w in zip(coords, values)))


def _check_same_monoid(a: AffineMonoid, b: AffineMonoid) -> None:
    if a != b:
        raise MonoidMismatchError("Operands live over different monoids")


# MARK: - Characters


@dataclass(frozen=True)
class Character:
    """Hom from a lattice to S¹, given by angles on its HNF basis."""

    lattice: Sublattice
    angles: Reals

    def __post_init__(self) -> None:
        if len(self.angles) != self.lattice.rank:
            raise InvalidInputError("Character needs one angle per basis vector")

    @classmethod
    def from_angles(cls, lattice: Sublattice, angles: Sequence[float]) -> "Character":
        return cls(lattice, wrap_angles(_reals(angles, lattice.rank, "angles")))

    def angle_at(self, element: Sequence[int]) -> float:
        return _evaluate(self.lattice, self.angles, element) % TWO_PI

    def to_json(self) -> Dict[str, Any]:
        return {"angles": _to_json_reals(self.angles), "rank": self.lattice.rank}


# MARK: - Point Types


@dataclass(frozen=True)
class CPoint:
    """A point of C(P) = Hom(P, C) with support face F."""

    monoid: AffineMonoid
    face: MonoidFace
    modulus: Reals
    character: Character

    def __post_init__(self) -> None:
        if (
            len(self.modulus) != self.face.rank
            or self.character.lattice != self.face.gp
        ):
            raise InvalidInputError("Point data does not match the support face")

    def generator_values(self) -> List[complex]:
        return [eval_c(self, g) for g in self.monoid.generator_vectors]

    def to_json(self) -> Dict[str, Any]:
        return {
            "monoid": self.monoid.to_json(),
            "face": list(self.face.generator_indices),
            "modulus": _to_json_reals(self.modulus),
            "angles": _to_json_reals(self.character.angles),
            "values": [
                _to_json_reals((z.real, z.imag)) for z in self.generator_values()
            ],
            "precision": PRECISION,
        }


@dataclass(frozen=True)
class CBarPoint:
    """A point of C̄(P); generators off the face have first coordinate −∞."""

    monoid: AffineMonoid
    face: MonoidFace
    u: Reals
    v: Reals

    def __post_init__(self) -> None:
        if (
            len(self.u) != self.face.rank
            or len(self.v) != self.monoid.groupification.rank
        ):
            raise InvalidInputError("Point data does not match the lattice ranks")

    def to_json(self) -> Dict[str, Any]:
        return {
            "monoid": self.monoid.to_json(),
            "face": list(self.face.generator_indices),
            "u": _to_json_reals(self.u),
            "v": _to_json_reals(self.v),
            "precision": PRECISION,
        }


@dataclass(frozen=True)
class KNPoint:
    """A point (ρ, σ) of Hom(P, R≥0 × S¹); ρ has support F."""

    monoid: AffineMonoid
    face: MonoidFace
    log_modulus: Reals
    sigma: Character

    def __post_init__(self) -> None:
        if len(self.log_modulus) != self.face.rank:
            raise InvalidInputError("log_modulus does not match the support face")
        if self.sigma.lattice != self.monoid.groupification:
            raise InvalidInputError("sigma must be a character of P^gp")

    def to_json(self) -> Dict[str, Any]:
        return {
            "monoid": self.monoid.to_json(),
            "face": list(self.face.generator_indices),
            "log_modulus": _to_json_reals(self.log_modulus),
            "sigma": _to_json_reals(self.sigma.angles),
            "precision": PRECISION,
        }


@dataclass(frozen=True)
class RealPoint:
    """A point of Hom(P, R≥0), stored as logs on F^gp."""

    monoid: AffineMonoid
    face: MonoidFace
    log_modulus: Reals


@dataclass(frozen=True)
class CPlusElement:
    """An element of C⁺(P) = Hom(P^gp, C), on the P^gp basis."""

    monoid: AffineMonoid
    re: Reals
    im: Reals

    def __post_init__(self) -> None:
        k = self.monoid.groupification.rank
        if len(self.re) != k or len(self.im) != k:
            raise InvalidInputError("Group element does not match rank P^gp")

    def scaled(self, r: float) -> "CPlusElement":
        return CPlusElement(
            self.monoid, tuple(r * x for x in self.re), tuple(r * x for x in self.im)
        )


@dataclass(frozen=True)
class CStarElement:
    """An element of C^×(P) = Hom(P^gp, C^×), on the P^gp basis."""

    monoid: AffineMonoid
    log_modulus: Reals
    angles: Reals


# MARK: - Evaluation


def _require_element(
    monoid: AffineMonoid, element: Sequence[Any], settings: Optional[Settings]
) -> Vector:
    p = as_vector(element)
    if len(p) != monoid.ambient_dim or not monoid.contains(p, settings):
        raise NotInMonoidError(f"{p} is not an element of the monoid")
    return p


def eval_c(
    x: CPoint, element: Sequence[Any], settings: Optional[Settings] = None
) -> complex:
    """x(p): zero off the support face, exp(log|x|(p) + i·arg x(p)) on it.

    Raises:
        NotInMonoidError: If p is not in P
    """
    p = _require_element(x.monoid, element, settings)
    if not x.face.contains(p):
        return 0j
    log_modulus = _evaluate(x.face.gp, x.modulus, p)
    angle = _evaluate(x.face.gp, x.character.angles, p)
    return complex(np.exp(complex(log_modulus, angle)))


def eval_cbar(
    x: CBarPoint, element: Sequence[Any], settings: Optional[Settings] = None
) -> Tuple[Optional[float], float]:
    """(u(p), v(p)), with None standing for −∞ off the support face."""
    p = _require_element(x.monoid, element, settings)
    second = _evaluate(x.monoid.groupification, x.v, p)
    if not x.face.contains(p):
        return None, second
    return _evaluate(x.face.gp, x.u, p), second


# MARK: - Maps Between Models


def exp_point(x: CBarPoint) -> CPoint:
    """C̄(P) -> C(P), (u, v) ↦ e^{u + iv} with e^{−∞ + iv} = 0."""
    angles = restrict_to_face(x.monoid, x.face, x.v)
    return CPoint(x.monoid, x.face, x.u, Character(x.face.gp, wrap_angles(angles)))


def cbar_to_kn(x: CBarPoint) -> KNPoint:
    """C̄(P) -> (R≥0 × S¹)(P), (u, v) ↦ (e^u, e^{iv})."""
    sigma = Character(x.monoid.groupification, wrap_angles(x.v))
    return KNPoint(x.monoid, x.face, x.u, sigma)


def tau(k: KNPoint) -> CPoint:
    """(ρ, σ) ↦ ρ·σ."""
    angles = restrict_to_face(k.monoid, k.face, k.sigma.angles)
    character = Character(k.face.gp, wrap_angles(angles))
    return CPoint(k.monoid, k.face, k.log_modulus, character)


def kn_to_real(k: KNPoint) -> RealPoint:
    """Forget the S¹ part."""
    return RealPoint(k.monoid, k.face, k.log_modulus)


def lift_kn(k: KNPoint) -> CBarPoint:
    """The canonical C̄-lift of a KN point: u = log ρ, v = σ in [0, 2π)."""
    return CBarPoint(k.monoid, k.face, k.log_modulus, k.sigma.angles)


def scale(x: CBarPoint, r: float) -> CBarPoint:
    """(u, v) ↦ (r·u, r·v) for r > 0."""
    if not r > 0:
        raise InvalidInputError(f"Scale factor must be positive, got {r}")
    return CBarPoint(
        x.monoid, x.face, tuple(r * a for a in x.u), tuple(r * b for b in x.v)
    )


# MARK: - Group Actions


def cplus_act(g: CPlusElement, x: CBarPoint) -> CBarPoint:
    """Translate by g: u += Re g on F^gp, v += Im g."""
    _check_same_monoid(g.monoid, x.monoid)
    shift = restrict_to_face(x.monoid, x.face, g.re)
    return CBarPoint(
        x.monoid,
        x.face,
        tuple(a + b for a, b in zip(x.u, shift)),
        tuple(a + b for a, b in zip(x.v, g.im)),
    )


def exp_group(g: CPlusElement) -> CStarElement:
    """C⁺(P) -> C^×(P); the kernel is 2πi·Z(P)."""
    return CStarElement(g.monoid, g.re, wrap_angles(g.im))


def cstar_act(h: CStarElement, point: Union[CPoint, KNPoint]) -> Union[CPoint, KNPoint]:
    """Multiply a C-point or KN-point by h."""
    _check_same_monoid(h.monoid, point.monoid)
    shift = restrict_to_face(point.monoid, point.face, h.log_modulus)
    if isinstance(point, CPoint):
        modulus = tuple(a + b for a, b in zip(point.modulus, shift))
        turn = restrict_to_face(point.monoid, point.face, h.angles)
        angles = np.asarray(point.character.angles) + np.asarray(turn)
        character = Character(point.face.gp, wrap_angles(angles))
        return CPoint(point.monoid, point.face, modulus, character)
    log_modulus = tuple(a + b for a, b in zip(point.log_modulus, shift))
    sigma = np.asarray(point.sigma.angles) + np.asarray(h.angles)
    return KNPoint(
        point.monoid,
        point.face,
        log_modulus,
        Character(point.sigma.lattice, wrap_angles(sigma)),
    )


def same_orbit_cplus(x: CBarPoint, y: CBarPoint) -> Optional[CPlusElement]:
    """The canonical g with g·x = y, or None when the faces differ."""
    _check_same_monoid(x.monoid, y.monoid)
    if x.face != y.face:
        return None
    du = [b - a for a, b in zip(x.u, y.u)]
    re = extend_from_face(x.monoid, x.face, du)
    im = tuple(b - a for a, b in zip(x.v, y.v))
    return CPlusElement(x.monoid, re, im)


def same_orbit_cstar(k1: KNPoint, k2: KNPoint) -> Optional[CStarElement]:
    """The canonical h with h·k1 = k2, or None when the faces differ."""
    _check_same_monoid(k1.monoid, k2.monoid)
    if k1.face != k2.face:
        return None
    dlog = [b - a for a, b in zip(k1.log_modulus, k2.log_modulus)]
    log_modulus = extend_from_face(k1.monoid, k1.face, dlog)
    angles = np.asarray(k2.sigma.angles) - np.asarray(k1.sigma.angles)
    return CStarElement(k1.monoid, log_modulus, wrap_angles(angles))


def same_orbit_real(a: RealPoint, b: RealPoint) -> Optional[Reals]:
    """Logs on P^gp of the canonical t ∈ R>0(P) with t·a = b, or None."""
    _check_same_monoid(a.monoid, b.monoid)
    if a.face != b.face:
        return None
    dlog = [y - x for x, y in zip(a.log_modulus, b.log_modulus)]
    return extend_from_face(a.monoid, a.face, dlog)


# MARK: - Z(P)


def integral_translation(monoid: AffineMonoid, k: Sequence[Any]) -> CPlusElement:
    """The element 2πi·k of C⁺(P) for k ∈ Z(P) = Hom(P^gp, Z)."""
    vector = as_vector(k)
    rank = monoid.groupification.rank
    if len(vector) != rank:
        raise InvalidInputError(f"Z(P) elements have rank {rank}")
    return CPlusElement(monoid, (0.0,) * rank, tuple(TWO_PI * c for c in vector))


def integral_part(
    g: CPlusElement, settings: Optional[Settings] = None
) -> Optional[Vector]:
    """k with g = 2πi·k, or None if g is not in 2πi·Z(P)."""
    settings = resolve(settings)
    if any(abs(x) > settings.log_tol for x in g.re):
        return None
    turns = np.asarray(g.im, dtype=float) / TWO_PI
    rounded = np.round(turns)
    error = float(np.abs(turns - rounded).max()) * TWO_PI if turns.size else 0.0
    if error > settings.angle_tol:
        return None
    return tuple(int(c) for c in rounded)


# MARK: - Construction From Values


def _support_face(monoid: AffineMonoid, support: Sequence[int]) -> MonoidFace:
    try:
        return monoid.face_with_generators(support)
    except InvalidInputError as e:
        raise NotAHomomorphismError(
            f"Support {list(support)} is not a face of the monoid"
        ) from e


def _solve_on_lattice(
    lattice: Sublattice,
    generators: Sequence[Vector],
    logs: Sequence[float],
    angles: Optional[Sequence[float]],
    settings: Settings,
) -> Tuple[Reals, Optional[Reals]]:
    """Hom data on a lattice basis from values on generators of the lattice."""
    coords = [lattice.coordinates(g) for g in generators]
    rank = lattice.rank
    if any(c is None for c in coords):
        raise InvalidInputError("Generators are not in the lattice")
    C = np.array(coords, dtype=float).reshape(len(coords), rank)
    A = _integral_inverse(coords, rank)  # type: ignore[arg-type]

    log_values = A @ np.asarray(logs, dtype=float)
    residual = np.abs(C @ log_values - np.asarray(logs, dtype=float))
    bound = settings.log_tol * np.maximum(1.0, np.abs(np.asarray(logs, dtype=float)))
    if np.any(residual > bound):
        raise NotAHomomorphismError("Moduli are not multiplicative on the relations")

    angle_values = None
    if angles is not None:
        raw = A @ np.asarray(angles, dtype=float)
        tol = settings.angle_tol * max(1.0, float(np.abs(C).sum()))
        if angle_distance(C @ raw, angles) > tol:
            raise NotAHomomorphismError(
                "Phases are not multiplicative on the relations"
            )
        angle_values = wrap_angles(raw)
    return tuple(float(x) for x in log_values), angle_values


def cpoint_from_values(
    monoid: AffineMonoid, values: Sequence[complex], settings: Optional[Settings] = None
) -> CPoint:
    """A C-point from its complex values on the generators.

    Raises:
        NotAHomomorphismError: If the zero pattern is not a face or the values
            are not multiplicative
    """
    settings = resolve(settings)
    zs = [complex(z) for z in values]
    if len(zs) != monoid.num_generators:
        raise InvalidInputError(
            f"Expected {monoid.num_generators} values, got {len(zs)}"
        )
    support = [j for j, z in enumerate(zs) if z != 0]
    face = _support_face(monoid, support)
    gens = [monoid.generator_vectors[j] for j in face.generator_indices]
    logs = [math.log(abs(zs[j])) for j in face.generator_indices]
    phases = [math.atan2(zs[j].imag, zs[j].real) for j in face.generator_indices]
    modulus, angles = _solve_on_lattice(face.gp, gens, logs, phases, settings)
    assert angles is not None
    return CPoint(monoid, face, modulus, Character(face.gp, angles))


def knpoint_from_polar(
    monoid: AffineMonoid,
    radii: Sequence[float],
    phases: Sequence[float],
    settings: Optional[Settings] = None,
) -> KNPoint:
    """A KN point from (ρ, σ) given per generator as radius and phase.

    Phases are required on every generator since σ is defined on all of P.
    """
    settings = resolve(settings)
    r = _reals(radii, monoid.num_generators, "radii")
    theta = _reals(phases, monoid.num_generators, "phases")
    if any(x < 0 for x in r):
        raise InvalidInputError("Radii must be non-negative")
    support = [j for j, x in enumerate(r) if x > 0]
    face = _support_face(monoid, support)
    gens = [monoid.generator_vectors[j] for j in face.generator_indices]
    logs = [math.log(r[j]) for j in face.generator_indices]
    log_modulus, _ = _solve_on_lattice(face.gp, gens, logs, None, settings)
    gp = monoid.groupification
    zeros = [0.0] * monoid.num_generators
    _, sigma = _solve_on_lattice(gp, monoid.generator_vectors, zeros, theta, settings)
    assert sigma is not None
    return KNPoint(monoid, face, log_modulus, Character(gp, sigma))


def _face_from_json(monoid: AffineMonoid, data: Dict[str, Any]) -> MonoidFace:
    """The support face of a serialized point, checked against ``monoid``."""
    if "monoid" in data and data["monoid"] != monoid.to_json():
        raise InvalidInputError("Point was written for a different monoid")
    face = data["face"]
    if not isinstance(face, list) or not all(isinstance(j, int) for j in face):
        raise InvalidInputError("face is a list of generator indices")
    return monoid.face_with_generators(face)


def cbarpoint_from_json(monoid: AffineMonoid, data: Any) -> CBarPoint:
    """Parse ``{"face": [...], "u": [...], "v": [...]}`` as written by to_json."""
    if not isinstance(data, dict) or not {"face", "u", "v"} <= data.keys():
        raise InvalidInputError('C̄-points are given as {"face", "u", "v"}')
    face = _face_from_json(monoid, data)
    u = _reals(data["u"], face.rank, "u")
    v = _reals(data["v"], monoid.groupification.rank, "v")
    return CBarPoint(monoid, face, u, v)


def cpoint_from_json(
    monoid: AffineMonoid, data: Any, settings: Optional[Settings] = None
) -> CPoint:
    """Parse a C-point.

    Accepts ``{"face", "modulus", "angles"}`` as written by ``CPoint.to_json``,
    or ``{"values": [[re, im] | number, ...]}`` on the generators.
    """
    if isinstance(data, dict) and {"face", "modulus", "angles"} <= data.keys():
        face = _face_from_json(monoid, data)
        modulus = _reals(data["modulus"], face.rank, "modulus")
        character = Character.from_angles(face.gp, data["angles"])
        return CPoint(monoid, face, modulus, character)
    if not isinstance(data, dict) or "values" not in data:
        raise InvalidInputError(
            'C-points are given as {"face", "modulus", "angles"} or {"values"}'
        )
    values = [_parse_complex(v) for v in data["values"]]
    return cpoint_from_values(monoid, values, settings)


def knpoint_from_json(
    monoid: AffineMonoid, data: Any, settings: Optional[Settings] = None
) -> KNPoint:
    """Parse a KN point.

    Accepted forms:
        ``{"face", "log_modulus", "sigma"}`` as written by ``KNPoint.to_json``
        ``{"face", "u", "v"}``, a C̄-point mapped by ``cbar_to_kn``
        ``{"radii": [...], "phases": [...]}`` per generator
        ``{"values": [...]}`` per generator, the phase at a zero value taken as 0
    """
    if not isinstance(data, dict):
        raise InvalidInputError("KN points are given as JSON objects")
    if {"face", "log_modulus", "sigma"} <= data.keys():
        face = _face_from_json(monoid, data)
        log_modulus = _reals(data["log_modulus"], face.rank, "log_modulus")
        sigma = Character.from_angles(monoid.groupification, data["sigma"])
        return KNPoint(monoid, face, log_modulus, sigma)
    if {"face", "u", "v"} <= data.keys():
        return cbar_to_kn(cbarpoint_from_json(monoid, data))
    if "radii" in data:
        phases = data.get("phases", [0.0] * len(data["radii"]))
        return knpoint_from_polar(monoid, data["radii"], phases, settings)
    if "values" in data:
        zs = [_parse_complex(v) for v in data["values"]]
        radii = [abs(z) for z in zs]
        phases = [math.atan2(z.imag, z.real) for z in zs]
        return knpoint_from_polar(monoid, radii, phases, settings)
    raise InvalidInputError(
        'KN points are given as {"face", "log_modulus", "sigma"}, {"face", "u", "v"}, '
        '{"radii", "phases"} or {"values"}'
    )

def _parse_complex(value: Any) -> complex:
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise InvalidInputError("Complex values are [re, im] pairs")
            return complex(float(value[0]), float(value[1]))
        return complex(float(value), 0.0)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"Cannot parse complex value {value!r}") from e


# MARK: - Comparisons


def cpoints_close(a: CPoint, b: CPoint, settings: Optional[Settings] = None) -> bool:
    settings = resolve(settings)
    return (
        a.monoid == b.monoid
        and a.face == b.face
        and max_difference(a.modulus, b.modulus) <= settings.log_tol
        and angle_distance(a.character.angles, b.character.angles) <= settings.angle_tol
    )


def knpoints_close(a: KNPoint, b: KNPoint, settings: Optional[Settings] = None) -> bool:
    settings = resolve(settings)
    return (
        a.monoid == b.monoid
        and a.face == b.face
        and max_difference(a.log_modulus, b.log_modulus) <= settings.log_tol
        and angle_distance(a.sigma.angles, b.sigma.angles) <= settings.angle_tol
    )


# MARK: - Sampling


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_face(monoid: AffineMonoid, rng: np.random.Generator) -> MonoidFace:
    faces = monoid.faces
    return faces[int(rng.integers(len(faces)))]


def random_cbar_point(
    monoid: AffineMonoid, rng: np.random.Generator, face: Optional[MonoidFace] = None
) -> CBarPoint:
    """u uniform in [−2, 2], v uniform in [−4π, 4π] (not normalized)."""
    face = random_face(monoid, rng) if face is None else face
    u = rng.uniform(-2.0, 2.0, size=face.rank)
    v = rng.uniform(-2 * TWO_PI, 2 * TWO_PI, size=monoid.groupification.rank)
    return CBarPoint(
        monoid, face, tuple(float(x) for x in u), tuple(float(x) for x in v)
    )


def random_kn_point(
    monoid: AffineMonoid, rng: np.random.Generator, face: Optional[MonoidFace] = None
) -> KNPoint:
    return cbar_to_kn(random_cbar_point(monoid, rng, face))


def random_cplus(monoid: AffineMonoid, rng: np.random.Generator) -> CPlusElement:
    k = monoid.groupification.rank
    re = rng.uniform(-2.0, 2.0, size=k)
    im = rng.uniform(-2 * TWO_PI, 2 * TWO_PI, size=k)
    return CPlusElement(
        monoid, tuple(float(x) for x in re), tuple(float(x) for x in im)
    )


def random_integral(
    monoid: AffineMonoid, rng: np.random.Generator, bound: int = 3
) -> Vector:
    """A random element of Z(P) with entries in [−bound, bound]."""
    k = monoid.groupification.rank
    return tuple(int(x) for x in rng.integers(-bound, bound + 1, size=k))
