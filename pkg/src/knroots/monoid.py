"""
Affine monoids: finitely generated submonoids of Z^d.

An ``AffineMonoid`` is always fine and torsion-free. Sharpness and
saturation are decided through its cone; saturation is computed with a
Hilbert basis in coordinates of the groupification.

Monoids are usually built from spec strings:

    N, N2, N3, ...          the free monoids N^k
    A1                      the quadric cone <(1,0), (1,1), (1,2)>
    numsemigroup:2,3        numerical semigroup with the given generators
    gens:[[1,0],[1,2]]      inline generator list (JSON)
    file:<path>             JSON document {"ambient_dim", "generators"}
"""

import json
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .config import Settings, resolve
from .cone import FaceDescriptor, RationalCone, face_equations, hilbert_basis
from .cone import faces as cone_faces
from .errors import (
    InvalidInputError,
    MonoidSpecError,
    NonDivisorError,
    NotSharpError,
    ResourceLimitError,
    TorsionError,
)
from .intlattice import (
    FinAbGroup,
    IntMatrix,
    Sublattice,
    Vector,
    as_vector,
    cokernel,
    dot,
    kernel_basis,
)

logger = logging.getLogger(__name__)

BUILTIN_MONOIDS: Dict[str, List[List[int]]] = {
    "A1": [[1, 0], [1, 1], [1, 2]],
}


def _generator_order(vector: Vector) -> Vector:
    # Lexicographic from the last coordinate, so N^k lists e_1, ..., e_k.
    return vector[::-1]


# MARK: - Faces


@dataclass(frozen=True)
class MonoidFace:
    """A face F of an affine monoid, with F^gp and the equations cutting it out."""

    descriptor: FaceDescriptor
    generator_indices: Tuple[int, ...]
    gp: Sublattice
    equations: IntMatrix

    @property
    def rank(self) -> int:
        return self.gp.rank

    def contains(self, vector: Sequence[Any]) -> bool:
        """Whether a cone element lies on this face (not a membership test for P)."""
        v = as_vector(vector)
        return all(x == 0 for x in self.equations @ v)

    def to_json(self) -> Dict[str, Any]:
        return {
            "generators": list(self.generator_indices),
            "dim": self.descriptor.dim,
            "gp_rank": self.rank,
        }


# MARK: - Affine Monoids


@dataclass(frozen=True)
class AffineMonoid:
    """Submonoid of Z^d generated by the columns of ``generators``.

    Use :meth:`from_generators` for the canonical form: columns sorted
    lexicographically starting from the last coordinate, zero and duplicate
    columns removed.
    """

    ambient_dim: int
    generators: IntMatrix

    def __post_init__(self) -> None:
        if self.generators.rows != self.ambient_dim:
            raise InvalidInputError("Generator columns must live in Z^ambient_dim")
        columns = self.generators.column_vectors()
        if any(not any(g) for g in columns):
            raise InvalidInputError("Generators must be nonzero")
        if len(set(columns)) != len(columns):
            raise InvalidInputError("Generators must be pairwise distinct")

    @classmethod
    def from_generators(
        cls, generators: Iterable[Sequence[Any]], ambient_dim: Optional[int] = None
    ) -> "AffineMonoid":
        vectors = [as_vector(g) for g in generators]
        if ambient_dim is None:
            if not vectors:
                raise InvalidInputError("ambient_dim is required without generators")
            ambient_dim = len(vectors[0])
        if any(len(v) != ambient_dim for v in vectors):
            raise InvalidInputError("Generators have inconsistent lengths")
        canonical = sorted({v for v in vectors if any(v)}, key=_generator_order)
        return cls(ambient_dim, IntMatrix.from_columns(canonical, rows=ambient_dim))

    @classmethod
    def free(cls, k: int) -> "AffineMonoid":
        """The free monoid N^k."""
        return cls.from_generators(IntMatrix.identity(k).row_vectors(), k)

    @property
    def generator_vectors(self) -> List[Vector]:
        return self.generators.column_vectors()

    @property
    def num_generators(self) -> int:
        return self.generators.cols

    # MARK: Structure

    @cached_property
    def groupification(self) -> Sublattice:
        return groupification(self)

    @cached_property
    def cone(self) -> RationalCone:
        return RationalCone.from_generators(self.ambient_dim, self.generator_vectors)

    @cached_property
    def generator_coordinates(self) -> List[Vector]:
        """Generators in coordinates of the HNF basis of P^gp."""
        return [self.gp_coordinates(g) for g in self.generator_vectors]

    @cached_property
    def grading(self) -> Vector:
        """A linear form positive on every nonzero element of a sharp monoid."""
        rows = self.cone.inequalities.row_vectors()
        return tuple(sum(col) for col in zip(*rows)) if rows else ()

    @cached_property
    def faces(self) -> List[MonoidFace]:
        return faces_of(self)

    @property
    def is_sharp(self) -> bool:
        return self.cone.is_pointed

    @property
    def is_fine(self) -> bool:
        """Always true: affine monoids are finitely generated and integral."""
        return True

    @cached_property
    def is_saturated(self) -> bool:
        return is_saturated(self)

    def gp_coordinates(self, vector: Sequence[Any]) -> Vector:
        coords = self.groupification.coordinates(vector)
        if coords is None:
            raise InvalidInputError(f"{tuple(vector)} is not in the groupification")
        return coords

    def contains(
        self, vector: Sequence[Any], settings: Optional[Settings] = None
    ) -> bool:
        return contains(self, vector, settings)

    def face_with_generators(self, indices: Iterable[int]) -> MonoidFace:
        """The face whose generator set is exactly ``indices``."""
        wanted = tuple(sorted(set(indices)))
        for face in self.faces:
            if face.generator_indices == wanted:
                return face
        raise InvalidInputError(f"Generators {list(wanted)} do not form a face")

    @property
    def trivial_face(self) -> MonoidFace:
        return self.faces[0]

    @property
    def full_face(self) -> MonoidFace:
        return self.faces[-1]

    # MARK: Serialization

    def to_json(self) -> Dict[str, Any]:
        return {
            "ambient_dim": self.ambient_dim,
            "generators": [list(g) for g in self.generator_vectors],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "AffineMonoid":
        try:
            return cls.from_generators(data["generators"], int(data["ambient_dim"]))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInputError(f"Invalid monoid JSON: {e}") from e


# MARK: - Operations


def groupification(monoid: AffineMonoid) -> Sublattice:
    """P^gp: the sublattice spanned by the generators."""
    return Sublattice.from_generators(monoid.ambient_dim, monoid.generator_vectors)


def relation_lattice(monoid: AffineMonoid) -> Sublattice:
    """Kernel of the generator map Z^r -> Z^d."""
    return kernel_basis(monoid.generators)


def faces_of(monoid: AffineMonoid) -> List[MonoidFace]:
    """All faces of a sharp monoid, from {0} to P, sorted by dimension.

    Raises:
        NotSharpError: If the monoid has nonzero units
    """
    if not monoid.is_sharp:
        raise NotSharpError("Faces are only enumerated for sharp monoids")
    cone = monoid.cone
    result = []
    for descriptor in cone_faces(cone):
        equations = face_equations(cone, descriptor)
        indices = tuple(
            j
            for j, g in enumerate(monoid.generator_vectors)
            if all(x == 0 for x in equations @ g)
        )
        gp = Sublattice.from_generators(
            monoid.ambient_dim, (monoid.generator_vectors[j] for j in indices)
        )
        result.append(MonoidFace(descriptor, indices, gp, equations))
    return result


def require_sharp(monoid: AffineMonoid) -> None:
    """Raise NotSharpError for monoids with units; warn when not saturated."""
    if not monoid.is_sharp:
        raise NotSharpError("Verification suites require a sharp monoid")
    saturated = saturation_or_none(monoid)
    if saturated is None:
        logger.warning("saturation not decided within the Hilbert basis limits")
    elif not saturated:
        logger.warning("monoid is not saturated; stalk quotients may have torsion")


def saturation_or_none(monoid: AffineMonoid) -> Optional[bool]:
    """``monoid.is_saturated``, or None when the Hilbert basis is out of reach."""
    try:
        return monoid.is_saturated
    except ResourceLimitError as e:
        logger.debug("saturation check skipped: %s", e)
        return None


def _quotient(monoid: AffineMonoid, sub: Sublattice) -> Tuple[AffineMonoid, FinAbGroup]:
    """Image of ``monoid`` in P^gp / sub, with ``sub`` given in gp coordinates."""
    k = monoid.groupification.rank
    group = cokernel(IntMatrix.from_rows(sub.vectors(), cols=k).T)
    if group.invariant_factors:
        raise TorsionError(
            "Quotient has torsion with invariant factors "
            f"{list(group.invariant_factors)}"
        )
    images = [group.project(c) for c in monoid.generator_coordinates]
    return AffineMonoid.from_generators(images, group.free_rank), group


def char_stalk(
    monoid: AffineMonoid, face: MonoidFace
) -> Tuple[AffineMonoid, FinAbGroup]:
    """The sharp quotient P/F in the lattice P^gp / F^gp.

    Returns:
        The quotient monoid and the quotient map on P^gp coordinates

    Raises:
        TorsionError: If P^gp / F^gp has torsion (non-saturated input)
    """
    sub = Sublattice.from_generators(
        monoid.groupification.rank,
        (monoid.gp_coordinates(v) for v in face.gp.vectors()),
    )
    quotient, group = _quotient(monoid, sub)
    logger.debug(
        "characteristic stalk over face %s: rank %d",
        face.generator_indices,
        group.free_rank,
    )
    return quotient, group


def _in_gp_coordinates(monoid: AffineMonoid) -> AffineMonoid:
    return AffineMonoid.from_generators(
        monoid.generator_coordinates, monoid.groupification.rank
    )


def _is_unimodular_simplicial(local: AffineMonoid) -> bool:
    """Generated by its primitive rays, which form a basis of Z^k."""
    k = local.ambient_dim
    if local.num_generators == k:
        return True
    rays = local.cone.rays
    if rays.rows != k or abs(rays.det()) != 1:
        return False
    return set(local.cone.ray_vectors) <= set(local.generator_vectors)


def is_saturated(monoid: AffineMonoid, settings: Optional[Settings] = None) -> bool:
    """Whether P = P^gp ∩ cone(P)."""
    if monoid.is_sharp:
        local = _in_gp_coordinates(monoid)
        if _is_unimodular_simplicial(local):
            return True
        # The Hilbert basis of P^gp ∩ cone(P) lies in every generating set.
        basis = hilbert_basis(local.cone, settings)
        return set(basis) <= set(local.generator_vectors)

    local = _in_gp_coordinates(monoid)
    k = local.ambient_dim
    lineality = kernel_basis(local.cone.inequalities)
    units = Sublattice.from_generators(
        k, (g for g in local.generator_vectors if lineality.contains(g))
    )
    if units != lineality:
        return False
    quotient, _ = _quotient(local, lineality)
    return is_saturated(quotient, settings)


def saturate(
    monoid: AffineMonoid, settings: Optional[Settings] = None, ambient: bool = False
) -> AffineMonoid:
    """P^gp ∩ cone(P), generated by its Hilbert basis.

    Args:
        monoid: A sharp monoid
        settings: Resource guards for the Hilbert basis
        ambient: Saturate in Z^d ∩ span(P) instead of P^gp

    Raises:
        NotSharpError: If the monoid has nonzero units
    """
    if not monoid.is_sharp:
        raise NotSharpError("Saturation requires a sharp monoid")
    if ambient:
        return AffineMonoid.from_generators(
            hilbert_basis(monoid.cone, settings), monoid.ambient_dim
        )
    local = _in_gp_coordinates(monoid)
    basis = hilbert_basis(local.cone, settings)
    gp = monoid.groupification
    return AffineMonoid.from_generators(
        (gp.combination(h) for h in basis), monoid.ambient_dim
    )


def contains(
    monoid: AffineMonoid, vector: Sequence[Any], settings: Optional[Settings] = None
) -> bool:
    """Exact membership p ∈ P.

    Saturated monoids use the cone and lattice test; other sharp monoids a
    graded search over generators.

    Raises:
        NotSharpError: For a non-saturated monoid with nonzero units
        ResourceLimitError: If the search visits more than the enumeration limit
    """
    settings = resolve(settings)
    p = as_vector(vector)
    if len(p) != monoid.ambient_dim:
        raise InvalidInputError("Element does not live in the ambient lattice")
    if not monoid.groupification.contains(p) or not monoid.cone.contains(p):
        return False
    saturated = saturation_or_none(monoid) if monoid.is_sharp else monoid.is_saturated
    if saturated:
        return True
    if not monoid.is_sharp:
        raise NotSharpError("Membership in non-saturated monoids requires sharpness")

    grading = monoid.grading
    generators = monoid.generator_vectors
    cone = monoid.cone
    seen: Dict[Vector, bool] = {}

    def reachable(target: Vector) -> bool:
        if not any(target):
            return True
        if target in seen:
            return seen[target]
        if len(seen) >= settings.enumeration_limit:
            raise ResourceLimitError(
                "Monoid membership search exceeded the enumeration limit"
            )
        seen[target] = False
        level = dot(grading, target)
        for g in generators:
            if dot(grading, g) > level:
                continue
            rest = tuple(a - b for a, b in zip(target, g))
            if cone.contains(rest) and reachable(rest):
                seen[target] = True
                break
        return seen[target]

    return reachable(p)


# MARK: - Kummer Roots


@dataclass(frozen=True)
class KummerRoot:
    """(1/n)P, identified with P, and the inclusion P -> (1/n)P."""

    base: AffineMonoid
    n: int
    inclusion: IntMatrix

    @property
    def monoid(self) -> AffineMonoid:
        return self.base

    def include(self, vector: Sequence[Any]) -> Vector:
        """Image of an element of P under the inclusion, as an element of Z^d."""
        return tuple(self.n * x for x in as_vector(vector))


def kummer_root(monoid: AffineMonoid, n: int) -> KummerRoot:
    """(1/n)P with inclusion n·I on gp coordinates."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    k = monoid.groupification.rank
    return KummerRoot(monoid, n, IntMatrix.identity(k).scaled(n))


def kummer_transition(monoid: AffineMonoid, n: int, m: int) -> IntMatrix:
    """Matrix of (1/n)P ⊆ (1/m)P on gp coordinates: (m/n)·I.

    Raises:
        NonDivisorError: If n does not divide m
    """
    if n < 1 or m < 1:
        raise InvalidInputError("Levels must be positive")
    if m % n:
        raise NonDivisorError(f"{n} does not divide {m}")
    return IntMatrix.identity(monoid.groupification.rank).scaled(m // n)


# MARK: - Spec Strings

_FREE_PATTERN = re.compile(r"^N(\d*)$")


def parse_monoid_spec(spec: str) -> AffineMonoid:
    """Build a monoid from a spec string.

    Raises:
        MonoidSpecError: If the spec cannot be parsed
    """
    spec = spec.strip()
    try:
        match = _FREE_PATTERN.match(spec)
        if match:
            k = int(match.group(1) or 1)
            if k < 1:
                raise MonoidSpecError("N0 is not a valid monoid name")
            return AffineMonoid.free(k)
        if spec in BUILTIN_MONOIDS:
            return AffineMonoid.from_generators(BUILTIN_MONOIDS[spec])
        if spec.startswith("numsemigroup:"):
            values = [int(x) for x in spec.split(":", 1)[1].split(",") if x.strip()]
            if not values or any(v <= 0 for v in values):
                raise MonoidSpecError("Numerical semigroup generators must be positive")
            return AffineMonoid.from_generators([[v] for v in values], 1)
        if spec.startswith("gens:"):
            gens = json.loads(spec[len("gens:") :])
            if not isinstance(gens, list) or not gens:
                raise MonoidSpecError("gens: expects a non-empty JSON list of vectors")
            return AffineMonoid.from_generators(gens)
        if spec.startswith("file:"):
            path = Path(spec[len("file:") :])
            return AffineMonoid.from_json(json.loads(path.read_text()))
    except MonoidSpecError:
        raise
    except (InvalidInputError, OSError, ValueError, TypeError) as e:
        raise MonoidSpecError(f"Cannot parse monoid spec {spec!r}: {e}") from e
    raise MonoidSpecError(f"Unknown monoid spec {spec!r}")
