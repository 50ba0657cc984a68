"""
Rational polyhedral cones.

A cone is given by primitive integer ray generators; its dual description is
the list of primitive inward normals h with cone = {v : <h, v> >= 0}. When
the cone is not full-dimensional the list also holds both signs of a basis of
the orthogonal complement of its span.

Everything here is exact and desk-scale: facets come from enumerating
spanning subsets of rays, faces from intersecting facet-tight ray sets, and
Hilbert bases from a pulling triangulation plus fundamental parallelepiped
enumeration.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .config import Settings, resolve
from .errors import InvalidInputError, NotPointedError, ResourceLimitError
from .intlattice import (
    IntMatrix,
    Sublattice,
    Vector,
    as_vector,
    cokernel,
    dot,
    kernel_basis,
    primitive,
    solve_rational,
)

logger = logging.getLogger(__name__)


def _canonical_rays(vectors: Iterable[Sequence[Any]], ambient_dim: int) -> List[Vector]:
    rays: Set[Vector] = set()
    for v in vectors:
        vector = as_vector(v)
        if len(vector) != ambient_dim:
            raise InvalidInputError(
                f"Ray {vector} does not live in Z^{ambient_dim}"
            )
        if any(vector):
            rays.add(primitive(vector))
    return sorted(rays)


def _matrix(vectors: Sequence[Vector], ambient_dim: int) -> IntMatrix:
    return IntMatrix.from_rows(vectors, cols=ambient_dim)


# MARK: - Dual Description


def dual_description(
    rays: Any, ambient_dim: Optional[int] = None, settings: Optional[Settings] = None
) -> IntMatrix:
    """Facet normals of the cone generated by ``rays``.

    Args:
        rays: IntMatrix or sequence of integer vectors (rows are generators)
        ambient_dim: Dimension d of the ambient lattice, needed without rays
        settings: Resource guards

    Returns:
        IntMatrix whose rows h satisfy cone = {v : <h, v> >= 0 for all h},
        each row primitive, rows sorted lexicographically

    Raises:
        ResourceLimitError: If d exceeds the configured dimension guard
    """
    settings = resolve(settings)
    if isinstance(rays, IntMatrix):
        ambient_dim = rays.cols if ambient_dim is None else ambient_dim
        rays = rays.row_vectors()
    if ambient_dim is None:
        raise InvalidInputError("ambient_dim is required")
    if ambient_dim > settings.max_cone_dim:
        raise ResourceLimitError(
            f"Dual description limited to dimension {settings.max_cone_dim}, "
            f"got {ambient_dim}"
        )

    vectors = _canonical_rays(rays, ambient_dim)
    complement = kernel_basis(_matrix(vectors, ambient_dim)).vectors()
    k = ambient_dim - len(complement)

    normals: Set[Vector] = set()
    if k > 0:
        for subset in itertools.combinations(vectors, k - 1):
            line = kernel_basis(_matrix(list(subset) + complement, ambient_dim))
            if line.rank != 1:
                continue
            h = line.vectors()[0]
            values = [dot(h, v) for v in vectors]
            if all(x >= 0 for x in values):
                normals.add(h)
            elif all(x <= 0 for x in values):
                normals.add(tuple(-x for x in h))

    for e in complement:
        normals.add(e)
        normals.add(tuple(-x for x in e))

    logger.debug(
        "dual description in Z^%d: %d rays -> %d inequalities",
        ambient_dim,
        len(vectors),
        len(normals),
    )
    return _matrix(sorted(normals), ambient_dim)


# MARK: - Cones and Faces


@dataclass(frozen=True)
class FaceDescriptor:
    """A face of a cone, given by the rays lying on it."""

    ray_indices: Tuple[int, ...]
    dim: int

    def to_json(self) -> Dict[str, Any]:
        return {"ray_indices": list(self.ray_indices), "dim": self.dim}


@dataclass(frozen=True)
class RationalCone:
    """Cone generated by primitive integer rays (rows of ``rays``)."""

    ambient_dim: int
    rays: IntMatrix
    facets: Optional[IntMatrix] = None

    @classmethod
    def from_generators(
        cls,
        ambient_dim: int,
        generators: Iterable[Sequence[Any]],
        settings: Optional[Settings] = None,
    ) -> "RationalCone":
        """Cone generated by arbitrary integer vectors.

        Generators are made primitive and deduplicated; for pointed cones
        only the extreme rays are kept. Facets are computed eagerly.
        """
        vectors = _canonical_rays(generators, ambient_dim)
        facets = dual_description(vectors, ambient_dim, settings)
        lineality = kernel_basis(facets)
        if lineality.rank == 0:
            vectors = [v for v in vectors if _is_extreme(v, facets, ambient_dim)]
        return cls(ambient_dim, _matrix(vectors, ambient_dim), facets)

    @cached_property
    def inequalities(self) -> IntMatrix:
        """The facet normals, computed on first use if not supplied."""
        if self.facets is not None:
            return self.facets
        return dual_description(self.rays, self.ambient_dim)

    @cached_property
    def dim(self) -> int:
        rays = self.rays.row_vectors()
        return Sublattice.from_generators(self.ambient_dim, rays).rank

    @cached_property
    def is_pointed(self) -> bool:
        return kernel_basis(self.inequalities).rank == 0

    @property
    def ray_vectors(self) -> List[Vector]:
        return self.rays.row_vectors()

    def contains(self, vector: Sequence[Any]) -> bool:
        return contains(self, vector)

    def to_json(self) -> Dict[str, Any]:
        return {
            "ambient_dim": self.ambient_dim,
            "rays": [list(r) for r in self.ray_vectors],
            "facets": [list(h) for h in self.inequalities.row_vectors()],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "RationalCone":
        try:
            return cls.from_generators(int(data["ambient_dim"]), data["rays"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInputError(f"Invalid cone JSON: {e}") from e


def _is_extreme(ray: Vector, facets: IntMatrix, ambient_dim: int) -> bool:
    tight = [h for h in facets.row_vectors() if dot(h, ray) == 0]
    rank = Sublattice.from_generators(ambient_dim, tight).rank
    return rank == ambient_dim - 1


def contains(cone: RationalCone, vector: Sequence[Any]) -> bool:
    """Whether an integer vector satisfies every facet inequality."""
    v = as_vector(vector)
    if len(v) != cone.ambient_dim:
        raise InvalidInputError("Vector does not live in the ambient lattice")
    return all(dot(h, v) >= 0 for h in cone.inequalities.row_vectors())


def faces(cone: RationalCone) -> List[FaceDescriptor]:
    """All faces, as intersections of facet-tight ray sets.

    Returns:
        Faces sorted by (dim, ray_indices); the whole cone is always present,
        and so is the face {0} when the cone is pointed
    """
    rays = cone.ray_vectors
    tight_sets = [
        frozenset(i for i, r in enumerate(rays) if dot(h, r) == 0)
        for h in cone.inequalities.row_vectors()
    ]
    top: FrozenSet[int] = frozenset(range(len(rays)))
    found = {top}
    queue = [top]
    while queue:
        face = queue.pop()
        for tight in tight_sets:
            smaller = face & tight
            if smaller not in found:
                found.add(smaller)
                queue.append(smaller)

    descriptors = []
    for ray_set in found:
        indices = tuple(sorted(ray_set))
        dim = Sublattice.from_generators(
            cone.ambient_dim, (rays[i] for i in indices)
        ).rank
        descriptors.append(FaceDescriptor(indices, dim))
    return sorted(descriptors, key=lambda f: (f.dim, f.ray_indices))


def face_equations(cone: RationalCone, face: FaceDescriptor) -> IntMatrix:
    """Facet normals vanishing on every ray of ``face``.

    A cone element lies on the face exactly when all of them vanish on it.
    """
    rays = cone.ray_vectors
    rows = [
        h
        for h in cone.inequalities.row_vectors()
        if all(dot(h, rays[i]) == 0 for i in face.ray_indices)
    ]
    return _matrix(rows, cone.ambient_dim)


# MARK: - Triangulation


def triangulate(cone: RationalCone) -> List[Tuple[int, ...]]:
    """Pulling triangulation into simplicial cones.

    Returns:
        Sorted list of ray index tuples, each spanning a simplicial cone of
        full dimension dim(cone)
    """
    face_list = faces(cone)

    def pull(face: FaceDescriptor) -> List[Tuple[int, ...]]:
        if len(face.ray_indices) == face.dim:
            return [face.ray_indices]
        apex = face.ray_indices[0]
        members = set(face.ray_indices)
        simplices = []
        for facet in face_list:
            if (
                facet.dim == face.dim - 1
                and apex not in facet.ray_indices
                and set(facet.ray_indices) <= members
            ):
                for simplex in pull(facet):
                    simplices.append(tuple(sorted(simplex + (apex,))))
        return simplices

    top = face_list[-1]
    return sorted(set(pull(top)))


# MARK: - Hilbert Basis


def hilbert_basis(
    cone: RationalCone, settings: Optional[Settings] = None
) -> List[Vector]:
    """Minimal generating set of the monoid cone ∩ Z^d.

    Args:
        cone: A pointed cone
        settings: Resource guards

    Returns:
        The irreducible lattice points, sorted lexicographically

    Raises:
        NotPointedError: If the cone contains a line
        ResourceLimitError: If the cone exceeds the desk-scale guards
    """
    settings = resolve(settings)
    if not cone.is_pointed:
        raise NotPointedError("Hilbert basis requires a pointed cone")
    if cone.ambient_dim > settings.max_hilbert_dim:
        raise ResourceLimitError(
            f"Hilbert basis limited to dimension {settings.max_hilbert_dim}"
        )
    if cone.rays.rows > settings.max_hilbert_rays:
        raise ResourceLimitError(
            f"Hilbert basis limited to {settings.max_hilbert_rays} rays"
        )

    rays = cone.ray_vectors
    if not rays:
        return []
    # Work in coordinates of the saturated lattice Z^d ∩ span, where the
    # cone is full-dimensional.
    lattice = Sublattice.from_generators(cone.ambient_dim, rays).saturation()
    local = []
    for r in rays:
        coords = lattice.coordinates(r)
        if coords is None:
            raise InvalidInputError(f"Ray {r} is not in its own saturated span")
        local.append(primitive(coords))
    basis = _full_dimensional_hilbert_basis(local, lattice.rank, settings)
    return sorted(lattice.combination(p) for p in basis)


def _full_dimensional_hilbert_basis(
    rays: List[Vector], k: int, settings: Settings
) -> List[Vector]:
    local_cone = RationalCone.from_generators(k, rays, settings)
    ray_vectors = local_cone.ray_vectors
    candidates: Set[Vector] = set(ray_vectors)

    volume = 0
    for simplex in triangulate(local_cone):
        generators = [ray_vectors[i] for i in simplex]
        columns = _matrix(generators, k).T
        group = cokernel(columns)
        volume += group.order or 0
        if volume > settings.max_parallelepiped_volume:
            raise ResourceLimitError(
                "Fundamental parallelepipeds exceed "
                f"{settings.max_parallelepiped_volume} lattice points"
            )
        for coords in group.elements():
            point = _parallelepiped_point(columns, generators, group.lift(coords), k)
            if any(point):
                candidates.add(point)

    irreducible = [
        x
        for x in candidates
        if not any(
            y != x and local_cone.contains(tuple(a - b for a, b in zip(x, y)))
            for y in candidates
        )
    ]
    logger.debug(
        "hilbert basis in rank %d: %d candidates, %d irreducible",
        k,
        len(candidates),
        len(irreducible),
    )
    return sorted(irreducible)


def _parallelepiped_point(
    columns: IntMatrix, generators: List[Vector], representative: Vector, k: int
) -> Vector:
    weights = solve_rational(columns, representative)
    if weights is None:
        raise InvalidInputError("Simplex generators do not span the lattice")
    fractional = [w - (w.numerator // w.denominator) for w in weights]
    point = [Fraction(0)] * k
    for weight, g in zip(fractional, generators):
        for j in range(k):
            point[j] += weight * g[j]
    return tuple(int(x) for x in point)
