"""
Exact integer linear algebra.

Hermite and Smith normal forms, kernels, cokernels and finite abelian group
structure over Python integers (no fixed-width arithmetic, so nothing can
wrap). Row operations run on numpy object arrays; every public value is an
immutable ``IntMatrix``, ``Sublattice`` or ``FinAbGroup``.

Conventions:
    - HNF is row-style: pivots positive, entries above a pivot in [0, pivot),
      zero rows at the bottom. A sublattice is stored by the nonzero rows of
      the HNF of any generating set, so equal sublattices compare equal.
    - SNF diagonal entries are non-negative with d_1 | d_2 | ...
"""

import itertools
import logging
import numbers
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidInputError

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def _as_int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, str):
            try:
                return int(value)
            except ValueError:
                pass
        raise InvalidInputError(f"Expected an integer entry, got {value!r}")
    return int(value)


def as_vector(values: Iterable[Any]) -> Vector:
    """Coerce an iterable of integer-like values to an integer tuple."""
    return tuple(_as_int(x) for x in values)


def primitive(vector: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in vector:
        g = gcd(g, x)
    if g == 0:
        return tuple(vector)
    return tuple(x // g for x in vector)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


# MARK: - IntMatrix


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix with arbitrary-precision entries."""

    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InvalidInputError("Matrix dimensions must be non-negative")
        if len(self.entries) != self.rows or any(
            len(row) != self.cols for row in self.entries
        ):
            raise InvalidInputError(
                f"Entry count does not match a {self.rows}x{self.cols} matrix"
            )

    # MARK: - Constructors

    @classmethod
    def from_rows(
        cls, rows: Iterable[Iterable[Any]], cols: Optional[int] = None
    ) -> "IntMatrix":
        """Build a matrix from row vectors.

        Args:
            rows: Row vectors with integer entries
            cols: Column count, required when there are no rows

        Returns:
            The matrix
        """
        data = tuple(as_vector(row) for row in rows)
        if cols is None:
            if not data:
                raise InvalidInputError("Column count needed for an empty matrix")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(
        cls, columns: Iterable[Iterable[Any]], rows: Optional[int] = None
    ) -> "IntMatrix":
        """Build a matrix from column vectors."""
        cols_data = [as_vector(col) for col in columns]
        if rows is None:
            if not cols_data:
                raise InvalidInputError("Row count needed for an empty matrix")
            rows = len(cols_data[0])
        if any(len(col) != rows for col in cols_data):
            raise InvalidInputError("Columns have inconsistent lengths")
        data = tuple(tuple(col[i] for col in cols_data) for i in range(rows))
        return cls(rows, len(cols_data), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(
        cls,
        values: Sequence[int],
        rows: Optional[int] = None,
        cols: Optional[int] = None,
    ) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        data = tuple(
            tuple(values[i] if i == j and i < len(values) else 0 for j in range(cols))
            for i in range(rows)
        )
        return cls(rows, cols, data)

    @classmethod
    def from_array(cls, array: np.ndarray) -> "IntMatrix":
        rows, cols = array.shape
        entries = tuple(
            tuple(int(array[i, j]) for j in range(cols)) for i in range(rows)
        )
        return cls(rows, cols, entries)

    # MARK: - Access

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def row_vectors(self) -> List[Vector]:
        return list(self.entries)

    def column_vectors(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        """Transpose."""
        return IntMatrix(
            self.cols, self.rows, tuple(self.column(j) for j in range(self.cols))
        )

    def to_array(self) -> np.ndarray:
        """Copy into a numpy object array (exact Python ints)."""
        array = np.empty((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                array[i, j] = value
        return array

    def select_rows(self, indices: Sequence[int]) -> "IntMatrix":
        rows = tuple(self.entries[i] for i in indices)
        return IntMatrix(len(indices), self.cols, rows)

    def select_columns(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(
            self.rows,
            len(indices),
            tuple(tuple(row[j] for j in indices) for row in self.entries),
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if other.cols != self.cols:
            raise InvalidInputError("Cannot stack matrices with different widths")
        return IntMatrix(
            self.rows + other.rows, self.cols, self.entries + other.entries
        )

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if other.rows != self.rows:
            raise InvalidInputError("Cannot stack matrices with different heights")
        return IntMatrix(
            self.rows,
            self.cols + other.cols,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
        )

    # MARK: - Arithmetic

    def __matmul__(self, other: Any) -> Any:
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise InvalidInputError(
                    f"Shape mismatch {self.rows}x{self.cols} @ "
                    f"{other.rows}x{other.cols}"
                )
            other_cols = other.column_vectors()
            return IntMatrix(
                self.rows,
                other.cols,
                tuple(
                    tuple(dot(row, col) for col in other_cols) for row in self.entries
                ),
            )
        vector = as_vector(other)
        if len(vector) != self.cols:
            raise InvalidInputError(
                f"Vector of length {len(vector)} does not fit {self.rows}x{self.cols}"
            )
        return tuple(dot(row, vector) for row in self.entries)

    def scaled(self, factor: int) -> "IntMatrix":
        entries = tuple(tuple(factor * x for x in row) for row in self.entries)
        return IntMatrix(self.rows, self.cols, entries)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def det(self) -> int:
        """Determinant of a square matrix (fraction-free Bareiss elimination)."""
        if self.rows != self.cols:
            raise InvalidInputError("Determinant needs a square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.entries]
        sign = 1
        previous = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
            previous = a[k][k]
        return sign * a[n - 1][n - 1]

    def rank(self) -> int:
        return hnf(self)[0].nonzero_row_count()

    def nonzero_row_count(self) -> int:
        return sum(1 for row in self.entries if any(row))

    def inverse_unimodular(self) -> "IntMatrix":
        """Exact inverse of a unimodular matrix."""
        if self.rows != self.cols:
            raise InvalidInputError("Only square matrices can be inverted")
        H, W = hnf(self)
        if H != IntMatrix.identity(self.rows):
            raise InvalidInputError("Matrix is not unimodular")
        return W

    # MARK: - JSON

    def to_json(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "IntMatrix":
        try:
            return cls.from_rows(data["entries"], cols=int(data["cols"]))
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"Invalid matrix JSON: {e}") from e


def _identity_array(n: int) -> np.ndarray:
    array = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            array[i, j] = 1 if i == j else 0
    return array


def _swap_rows(array: np.ndarray, i: int, j: int) -> None:
    if i != j:
        array[[i, j]] = array[[j, i]]


def _swap_cols(array: np.ndarray, i: int, j: int) -> None:
    if i != j:
        array[:, [i, j]] = array[:, [j, i]]


# MARK: - Normal Forms


def hnf(matrix: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Args:
        matrix: Any integer matrix M

    Returns:
        (H, U) with U @ M == H, H in row HNF and U unimodular
    """
    A = matrix.to_array()
    m, n = matrix.rows, matrix.cols
    U = _identity_array(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nonzero = [i for i in range(r, m) if A[i, c] != 0]
            if not nonzero:
                break
            p = min(nonzero, key=lambda i: (abs(A[i, c]), i))
            _swap_rows(A, r, p)
            _swap_rows(U, r, p)
            clear = True
            for i in range(r + 1, m):
                if A[i, c] != 0:
                    q = A[i, c] // A[r, c]
                    A[i] = A[i] - q * A[r]
                    U[i] = U[i] - q * U[r]
                    if A[i, c] != 0:
                        clear = False
            if clear:
                break
        if A[r, c] == 0:
            continue
        if A[r, c] < 0:
            A[r] = -A[r]
            U[r] = -U[r]
        for i in range(r):
            q = A[i, c] // A[r, c]
            if q:
                A[i] = A[i] - q * A[r]
                U[i] = U[i] - q * U[r]
        r += 1
    return IntMatrix.from_array(A), IntMatrix.from_array(U)


def _smallest_nonzero(
    D: np.ndarray, cells: Iterable[Tuple[int, int]]
) -> Optional[Tuple[int, int]]:
    best = None
    for i, j in cells:
        if D[i, j] != 0 and (best is None or abs(D[i, j]) < abs(D[best])):
            best = (i, j)
    return best


def snf(matrix: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form.

    Args:
        matrix: Any integer matrix M

    Returns:
        (D, U, V) with U @ M @ V == D, D diagonal with non-negative entries
        d_1 | d_2 | ..., and U, V unimodular
    """
    D = matrix.to_array()
    m, n = matrix.rows, matrix.cols
    U = _identity_array(m)
    V = _identity_array(n)

    for t in range(min(m, n)):
        pivot = _smallest_nonzero(
            D, ((i, j) for i in range(t, m) for j in range(t, n))
        )
        if pivot is None:
            break
        _swap_rows(D, t, pivot[0])
        _swap_rows(U, t, pivot[0])
        _swap_cols(D, t, pivot[1])
        _swap_cols(V, t, pivot[1])

        while True:
            for i in range(t + 1, m):
                if D[i, t] != 0:
                    q = D[i, t] // D[t, t]
                    D[i] = D[i] - q * D[t]
                    U[i] = U[i] - q * U[t]
            for j in range(t + 1, n):
                if D[t, j] != 0:
                    q = D[t, j] // D[t, t]
                    D[:, j] = D[:, j] - q * D[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]

            leftover = _smallest_nonzero(
                D,
                itertools.chain(
                    ((i, t) for i in range(t + 1, m)), ((t, j) for j in range(t + 1, n))
                ),
            )
            if leftover is not None:
                i, j = leftover
                if j == t:
                    _swap_rows(D, t, i)
                    _swap_rows(U, t, i)
                else:
                    _swap_cols(D, t, j)
                    _swap_cols(V, t, j)
                continue

            # d_t must divide the rest of the block
            bad_row = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if D[i, j] % D[t, t] != 0
                ),
                None,
            )
            if bad_row is None:
                break
            D[t] = D[t] + D[bad_row]
            U[t] = U[t] + U[bad_row]

        if D[t, t] < 0:
            D[t] = -D[t]
            U[t] = -U[t]

    return IntMatrix.from_array(D), IntMatrix.from_array(U), IntMatrix.from_array(V)


def diagonal_of(matrix: IntMatrix) -> List[int]:
    return [matrix.entries[i][i] for i in range(min(matrix.rows, matrix.cols))]


# MARK: - Sublattice


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^d stored by its row HNF basis (canonical)."""

    ambient_dim: int
    basis: IntMatrix

    def __post_init__(self) -> None:
        if self.basis.cols != self.ambient_dim:
            raise InvalidInputError("Basis width does not match ambient dimension")

    @classmethod
    def from_generators(
        cls, ambient_dim: int, generators: Iterable[Iterable[Any]]
    ) -> "Sublattice":
        """Sublattice spanned by arbitrary generators (rows)."""
        gens = IntMatrix.from_rows(generators, cols=ambient_dim)
        H, _ = hnf(gens)
        return cls(ambient_dim, H.select_rows(range(H.nonzero_row_count())))

    @classmethod
    def full(cls, ambient_dim: int) -> "Sublattice":
        return cls(ambient_dim, IntMatrix.identity(ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Sublattice":
        return cls(ambient_dim, IntMatrix.zeros(0, ambient_dim))

    @property
    def rank(self) -> int:
        return self.basis.rows

    def vectors(self) -> List[Vector]:
        return self.basis.row_vectors()

    def pivot_columns(self) -> List[int]:
        return [
            next(j for j, x in enumerate(row) if x != 0) for row in self.basis.entries
        ]

    def rational_coordinates(
        self, vector: Sequence[int]
    ) -> Optional[Tuple[Fraction, ...]]:
        """Coordinates c with c @ basis == vector over Q, or None outside the span."""
        v = as_vector(vector)
        if len(v) != self.ambient_dim:
            raise InvalidInputError("Vector does not live in the ambient lattice")
        coords: List[Fraction] = []
        for i, p in enumerate(self.pivot_columns()):
            partial = sum(
                (coords[k] * self.basis.entries[k][p] for k in range(i)), Fraction(0)
            )
            coords.append((v[p] - partial) / self.basis.entries[i][p])
        for j in range(self.ambient_dim):
            value = sum(
                (c * row[j] for c, row in zip(coords, self.basis.entries)), Fraction(0)
            )
            if value != v[j]:
                return None
        return tuple(coords)

    def coordinates(self, vector: Sequence[int]) -> Optional[Vector]:
        """Integer coordinates of a lattice vector, or None if not in the lattice."""
        coords = self.rational_coordinates(vector)
        if coords is None or any(c.denominator != 1 for c in coords):
            return None
        return tuple(int(c) for c in coords)

    def contains(self, vector: Sequence[int]) -> bool:
        return self.coordinates(vector) is not None

    def combination(self, coords: Sequence[int]) -> Vector:
        """The lattice vector with the given coordinates."""
        return self.basis.T @ coords

    def coordinate_matrix(self, other: "Sublattice") -> IntMatrix:
        """Rows: the basis of ``other`` in the coordinates of this lattice."""
        rows = []
        for v in other.vectors():
            coords = self.coordinates(v)
            if coords is None:
                raise InvalidInputError("Sublattice is not contained in this lattice")
            rows.append(coords)
        return IntMatrix.from_rows(rows, cols=self.rank)

    def is_sublattice_of(self, other: "Sublattice") -> bool:
        return all(other.contains(v) for v in self.vectors())

    def orthogonal_complement(self) -> "Sublattice":
        """Integer vectors orthogonal to every basis vector."""
        return kernel_basis(self.basis)

    def saturation(self) -> "Sublattice":
        """Z^d intersected with the rational span."""
        return kernel_basis(self.orthogonal_complement().basis)

    def to_json(self) -> Dict[str, Any]:
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}


# MARK: - Finite Abelian Groups


@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group Z^m / L with its quotient map.

    ``projection`` maps ambient vectors to group coordinates: the first
    ``len(invariant_factors)`` coordinates are read modulo the factors, the
    last ``free_rank`` are free. ``section`` maps coordinates back to
    representatives in Z^m.
    """

    free_rank: int
    invariant_factors: Tuple[int, ...]
    projection: IntMatrix
    section: IntMatrix

    def __post_init__(self) -> None:
        if any(d < 2 for d in self.invariant_factors):
            raise InvalidInputError("Invariant factors must be at least 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a != 0:
                raise InvalidInputError("Invariant factors must form a divisor chain")

    @property
    def ambient_dim(self) -> int:
        return self.projection.cols

    @property
    def order(self) -> Optional[int]:
        """Group order, or None for infinite groups."""
        if self.free_rank:
            return None
        return prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def reduce(self, coords: Sequence[int]) -> Vector:
        k = len(self.invariant_factors)
        return tuple(
            c % self.invariant_factors[i] if i < k else c for i, c in enumerate(coords)
        )

    def project(self, vector: Sequence[int]) -> Vector:
        """Group coordinates of the class of an ambient vector."""
        return self.reduce(self.projection @ vector)

    def lift(self, coords: Sequence[int]) -> Vector:
        """An ambient representative of the given group coordinates."""
        return self.section @ coords

    def elements(self) -> Iterator[Vector]:
        """Enumerate a finite group in lexicographic coordinate order."""
        if self.free_rank:
            raise InvalidInputError("Cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def to_json(self) -> Dict[str, Any]:
        return {
            "free_rank": self.free_rank,
            "invariant_factors": list(self.invariant_factors),
            "order": self.order,
            "projection": self.projection.to_json(),
        }


# MARK: - Kernels, Cokernels, Solving


def kernel_basis(matrix: IntMatrix) -> Sublattice:
    """The lattice {v : M @ v == 0} with HNF basis."""
    H, U = hnf(matrix.T)
    zero_rows = [i for i in range(H.rows) if not any(H.entries[i])]
    return Sublattice.from_generators(matrix.cols, (U.entries[i] for i in zero_rows))


def cokernel(matrix: IntMatrix) -> FinAbGroup:
    """Z^rows / image of the columns of M."""
    D, U, _ = snf(matrix)
    diagonal = diagonal_of(D)
    rank = sum(1 for d in diagonal if d != 0)
    torsion = [i for i in range(rank) if diagonal[i] > 1]
    free = list(range(rank, matrix.rows))
    selected = torsion + free
    U_inv = U.inverse_unimodular()
    group = FinAbGroup(
        free_rank=len(free),
        invariant_factors=tuple(diagonal[i] for i in torsion),
        projection=U.select_rows(selected),
        section=U_inv.select_columns(selected),
    )
    logger.debug(
        "cokernel of %dx%d matrix: free rank %d, factors %s",
        matrix.rows,
        matrix.cols,
        group.free_rank,
        group.invariant_factors,
    )
    return group


def solve_integral(matrix: IntMatrix, rhs: Sequence[int]) -> Optional[Vector]:
    """An integer solution x of M @ x == b, or None if there is none."""
    b = as_vector(rhs)
    if len(b) != matrix.rows:
        raise InvalidInputError("Right-hand side length does not match the matrix")
    D, U, V = snf(matrix)
    c = U @ b
    diagonal = diagonal_of(D)
    y = [0] * matrix.cols
    for i, ci in enumerate(c):
        d = diagonal[i] if i < len(diagonal) else 0
        if d == 0:
            if ci != 0:
                return None
        elif ci % d != 0:
            return None
        else:
            y[i] = ci // d
    return V @ y


def solve_rational(
    matrix: IntMatrix, rhs: Sequence[Any]
) -> Optional[Tuple[Fraction, ...]]:
    """A rational solution x of M @ x == b (free variables set to 0), or None."""
    m, n = matrix.rows, matrix.cols
    if len(rhs) != m:
        raise InvalidInputError("Right-hand side length does not match the matrix")
    a = [
        [Fraction(x) for x in row] + [Fraction(b)]
        for row, b in zip(matrix.entries, rhs)
    ]
    pivots: List[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(a[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = a[i][n]
    return tuple(x)
