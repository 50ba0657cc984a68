"""
Exact affine monoids and the local models of log geometry built on them.

This package provides:
1. Integer lattice algebra - Hermite and Smith normal forms, kernels, cokernels
2. Cones and monoids - dual descriptions, faces, Hilbert bases, saturation
3. Local models - points of C(P), C̄(P) and (R≥0 × S¹)(P) with their group actions
4. Root stacks - μ_n(P), root fibers, the maps Φ_n and verification suites

Usage:
    from knroots import parse_monoid_spec, verify_cube
    report = verify_cube(parse_monoid_spec("A1"), n=3, n_samples=100, seed=7)
    assert report.passed

Report archive (imports SQLAlchemy on first use):
    from knroots import ReportArchive
    ReportArchive("sqlite:///reports.db").store(report)
"""

from typing import Any

from .config import Settings
from .cone import RationalCone, dual_description, faces, hilbert_basis
from .errors import (
    # Base
    Error,
    # Input
    InvalidInputError,
    MonoidSpecError,
    NotAHomomorphismError,
    ConfigurationError,
    # Computation
    ComputationError,
    ResourceLimitError,
    NotPointedError,
    NotSharpError,
    TorsionError,
    NotInMonoidError,
    MonoidMismatchError,
    GroupMismatchError,
    NonDivisorError,
)
from .intlattice import (
    FinAbGroup,
    IntMatrix,
    Sublattice,
    cokernel,
    hnf,
    kernel_basis,
    snf,
    solve_integral,
)
from .kn import TorusFiber, kn_fiber, verify_chart_cartesian, verify_orbits
from .monoid import (
    AffineMonoid,
    MonoidFace,
    char_stalk,
    groupification,
    kummer_root,
    kummer_transition,
    parse_monoid_spec,
    relation_lattice,
    saturate,
)
from .points import (
    CBarPoint,
    Character,
    CPlusElement,
    CPoint,
    CStarElement,
    KNPoint,
    RealPoint,
    cbar_to_kn,
    cbarpoint_from_json,
    cplus_act,
    cpoint_from_json,
    cpoint_from_values,
    cstar_act,
    eval_c,
    eval_cbar,
    exp_group,
    exp_point,
    knpoint_from_json,
    knpoint_from_polar,
    scale,
    same_orbit_cplus,
    tau,
)
from .report import VerificationReport
from .rootstack import (
    MuN,
    RootFiberPoint,
    mu_act,
    mu_n,
    phi_n,
    root_fiber,
    tower_project,
    verify_cube,
    verify_factorization,
    verify_orbit_stabilizer,
    verify_phi_well_defined,
    verify_tower,
)


def __getattr__(name: str) -> Any:
    """Lazy import for the report archive so SQLAlchemy loads only when used."""
    if name in ("ReportArchive", "ArchivedReport"):
        try:
            from . import archive

            return getattr(archive, name)
        except ImportError as e:
            raise ImportError(
                f"{name} requires SQLAlchemy. Install with: pip install sqlalchemy"
            ) from e
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__version__ = "0.1.0"
__all__ = [
    # Configuration
    "Settings",
    # Lattices
    "IntMatrix",
    "Sublattice",
    "FinAbGroup",
    "hnf",
    "snf",
    "kernel_basis",
    "cokernel",
    "solve_integral",
    # Cones and monoids
    "RationalCone",
    "dual_description",
    "faces",
    "hilbert_basis",
    "AffineMonoid",
    "MonoidFace",
    "groupification",
    "relation_lattice",
    "saturate",
    "kummer_root",
    "kummer_transition",
    "char_stalk",
    "parse_monoid_spec",
    # Points
    "Character",
    "CPoint",
    "CBarPoint",
    "KNPoint",
    "RealPoint",
    "CPlusElement",
    "CStarElement",
    "eval_c",
    "eval_cbar",
    "exp_point",
    "exp_group",
    "cplus_act",
    "cstar_act",
    "cbar_to_kn",
    "scale",
    "same_orbit_cplus",
    "tau",
    "cpoint_from_values",
    "knpoint_from_polar",
    "cpoint_from_json",
    "knpoint_from_json",
    "cbarpoint_from_json",
    # Local models and root stacks
    "TorusFiber",
    "kn_fiber",
    "verify_chart_cartesian",
    "verify_orbits",
    "MuN",
    "RootFiberPoint",
    "mu_n",
    "root_fiber",
    "mu_act",
    "phi_n",
    "tower_project",
    "verify_cube",
    "verify_tower",
    "verify_factorization",
    "verify_orbit_stabilizer",
    "verify_phi_well_defined",
    # Reports
    "VerificationReport",
    "ReportArchive",
    "ArchivedReport",
    # Exceptions
    "Error",
    "InvalidInputError",
    "MonoidSpecError",
    "NotAHomomorphismError",
    "ConfigurationError",
    "ComputationError",
    "ResourceLimitError",
    "NotPointedError",
    "NotSharpError",
    "TorsionError",
    "NotInMonoidError",
    "MonoidMismatchError",
    "GroupMismatchError",
    "NonDivisorError",
]
