"""
Tests for μ_n(P), root-stack fibers, Φ_n and the root-stack suites.
"""

import cmath

import pytest

from knroots.config import Settings
from knroots.errors import GroupMismatchError, InvalidInputError, NonDivisorError
from knroots.monoid import parse_monoid_spec
from knroots.points import (
    CBarPoint,
    cpoint_from_values,
    cpoints_close,
    eval_c,
    exp_point,
    knpoint_from_polar,
    random_cbar_point,
)
from knroots.rootstack import (
    mu_act,
    mu_n,
    orbit_connector,
    phi_n,
    power_point,
    real_root_point,
    root_fiber,
    same_mu_orbit,
    tower_project,
    twist_for_translation,
    verify_cube,
    verify_factorization,
    verify_orbit_stabilizer,
    verify_phi_well_defined,
    verify_tower,
)


# MARK: - μ_n


def test_mu_n_of_quadric(A1):
    """μ_2(A1) is (Z/2)^2."""
    mu = mu_n(A1, 2)
    assert mu.order == 4
    assert mu.group.invariant_factors == (2, 2)
    assert mu.enumerated
    assert len(mu.elements) == 4
    assert mu.identity().is_identity


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mu_n_of_free_monoids(k, n):
    """μ_n(N^k) is (Z/n)^k."""
    mu = mu_n(parse_monoid_spec(f"N{k}" if k > 1 else "N"), n)
    assert mu.order == n**k
    assert mu.group.invariant_factors == ((n,) * k if n > 1 else ())
    assert mu.group.free_rank == 0
    assert len(mu.elements) == n**k


def test_mu_n_above_enumeration_limit(N3, caplog):
    """Large groups list generators only and log a warning."""
    with caplog.at_level("WARNING", logger="knroots"):
        mu = mu_n(N3, 5, Settings(enumeration_limit=100))
    assert not mu.enumerated
    assert [g.exponents for g in mu.elements] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert mu.order == 125
    assert "enumeration limit" in caplog.text


def test_mu_n_rejects_bad_level(N):
    """n must be positive."""
    with pytest.raises(InvalidInputError):
        mu_n(N, 0)


def test_mu_elements_multiply_mod_n(A1):
    """Exponents add modulo n."""
    g = mu_n(A1, 3).elements[5]
    assert (g * g * g).is_identity
    with pytest.raises(GroupMismatchError):
        g * mu_n(A1, 2).identity()


# MARK: - Root Fibers


def test_square_roots_of_four(N):
    """Over x = 4 in C(N) the level-2 lifts are 2 and -2."""
    fiber = root_fiber(N, 2, cpoint_from_values(N, [4]))
    values = sorted(eval_c(y.point, (1,)).real for y in fiber.lifts)
    assert values == pytest.approx([-2.0, 2.0])
    assert fiber.stabilizer_group.order == 1
    assert fiber.to_json()["orbit_size"] == 2


def test_root_fiber_over_vertex(N):
    """Over x = 0 there is one lift, fixed by all of μ_2."""
    fiber = root_fiber(N, 2, cpoint_from_values(N, [0]))
    assert len(fiber.lifts) == 1
    assert fiber.stabilizer_group.order == 2
    assert [g.exponents for g in fiber.stabilizer] == [(0,), (1,)]


def test_root_fiber_on_boundary_of_plane(N2):
    """Over (0, 1) in C(N^2) there are two lifts with stabilizer of order 2."""
    fiber = root_fiber(N2, 2, cpoint_from_values(N2, [0, 1]))
    assert len(fiber.lifts) == 2
    assert fiber.stabilizer_group.order == 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_orbit_stabilizer_count(A1, n):
    """|lifts| · |stabilizer| = n^rank on every face."""
    for values in ([0, 0, 0], [2, 0, 0], [0, 0, 4], [1, 2, 4]):
        fiber = root_fiber(A1, n, cpoint_from_values(A1, values))
        assert len(fiber.lifts) * fiber.stabilizer_group.order == n**2


def test_root_fiber_checks_monoid(N, N2):
    """The point must live over the given monoid."""
    with pytest.raises(GroupMismatchError):
        root_fiber(N2, 2, cpoint_from_values(N, [4]))


def test_mu_action_and_connector(N):
    """The generator of μ_2 swaps the two square roots."""
    lifts = root_fiber(N, 2, cpoint_from_values(N, [4])).lifts
    g = mu_n(N, 2).elements[1]
    moved = mu_act(g, lifts[0])
    assert eval_c(moved.point, (1,)) == pytest.approx(eval_c(lifts[1].point, (1,)))
    connector = orbit_connector(lifts[0], lifts[1])
    assert connector is not None and connector.exponents == (1,)
    assert same_mu_orbit(lifts[0], lifts[0])


def test_connector_rejects_different_bases(N):
    """Lifts over different points are in different orbits."""
    a = root_fiber(N, 2, cpoint_from_values(N, [4])).lifts[0]
    b = root_fiber(N, 2, cpoint_from_values(N, [9])).lifts[0]
    assert orbit_connector(a, b) is None


# MARK: - Φ_n


def test_phi_n_takes_principal_root(N):
    """Φ_2 of (4, e^{i}) is 2 e^{i/2}."""
    k = knpoint_from_polar(N, [4.0], [1.0])
    result = phi_n(k, 2)
    assert eval_c(result.point.point, (1,)) == pytest.approx(2 * cmath.exp(0.5j))
    assert eval_c(result.point.base, (1,)) == pytest.approx(4 * cmath.exp(1j))
    assert result.mu.order == 2
    assert result.stabilizer.order == 1


def test_phi_n_twist_for_translation(N2):
    """A Z(P) translate moves Φ_n by e^{2πi k'/n}."""
    result = phi_n(knpoint_from_polar(N2, [1.0, 2.0], [0.3, 0.4]), 3)
    assert result.twist_for((4, -1)).exponents == (1, 2)
    assert twist_for_translation(N2, 3, (3, 3)).is_identity


def test_tower_project_errors(N):
    """Projection needs n | m and a point at level m."""
    p = root_fiber(N, 2, cpoint_from_values(N, [4])).lifts[0]
    with pytest.raises(NonDivisorError):
        tower_project(N, 6, 4, p)
    with pytest.raises(GroupMismatchError):
        tower_project(N, 6, 3, p)


def test_tower_project_squares(N):
    """Level 2 -> 1 squares the lift."""
    p = root_fiber(N, 2, cpoint_from_values(N, [4])).lifts[1]
    assert eval_c(tower_project(N, 2, 1, p).point, (1,)) == pytest.approx(4)


def test_real_root_point_is_an_nth_root(A1, rng):
    """exp(x/n) raised to the n-th power is exp(x)."""
    for face in A1.faces:
        x = random_cbar_point(A1, rng, face)
        assert cpoints_close(real_root_point(x, 1.0), exp_point(x))
        for n in (2, 3, 5):
            root = real_root_point(x, 1 / n)
            assert cpoints_close(power_point(root, n), exp_point(x))


def test_real_root_point_for_real_exponents(N):
    """Non-integral exponents take exp((u + iv) r) on the generator."""
    x = CBarPoint(N, N.face_with_generators([0]), (1.0,), (3.0,))
    point = real_root_point(x, 0.75)
    assert eval_c(point, (1,)) == pytest.approx(cmath.exp(0.75 * complex(1.0, 3.0)))


# MARK: - Suites


@pytest.mark.parametrize("spec", ["N2", "A1"])
def test_cube_suite_passes(spec, request):
    """Both routes around the cube agree up to μ_n."""
    monoid = request.getfixturevalue(spec)
    report = verify_cube(monoid, 3, n_samples=30, seed=2)
    assert report.passed, report.failures[:3]


def test_cube_suite_negative_control(A1):
    """Scaling by 1/(n+1) instead of 1/n is detected."""
    report = verify_cube(A1, 2, n_samples=30, seed=2, root_override=1.0 / 3)
    assert not report.passed


def test_tower_suite_passes(A1):
    """Projections down the tower stay in the μ_n-orbit."""
    report = verify_tower(A1, n_samples=20, seed=4)
    assert report.passed, report.failures[:3]
    assert report.cases_run == 80


@pytest.mark.parametrize("n", [2, 3, 5])
def test_factorization_suite_passes(A1, n):
    """(Φ_n)^n = exp on generators."""
    report = verify_factorization(A1, n, n_samples=1000, seed=1)
    assert report.passed, report.failures[:3]
    assert report.cases_run > 0


def test_factorization_on_non_saturated_monoid(cusp):
    """The factorization also holds over <2, 3>."""
    assert verify_factorization(cusp, 3, n_samples=100, seed=1).passed


@pytest.mark.parametrize("spec", ["N", "N2", "A1"])
def test_orbit_stabilizer_suite_passes(spec, request):
    """Orbit-stabilizer holds on every face for n <= 3."""
    monoid = request.getfixturevalue(spec)
    report = verify_orbit_stabilizer(monoid, n_max=3, seed=6)
    assert report.passed, report.failures[:3]


def test_phi_well_defined_suite_passes(N2):
    """The orbit of Φ_n does not depend on the lift."""
    report = verify_phi_well_defined(N2, 3, n_samples=20, translates=3, seed=8)
    assert report.passed, report.failures[:3]


def test_suite_digest_is_reproducible(A1):
    """Same seed, same digest; another seed, another digest."""
    a = verify_cube(A1, 2, n_samples=10, seed=1)
    b = verify_cube(A1, 2, n_samples=10, seed=1)
    c = verify_cube(A1, 2, n_samples=10, seed=2)
    assert a.digest == b.digest
    assert a.digest != c.digest


if __name__ == "__main__":
    pytest.main([__file__])
