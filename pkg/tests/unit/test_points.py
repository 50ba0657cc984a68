"""
Tests for points of C(P), C̄(P) and (R≥0 × S¹)(P) and the maps between them.
"""

import cmath
import math

import numpy as np
import pytest

from knroots.errors import (
    InvalidInputError,
    MonoidMismatchError,
    NotAHomomorphismError,
    NotInMonoidError,
)
from knroots.points import (
    TWO_PI,
    CBarPoint,
    CPlusElement,
    angle_distance,
    cbar_to_kn,
    cbarpoint_from_json,
    cplus_act,
    cpoint_from_json,
    cpoint_from_values,
    cpoints_close,
    cstar_act,
    eval_c,
    eval_cbar,
    exp_group,
    exp_point,
    extend_from_face,
    integral_part,
    integral_translation,
    kn_to_real,
    knpoint_from_json,
    knpoint_from_polar,
    knpoints_close,
    lift_kn,
    random_cbar_point,
    random_cplus,
    restrict_to_face,
    same_orbit_cplus,
    same_orbit_cstar,
    same_orbit_real,
    scale,
    tau,
    wrap_angles,
)


def _cbar(monoid, face_gens, u, v):
    return CBarPoint(monoid, monoid.face_with_generators(face_gens), tuple(u), tuple(v))


# MARK: - Angles


def test_wrap_angles_range():
    """Angles are normalized to [0, 2π)."""
    wrapped = wrap_angles([-0.5, TWO_PI, 3 * TWO_PI + 1.0, -1e-300])
    assert all(0.0 <= a < TWO_PI for a in wrapped)
    assert wrapped[1] == 0.0
    assert wrapped[2] == pytest.approx(1.0)


def test_angle_distance_is_circular():
    """0 and 2π - ε are close."""
    assert angle_distance([0.0], [TWO_PI - 1e-12]) < 1e-11
    assert angle_distance([], []) == 0.0


# MARK: - Evaluation


def test_cpoint_from_values_on_quadric(A1):
    """Values (1, 2, 4) on A1 are multiplicative: 1 * 4 = 2^2."""
    x = cpoint_from_values(A1, [1, 2, 4])
    assert x.face == A1.full_face
    assert eval_c(x, (1, 1)) == pytest.approx(2)
    assert eval_c(x, (2, 2)) == pytest.approx(4)
    assert eval_c(x, (3, 4)) == pytest.approx(16)


def test_cpoint_rejects_non_multiplicative(A1):
    """(1, 2, 5) violates the relation of A1."""
    with pytest.raises(NotAHomomorphismError):
        cpoint_from_values(A1, [1, 2, 5])
    with pytest.raises(NotAHomomorphismError):
        cpoint_from_values(A1, [1, 2j, 4])


def test_cpoint_rejects_non_face_support(A1):
    """Only the middle generator vanishing is not a face pattern."""
    with pytest.raises(NotAHomomorphismError):
        cpoint_from_values(A1, [1, 0, 1])


def test_cpoint_with_zeros(A1):
    """x vanishes off its support face."""
    x = cpoint_from_values(A1, [0, 0, 3])
    assert x.face.generator_indices == (2,)
    assert eval_c(x, (1, 0)) == 0
    assert eval_c(x, (2, 4)) == pytest.approx(9)


def test_cpoint_over_numerical_semigroup(cusp):
    """On <2, 3>, x(2) = t^2 and x(3) = t^3."""
    t = cmath.exp(complex(0.3, 1.1))
    x = cpoint_from_values(cusp, [t**2, t**3])
    assert eval_c(x, (5,)) == pytest.approx(t**5)
    assert eval_c(x, (7,)) == pytest.approx(t**7)
    with pytest.raises(NotInMonoidError):
        eval_c(x, (1,))


def test_eval_cbar_minus_infinity(N2):
    """Off the support face the first coordinate is −∞ (None)."""
    x = _cbar(N2, [0], [0.5], [1.0, 2.0])
    assert eval_cbar(x, (1, 0)) == (0.5, 1.0)
    first, second = eval_cbar(x, (1, 1))
    assert first is None
    assert second == pytest.approx(3.0)


def test_exp_point_matches_formula(N2):
    """exp(u + iv) on the support, 0 off it."""
    x = _cbar(N2, [0, 1], [0.5, -1.0], [1.0, 2.0])
    z = exp_point(x)
    assert eval_c(z, (1, 0)) == pytest.approx(cmath.exp(complex(0.5, 1.0)))
    assert eval_c(z, (0, 1)) == pytest.approx(cmath.exp(complex(-1.0, 2.0)))
    zero = exp_point(_cbar(N2, [], [], [1.0, 2.0]))
    assert eval_c(zero, (1, 1)) == 0


def test_cpoint_json(A1):
    """C-points serialize values with 17 significant digits."""
    data = cpoint_from_values(A1, [1, 2, 4]).to_json()
    assert data["face"] == [0, 1, 2]
    assert data["precision"] == 17
    assert float(data["values"][1][0]) == pytest.approx(2.0)


def test_cpoint_from_json_accepts_pairs(N2):
    """Values may be [re, im] pairs or plain numbers."""
    x = cpoint_from_json(N2, {"values": [[0, 1], 2]})
    assert eval_c(x, (1, 0)) == pytest.approx(1j)
    assert eval_c(x, (0, 1)) == pytest.approx(2)
    with pytest.raises(InvalidInputError):
        cpoint_from_json(N2, {"values": [[0, 1, 2], 2]})
    with pytest.raises(InvalidInputError):
        cpoint_from_json(N2, [1, 2])


# MARK: - Kato-Nakayama Points


def test_knpoint_from_polar_keeps_phase_at_zero(N2):
    """σ is defined on all of P even where ρ vanishes."""
    k = knpoint_from_polar(N2, [0.0, 2.0], [1.0, 0.5])
    assert k.face.generator_indices == (1,)
    assert k.sigma.angle_at((1, 0)) == pytest.approx(1.0)
    assert k.log_modulus == pytest.approx((math.log(2.0),))


def test_knpoint_json_forms(A1):
    """KN points parse from polar data or complex values."""
    k1 = knpoint_from_json(A1, {"radii": [1, 2, 4], "phases": [0, 0.5, 1.0]})
    values = [
        1,
        [2 * math.cos(0.5), 2 * math.sin(0.5)],
        [4 * math.cos(1.0), 4 * math.sin(1.0)],
    ]
    k2 = knpoint_from_json(A1, {"values": values})
    assert knpoints_close(k1, k2)
    with pytest.raises(NotAHomomorphismError):
        knpoint_from_json(A1, {"radii": [1, 2, 4], "phases": [0, 0.5, 2.0]})
    with pytest.raises(InvalidInputError):
        knpoint_from_json(A1, {"nothing": []})



def test_point_json_round_trips(A1, rng):
    """Points written by to_json are read back by the JSON readers."""
    for face in A1.faces:
        x = random_cbar_point(A1, rng, face)
        k = cbar_to_kn(x)
        assert knpoints_close(knpoint_from_json(A1, k.to_json()), k)
        assert knpoints_close(knpoint_from_json(A1, x.to_json()), k)
        y = exp_point(x)
        assert cpoints_close(cpoint_from_json(A1, y.to_json()), y)
        back = cbarpoint_from_json(A1, x.to_json())
        assert back.face == x.face
        assert back.u == pytest.approx(x.u, abs=1e-12)
        assert back.v == pytest.approx(x.v, abs=1e-12)


def test_point_json_checks_monoid_and_face(N2, A1, rng):
    """Serialized points must match the monoid and name a face."""
    k = cbar_to_kn(random_cbar_point(N2, rng))
    with pytest.raises(InvalidInputError):
        knpoint_from_json(A1, k.to_json())
    data = cbar_to_kn(random_cbar_point(A1, rng, A1.faces[1])).to_json()
    data["face"] = [0, 2]
    with pytest.raises(InvalidInputError):
        knpoint_from_json(A1, data)
    with pytest.raises(InvalidInputError):
        cbarpoint_from_json(A1, {"face": [0], "u": ["1.0"]})


def test_tau_and_exp_commute(A1, rng):
    """τ(C̄ -> KN) equals exp on random points."""
    for _ in range(50):
        x = random_cbar_point(A1, rng)
        assert cpoints_close(tau(cbar_to_kn(x)), exp_point(x))


def test_lift_kn_is_canonical(N2, rng):
    """The canonical lift has v in [0, 2π) and maps back to the point."""
    for _ in range(20):
        k = cbar_to_kn(random_cbar_point(N2, rng))
        lift = lift_kn(k)
        assert all(0.0 <= v < TWO_PI for v in lift.v)
        assert knpoints_close(cbar_to_kn(lift), k)


def test_z_translation_does_not_change_kn_image(A1, rng):
    """C̄ -> KN is invariant under 2πi Z(P)."""
    x = random_cbar_point(A1, rng)
    moved = cplus_act(integral_translation(A1, (3, -2)), x)
    assert knpoints_close(cbar_to_kn(x), cbar_to_kn(moved))


def test_non_integral_translation_changes_kn_image(A1, rng):
    """Off 2πi Z(P), translating a full-support point moves its KN image."""
    full = A1.face_with_generators([0, 1, 2])
    x = random_cbar_point(A1, rng, full)
    for g in (
        CPlusElement(A1, (0.0, 0.0), (0.5, 0.0)),
        CPlusElement(A1, (0.0, 0.0), (TWO_PI, math.pi)),
        CPlusElement(A1, (0.25, 0.0), (TWO_PI, 0.0)),
    ):
        assert not knpoints_close(cbar_to_kn(x), cbar_to_kn(cplus_act(g, x)))


# MARK: - Group Actions


def test_cplus_action_translates(N2):
    """g·(u, v) = (u + Re g|F, v + Im g)."""
    x = _cbar(N2, [1], [0.25], [0.0, 1.0])
    g = CPlusElement(N2, (5.0, 1.0), (0.5, -0.5))
    y = cplus_act(g, x)
    assert y.u == pytest.approx((1.25,))
    assert y.v == pytest.approx((0.5, 0.5))


def test_exp_is_equivariant(A1, rng):
    """exp(g·x) = exp(g)·exp(x)."""
    for _ in range(50):
        x = random_cbar_point(A1, rng)
        g = random_cplus(A1, rng)
        lhs = exp_point(cplus_act(g, x))
        rhs = cstar_act(exp_group(g), exp_point(x))
        assert cpoints_close(lhs, rhs)


def test_same_orbit_connectors(A1, rng):
    """Connectors exist exactly for equal faces and move x to y."""
    for face in A1.faces:
        x = random_cbar_point(A1, rng, face)
        y = random_cbar_point(A1, rng, face)
        g = same_orbit_cplus(x, y)
        moved = cplus_act(g, x)
        assert moved.u == pytest.approx(y.u)
        assert moved.v == pytest.approx(y.v)
        h = same_orbit_cstar(cbar_to_kn(x), cbar_to_kn(y))
        assert knpoints_close(cstar_act(h, cbar_to_kn(x)), cbar_to_kn(y))
        rx, ry = kn_to_real(cbar_to_kn(x)), kn_to_real(cbar_to_kn(y))
        assert same_orbit_real(rx, ry) is not None
    a = random_cbar_point(A1, rng, A1.faces[1])
    b = random_cbar_point(A1, rng, A1.faces[2])
    assert same_orbit_cplus(a, b) is None
    assert same_orbit_cstar(cbar_to_kn(a), cbar_to_kn(b)) is None


def test_actions_check_monoid(N2, A1, rng):
    """Operands over different monoids are rejected."""
    with pytest.raises(MonoidMismatchError):
        cplus_act(random_cplus(A1, rng), random_cbar_point(N2, rng))


def test_integral_part(N2):
    """Only 2πi Z(P) elements have an integral part."""
    assert integral_part(integral_translation(N2, (2, -1))) == (2, -1)
    assert integral_part(CPlusElement(N2, (0.0, 0.0), (1.0, 0.0))) is None
    assert integral_part(CPlusElement(N2, (0.5, 0.0), (0.0, 0.0))) is None


def test_scale_requires_positive_factor(N2, rng):
    """r must be positive."""
    with pytest.raises(InvalidInputError):
        scale(random_cbar_point(N2, rng), 0.0)


def test_scale_halves_a_point(N):
    """r = 1/2 sends (2, 2π) to (1, π)."""
    y = scale(_cbar(N, [0], [2.0], [TWO_PI]), 0.5)
    assert y.u == pytest.approx((1.0,))
    assert y.v == pytest.approx((math.pi,))


def test_scale_identity_and_inverse(A1, rng):
    """scale(x, 1) = x and scale(scale(x, n), 1/n) = x."""
    for face in A1.faces:
        x = random_cbar_point(A1, rng, face)
        assert scale(x, 1.0) == x
        for n in (2, 3, 7):
            back = scale(scale(x, n), 1 / n)
            assert back.face == x.face
            assert back.u == pytest.approx(x.u)
            assert back.v == pytest.approx(x.v)


def test_scale_commutes_with_action(A1, rng):
    """scale(g·x, r) = (r·g)·scale(x, r)."""
    for _ in range(20):
        x = random_cbar_point(A1, rng)
        g = random_cplus(A1, rng)
        r = float(rng.uniform(0.1, 5.0))
        lhs = scale(cplus_act(g, x), r)
        rhs = cplus_act(g.scaled(r), scale(x, r))
        assert lhs.u == pytest.approx(rhs.u)
        assert lhs.v == pytest.approx(rhs.v)


# MARK: - Face Restriction


def test_restrict_and_extend(A1):
    """Extending from a face and restricting back is the identity."""
    face = A1.face_with_generators([2])
    values = (0.7,)
    extended = extend_from_face(A1, face, values)
    assert len(extended) == 2
    assert restrict_to_face(A1, face, extended) == pytest.approx(values)
    assert np.allclose(restrict_to_face(A1, A1.full_face, extended), extended)


if __name__ == "__main__":
    pytest.main([__file__])
