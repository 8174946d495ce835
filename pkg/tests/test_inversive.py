import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from strategies import balls, dims, points, seeds, spheres

from mobius_rigidity import (
    ExtendedPoint,
    HalfSpace,
    LorentzMap,
    Side,
    Sphere,
    absolute_cross_ratio,
    apply_to_ball,
    apply_to_point,
    ball_model_to_hyperboloid,
    lift_ball,
    lift_point,
    lightray_cross_ratio,
    lorentz_inner,
    random_lorentz,
    relation_of_balls,
    signed_inversive_distance,
    unlift_ball,
    unlift_point,
    unsigned_inversive_distance,
)
from mobius_rigidity import fixtures
from mobius_rigidity.errors import (
    DimensionMismatch,
    DuplicatePoints,
    DuplicateRays,
    NotLightLike,
    NotPositive,
    NotSpaceLike,
    OnOrOutsideBoundary,
    SameBoundary,
)
from mobius_rigidity.inversive import (
    Relation,
    ball_error,
    chordal_distance,
    contains,
    inversive_distance_formula,
)
from mobius_rigidity.minkowski import hyperbolic_rotation, metric

P = ExtendedPoint.finite
INF1 = ExtendedPoint.infinity(1)


def same_ball(a, b, tol=1e-9):
    return ball_error(a, b) <= tol


# lifts


def test_lift_ball_examples():
    np.testing.assert_array_equal(lift_ball(Sphere([0, 0], 1)), [0, 0, -1, 0])
    np.testing.assert_array_equal(lift_ball(HalfSpace([1, 0], 0)), [1, 0, 0, 0])
    v = lift_ball(Sphere([3, 0], 2))
    np.testing.assert_allclose(v, [1.5, 0, 1, 1.5])
    assert lorentz_inner(v, v) == pytest.approx(1)


def test_unlift_ball_examples():
    assert unlift_ball([0, 0, -1, 0]) == Sphere([0, 0], 1, Side.INSIDE)
    assert unlift_ball([1, 0, 0, 0]) == HalfSpace([1, 0], 0)
    assert unlift_ball([-1.5, 0, -1, -1.5]) == Sphere([3, 0], 2, Side.OUTSIDE)
    with pytest.raises(NotSpaceLike):
        unlift_ball([1, 0, 1])


def test_lift_point_examples():
    np.testing.assert_array_equal(lift_point(P([0, 0])), [0, 0, -0.5, 0.5])
    np.testing.assert_array_equal(lift_point(ExtendedPoint.infinity(2)), [0, 0, 1, 1])
    assert lorentz_inner(lift_point(P([1, 0])), lift_point(P([0, 1]))) == -1


def test_unlift_point_examples():
    assert unlift_point([0, 0, 1, 1]).is_infinite
    assert unlift_point([0, 0, -0.5, 0.5]) == P([0, 0])
    assert unlift_point(7 * np.array([1.0, 0, 0, 1])) == P([1, 0])
    with pytest.raises(NotLightLike):
        unlift_point([1, 0, 0, 2])
    with pytest.raises(NotPositive):
        unlift_point([0, 0, 0.5, -0.5])


@given(dims.flatmap(balls))
def test_ball_lift_round_trip(b):
    v = lift_ball(b)
    assert lorentz_inner(v, v) == pytest.approx(1, rel=1e-9)
    assert same_ball(unlift_ball(v), b)
    assert same_ball(unlift_ball(3.5 * v), b)
    np.testing.assert_allclose(lift_ball(b.complement()), -v)


@given(dims.flatmap(points), st.floats(0.01, 100))
def test_point_lift_round_trip(p, s):
    u = lift_point(p)
    assert u[-1] > 0
    assert abs(lorentz_inner(u, u)) <= 1e-12 * (u @ u)
    q = unlift_point(s * u)
    assert chordal_distance(p, q) <= 1e-12


@given(dims.flatmap(lambda N: st.tuples(points(N, allow_inf=False), points(N, allow_inf=False))))
def test_point_inner_is_squared_distance(pq):
    p, q = pq
    d = np.subtract(p.coords, q.coords)
    assert lorentz_inner(lift_point(p), lift_point(q)) == pytest.approx(-(d @ d) / 2, rel=1e-9, abs=1e-9)


@given(dims.flatmap(lambda N: st.tuples(balls(N), points(N, allow_inf=False))))
def test_membership_convention(bp):
    b, p = bp
    x = np.array(p.coords)
    if isinstance(b, Sphere):
        s = b.radius**2 - np.sum((x - b.center) ** 2)
        s = s if b.side is Side.INSIDE else -s
        scale = b.radius**2
    else:
        s = x @ b.normal - b.offset
        scale = 1.0
    assume(abs(s) > 1e-6 * (scale + x @ x))
    assert contains(b, p) == (s > 0)
    assert contains(b.complement(), p) == (s < 0)


# inversive distance


def test_inversive_distance_examples():
    b = Sphere([1, 2], 3)
    assert signed_inversive_distance(b, b) == pytest.approx(1)
    assert signed_inversive_distance(Sphere([0, 0], 1), Sphere([0, 0], 2)) == pytest.approx(5 / 4)
    assert signed_inversive_distance(HalfSpace([1, 0], 0), HalfSpace([-1, 0], -1)) == -1
    assert unsigned_inversive_distance(Sphere([0, 0], 1), Sphere([2, 0], 1)) == pytest.approx(1)
    assert unsigned_inversive_distance(Sphere([0, 0], 3), Sphere([5, 0], 4)) == pytest.approx(0, abs=1e-15)
    assert unsigned_inversive_distance(HalfSpace([1, 0], -1), Sphere([0, 0], 1)) == pytest.approx(1)
    with pytest.raises(DimensionMismatch):
        signed_inversive_distance(Sphere([0], 1), Sphere([0, 0], 1))


@given(dims.flatmap(lambda N: st.tuples(spheres(N), spheres(N))))
def test_inversive_formula(pair):
    b1, b2 = (Sphere(b.center, b.radius, Side.INSIDE) for b in pair)
    f = inversive_distance_formula(b1, b2)
    assert signed_inversive_distance(b1, b2) == pytest.approx(f, rel=1e-9, abs=1e-9)


@given(dims.flatmap(lambda N: st.tuples(balls(N), balls(N))), seeds)
def test_inversive_distance_invariant(pair, seed):
    b1, b2 = pair
    g = random_lorentz(seed, b1.dim + 2)
    d = signed_inversive_distance(b1, b2)
    d2 = signed_inversive_distance(apply_to_ball(g, b1), apply_to_ball(g, b2))
    assert d2 == pytest.approx(d, rel=1e-6, abs=1e-6)
    assert signed_inversive_distance(b1.complement(), b2) == pytest.approx(-d)


# cross-ratios


def test_cross_ratio_examples():
    pts = [P([x]) for x in (0, 1, 2, 3)]
    assert absolute_cross_ratio(*pts) == pytest.approx(1 / 4, rel=1e-14)
    u = [lift_point(p) for p in pts]
    assert lightray_cross_ratio(*u) == pytest.approx(1 / 16, rel=1e-14)
    assert lightray_cross_ratio(u[1], u[0], u[3], u[2]) == pytest.approx(1 / 16, rel=1e-14)
    with pytest.raises(DuplicateRays):
        lightray_cross_ratio(u[0], u[0], u[1], u[2])
    with pytest.raises(DuplicatePoints):
        absolute_cross_ratio(pts[0], pts[0], pts[1], pts[2])


def test_cross_ratio_with_infinity():
    # |a-b||c-d|/(|a-c||b-d|) with c = inf reduces to |a-b|/|b-d|
    z, o, t = P([0]), P([1]), P([2])
    assert absolute_cross_ratio(z, o, INF1, t) == pytest.approx(1.0, rel=1e-14)
    assert absolute_cross_ratio(z, t, INF1, o) == pytest.approx(2.0, rel=1e-14)
    lam = 5.0
    assert absolute_cross_ratio(z, P([lam]), INF1, o) == pytest.approx(lam / (lam - 1), rel=1e-14)


def test_cross_ratio_sphere_example():
    e1, e2, e3 = (P(np.eye(3)[i]) for i in range(3))
    x = np.array([0.6, 0.0, 0.8])
    assert absolute_cross_ratio(e1, e2, e3, P(x)) == pytest.approx(np.sqrt((1 - x[2]) / (1 - x[1])))


@given(dims.flatmap(lambda N: st.lists(points(N), min_size=4, max_size=4, unique=True)), seeds)
def test_cross_ratio_invariant(pts, seed):
    u = [lift_point(p) for p in pts]
    d = min(-lorentz_inner(u[i] / np.linalg.norm(u[i]), u[j] / np.linalg.norm(u[j]))
            for i in range(4) for j in range(i))
    assume(d > 1e-6)
    r = absolute_cross_ratio(*pts)
    assert lightray_cross_ratio(*u) == pytest.approx(r * r, rel=1e-9)
    g = random_lorentz(seed, pts[0].dim + 2)
    r2 = absolute_cross_ratio(*(apply_to_point(g, p) for p in pts))
    assert r2 == pytest.approx(r, rel=1e-5)


# relations


def test_relations():
    r = relation_of_balls(Sphere([0, 0], 1), Sphere([0, 0], 2))
    assert r.kind is Relation.DISJOINT and r.value == pytest.approx(np.arccosh(5 / 4))
    narrow = fixtures.load("example1_sector_narrow").items
    wide = fixtures.load("example1_sector_wide").items
    a1 = relation_of_balls(*narrow)
    a2 = relation_of_balls(*wide)
    assert a1.kind is a2.kind is Relation.INTERSECTING
    assert sorted([a1.value, a2.value]) == pytest.approx([np.pi / 3, 2 * np.pi / 3])
    r = relation_of_balls(HalfSpace([1, 0], -1), Sphere([0, 0], 1))
    assert r.kind is Relation.TANGENT
    with pytest.raises(SameBoundary):
        relation_of_balls(Sphere([0, 0], 1), Sphere([0, 0], 1, Side.OUTSIDE))


# action


def test_apply_identity():
    g = LorentzMap.identity(4)
    assert apply_to_point(g, P([0.3, -2])) == P([0.3, -2])
    assert same_ball(apply_to_ball(g, Sphere([1, 1], 2)), Sphere([1, 1], 2))


def test_boost_on_origin():
    # cosh t = 5/4; the image of 0 is tanh(t/2) = 1/3 (sign follows sinh t)
    g = LorentzMap(hyperbolic_rotation(5 / 4, 3 / 4, 0, 2, 3))
    assert apply_to_point(g, P([0])).coords[0] == pytest.approx(1 / 3)
    g = LorentzMap(hyperbolic_rotation(5 / 4, -3 / 4, 0, 2, 3))
    assert apply_to_point(g, P([0])).coords[0] == pytest.approx(-1 / 3)
    t = np.arccosh(5 / 4)
    assert np.tanh(t / 2) == pytest.approx(1 / 3)


def test_rotation_on_halfspace():
    R = np.eye(4)
    R[:2, :2] = [[0, -1], [1, 0]]
    assert same_ball(apply_to_ball(LorentzMap(R), HalfSpace([1, 0], 0)), HalfSpace([0, 1], 0))


def test_apply_refusals():
    with pytest.raises(NotPositive):
        apply_to_point(LorentzMap(metric(3)), P([0]))
    with pytest.raises(NotPositive):
        apply_to_ball(LorentzMap(-np.eye(3)), Sphere([0], 1))
    with pytest.raises(DimensionMismatch):
        apply_to_point(LorentzMap.identity(4), P([0]))


@given(dims.flatmap(lambda N: st.tuples(balls(N), points(N, allow_inf=False))), seeds)
def test_action_preserves_membership(bp, seed):
    b, p = bp
    ub, up = lift_ball(b), lift_point(p)
    s = lorentz_inner(ub, up)
    assume(abs(s) > 1e-6 * np.linalg.norm(up) * np.linalg.norm(ub))
    g = random_lorentz(seed, b.dim + 2)
    gp = apply_to_point(g, p)
    assume(not gp.is_infinite)
    assert contains(apply_to_ball(g, b), gp) == (s > 0)


# hyperboloid, chordal distance


def test_ball_model():
    np.testing.assert_array_equal(ball_model_to_hyperboloid([0, 0]), [0, 0, 1])
    np.testing.assert_allclose(ball_model_to_hyperboloid([0.5, 0]), [4 / 3, 0, 5 / 3])
    rng = np.random.default_rng(0)
    for _ in range(100):
        x = rng.normal(size=3)
        x *= rng.uniform(0, 0.99) / np.linalg.norm(x)
        y = ball_model_to_hyperboloid(x)
        assert lorentz_inner(y, y) == pytest.approx(-1, rel=1e-10)
    with pytest.raises(OnOrOutsideBoundary):
        ball_model_to_hyperboloid([1.0, 0.0])


def test_chordal_distance():
    assert chordal_distance(P([0, 0]), ExtendedPoint.infinity(2)) == pytest.approx(2)
    assert chordal_distance(P([1.0]), P([-1.0])) == pytest.approx(2)
    assert chordal_distance(INF1, INF1) == 0


def test_item_validation():
    with pytest.raises(ValueError):
        Sphere([0, 0], -1)
    with pytest.raises(ValueError):
        HalfSpace([1, 1], 0)
    with pytest.raises(ValueError):
        P([np.nan])
    with pytest.raises(DimensionMismatch):
        ExtendedPoint(2, (1.0,))


@given(dims.flatmap(lambda N: st.tuples(balls(N), balls(N))))
def test_sign_rule_and_unsigned(pair):
    b1, b2 = pair
    s = signed_inversive_distance(b1, b2)
    assert signed_inversive_distance(b1.complement(), b2) == -s
    assert signed_inversive_distance(b1, b2.complement()) == -s
    assert signed_inversive_distance(b1.complement(), b2.complement()) == s
    assert unsigned_inversive_distance(b1, b2) == abs(s)
    assert unsigned_inversive_distance(b1.complement(), b2) == abs(s)
