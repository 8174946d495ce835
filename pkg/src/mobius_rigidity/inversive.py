"""Balls and points of R^N u {inf}, their lifts to Minkowski space, and the two invariants.

An oriented ball lifts to a space-like unit vector v and a point p to a
positive light-like vector u_p, arranged so that p lies in the ball exactly
when <v, u_p> > 0. With these lifts the signed inversive distance of two balls
is the Lorentz product of their lifts and the absolute cross-ratio of four
points is the square root of the light-ray cross-ratio of their lifts.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicatePoints,
    DuplicateRays,
    NotLightLike,
    NotPositive,
    NotSpaceLike,
    OnOrOutsideBoundary,
    SameBoundary,
)
from .minkowski import TAU_ZERO, lorentz_inner

TAU_PLANE = 1e-10
TAU_REL = 1e-9
# light-likeness accepted when unlifting; images under maps with condition
# number ~1e4 carry relative errors far above TAU_ZERO
TAU_CONE = 1e-8
# rounding allowance, in units of eps * |v|^2, for treating a lift as already unit
UNIT_SLACK = 64.0


class Side(str, Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"

    def flipped(self):
        return Side.OUTSIDE if self is Side.INSIDE else Side.INSIDE


def _coords(x, name):
    t = tuple(float(c) for c in np.asarray(x, dtype=np.float64).ravel())
    if not t:
        raise DimensionMismatch(f"{name} must have at least one coordinate")
    if not all(np.isfinite(t)):
        raise ValueError(f"{name} must be finite")
    return t


@dataclass(frozen=True)
class ExtendedPoint:
    """A point of R^N, or the point at infinity when ``coords`` is None."""

    dim: int
    coords: tuple | None = None

    def __post_init__(self):
        if self.coords is not None:
            c = _coords(self.coords, "point coordinates")
            if len(c) != self.dim:
                raise DimensionMismatch(f"point has {len(c)} coordinates, expected {self.dim}")
            object.__setattr__(self, "coords", c)

    @classmethod
    def finite(cls, coords):
        c = _coords(coords, "point coordinates")
        return cls(len(c), c)

    @classmethod
    def infinity(cls, dim):
        return cls(int(dim), None)

    @property
    def is_infinite(self):
        return self.coords is None

    def __repr__(self):
        return f"ExtendedPoint(inf, dim={self.dim})" if self.is_infinite else f"ExtendedPoint({self.coords})"


@dataclass(frozen=True)
class Sphere:
    """Interior (``Side.INSIDE``) or exterior of a Euclidean sphere."""

    center: tuple
    radius: float
    side: Side = Side.INSIDE

    def __post_init__(self):
        object.__setattr__(self, "center", _coords(self.center, "center"))
        r = float(self.radius)
        if not np.isfinite(r) or r <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "side", Side(self.side))

    @property
    def dim(self):
        return len(self.center)

    def complement(self):
        return Sphere(self.center, self.radius, self.side.flipped())


@dataclass(frozen=True)
class HalfSpace:
    """The open region {x : normal . x > offset}; ``normal`` is a unit vector."""

    normal: tuple
    offset: float

    def __post_init__(self):
        n = _coords(self.normal, "normal")
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError(f"normal must be a unit vector, |n| = {np.linalg.norm(n)!r}")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self):
        return len(self.normal)

    def complement(self):
        return HalfSpace(tuple(-c for c in self.normal), -self.offset)


OrientedBall = Sphere | HalfSpace


def lift_ball(b):
    """Space-like unit vector of an oriented ball."""
    if isinstance(b, Sphere):
        c = np.array(b.center)
        r = b.radius
        A = float(c @ c) - r * r
        v = np.concatenate([c / r, [(A - 1.0) / (2.0 * r), (A + 1.0) / (2.0 * r)]])
        return v if b.side is Side.INSIDE else -v
    if isinstance(b, HalfSpace):
        return np.concatenate([b.normal, [b.offset, b.offset]])
    raise TypeError(f"not a ball: {b!r}")


def unlift_ball(v):
    """Oriented ball whose lift is the space-like vector ``v`` (normalized first)."""
    v = np.asarray(v, dtype=np.float64)
    n2 = float(lorentz_inner(v, v))
    if n2 <= TAU_ZERO * float(v @ v):
        raise NotSpaceLike(f"vector is not space-like (<v,v> = {n2:.3g})")
    # <v, v> carries an absolute rounding error of order eps * |v|^2, which for
    # tiny spheres dwarfs 1; rescaling an already-unit vector by it would
    # corrupt the radius, so only genuinely non-unit inputs are normalized
    if abs(n2 - 1.0) > UNIT_SLACK * np.finfo(np.float64).eps * float(v @ v):
        v = v / np.sqrt(n2)
    x, s, t = v[:-2], v[-2], v[-1]
    kappa = t - s
    if abs(kappa) > TAU_PLANE:
        side = Side.INSIDE if kappa > 0 else Side.OUTSIDE
        return Sphere(x / kappa, 1.0 / abs(kappa), side)
    nx = np.linalg.norm(x)
    return HalfSpace(x / nx, 0.5 * (s + t) / nx)


def lift_point(p):
    """Positive light-like vector (p, (|p|^2 - 1)/2, (|p|^2 + 1)/2); inf -> (0, ..., 1, 1)."""
    if p.is_infinite:
        u = np.zeros(p.dim + 2)
        u[-2:] = 1.0
        return u
    x = np.array(p.coords)
    q = float(x @ x)
    return np.concatenate([x, [(q - 1.0) / 2.0, (q + 1.0) / 2.0]])


def unlift_point(w):
    """Boundary point represented by the positive light-like vector ``w`` (any scale)."""
    w = np.asarray(w, dtype=np.float64)
    e2 = float(w @ w)
    if abs(float(lorentz_inner(w, w))) > TAU_CONE * e2 or e2 == 0.0:
        raise NotLightLike("vector is not light-like")
    if w[-1] <= 0:
        raise NotPositive("light-like vector is not positive")
    kappa = w[-1] - w[-2]
    N = w.shape[0] - 2
    if abs(kappa) <= TAU_PLANE * np.sqrt(e2):
        return ExtendedPoint.infinity(N)
    return ExtendedPoint(N, tuple(w[:-2] / kappa))


def signed_inversive_distance(b1, b2):
    _check_dims(b1, b2)
    return float(lorentz_inner(lift_ball(b1), lift_ball(b2)))


def unsigned_inversive_distance(b1, b2):
    return abs(signed_inversive_distance(b1, b2))


def inversive_distance_formula(b1, b2):
    """(r1^2 + r2^2 - |c1 - c2|^2) / (2 r1 r2) for two sphere interiors."""
    c1, c2 = np.array(b1.center), np.array(b2.center)
    d = c1 - c2
    return (b1.radius**2 + b2.radius**2 - float(d @ d)) / (2.0 * b1.radius * b2.radius)


def _check_dims(*items):
    dims = {x.dim for x in items}
    if len(dims) != 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")


def lightray_cross_ratio(v1, v2, v3, v4):
    """<v1,v2><v3,v4> / (<v1,v3><v2,v4>) for positive light-like vectors."""
    vs = [np.asarray(v, dtype=np.float64) for v in (v1, v2, v3, v4)]
    vs = [v / np.linalg.norm(v) for v in vs]
    g = {}
    for i in range(4):
        for j in range(i + 1, 4):
            g[i, j] = float(lorentz_inner(vs[i], vs[j]))
            if abs(g[i, j]) <= TAU_ZERO:
                raise DuplicateRays(f"rays {i + 1} and {j + 1} coincide")
    return g[0, 1] * g[2, 3] / (g[0, 2] * g[1, 3])


def absolute_cross_ratio(a, b, c, d):
    """|a - b||c - d| / (|a - c||b - d|), with infinity handled through the lifts."""
    pts = (a, b, c, d)
    _check_dims(*pts)
    if len(set(pts)) < 4:
        raise DuplicatePoints("cross-ratio needs four distinct points")
    try:
        return float(np.sqrt(lightray_cross_ratio(*(lift_point(p) for p in pts))))
    except DuplicateRays as exc:
        raise DuplicatePoints(str(exc)) from exc


class Relation(str, Enum):
    DISJOINT = "BoundariesDisjoint"
    TANGENT = "Tangent"
    INTERSECTING = "Intersecting"


@dataclass(frozen=True)
class BallRelation:
    """``value`` is the hyperbolic distance between the planes (disjoint),
    the dihedral angle of the two half-spaces (intersecting), or 0 (tangent)."""

    kind: Relation
    inversive_distance: float
    value: float


def relation_of_balls(b1, b2):
    _check_dims(b1, b2)
    v1, v2 = lift_ball(b1), lift_ball(b2)
    if min(np.linalg.norm(v1 - v2), np.linalg.norm(v1 + v2)) <= TAU_REL * max(1.0, np.linalg.norm(v1)):
        raise SameBoundary("the two balls have the same boundary sphere")
    lam = float(lorentz_inner(v1, v2))
    if abs(lam) > 1.0 + TAU_REL:
        return BallRelation(Relation.DISJOINT, lam, float(np.arccosh(abs(lam))))
    if abs(lam - 1.0) <= TAU_REL or abs(lam + 1.0) <= TAU_REL:
        return BallRelation(Relation.TANGENT, lam, 0.0)
    return BallRelation(Relation.INTERSECTING, lam, float(np.arccos(lam)))


def _require_positive(g, dim):
    if not g.positive:
        raise NotPositive("map does not preserve the upper sheet")
    if g.dim != dim + 2:
        raise DimensionMismatch(f"map of size {g.dim} cannot act on R^{dim}")


def apply_to_point(g, p):
    _require_positive(g, p.dim)
    return unlift_point(g.apply(lift_point(p)))


def apply_to_ball(g, b):
    _require_positive(g, b.dim)
    return unlift_ball(g.apply(lift_ball(b)))


def contains(b, p):
    """Membership through the lift sign convention."""
    return float(lorentz_inner(lift_ball(b), lift_point(p))) > 0


def ball_model_to_hyperboloid(x):
    """Isometry from the unit ball model of dimension M - 1 onto the hyperboloid sheet."""
    x = np.asarray(x, dtype=np.float64)
    q = float(x @ x)
    if q >= (1.0 - TAU_ZERO) ** 2:
        raise OnOrOutsideBoundary(f"|x| = {np.sqrt(q)!r} is not inside the unit ball")
    den = 1.0 - q
    return np.concatenate([2.0 * x / den, [(1.0 + q) / den]])


def chordal_distance(p, q):
    """Chordal distance on the Riemann sphere; 2 between antipodes."""
    _check_dims(p, q)
    if p.is_infinite and q.is_infinite:
        return 0.0
    if p.is_infinite or q.is_infinite:
        x = np.array(q.coords if p.is_infinite else p.coords)
        return 2.0 / np.sqrt(1.0 + float(x @ x))
    x, y = np.array(p.coords), np.array(q.coords)
    d = x - y
    return 2.0 * np.sqrt(float(d @ d)) / np.sqrt((1.0 + float(x @ x)) * (1.0 + float(y @ y)))


def ball_error(b1, b2):
    """Discrepancy of two balls measured on their lifts.

    Relative max-norm difference of the unit space-like lifts. Unlike centre
    and radius it stays finite across the sphere/half-space transition.
    """
    v1, v2 = lift_ball(b1), lift_ball(b2)
    return float(np.max(np.abs(v1 - v2)) / max(1.0, float(np.max(np.abs(v2)))))

