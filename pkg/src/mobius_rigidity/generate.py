"""Seeded random configurations and their images under random Mobius maps."""

import numpy as np

from .inversive import ExtendedPoint, HalfSpace, Side, Sphere
from .minkowski import analyze_span, random_lorentz
from .solver import Configuration, Kind

MAX_ATTEMPTS = 100
STRUCTURES = ("full", "strongly-symmetric", "common-sphere", "common-point", "fixed-point")


def _unit(rng, N):
    n = rng.normal(size=N)
    return n / np.linalg.norm(n)


def _side(rng):
    return Side.INSIDE if rng.random() < 0.5 else Side.OUTSIDE


def random_ball(rng, N, halfspace_prob=0.25):
    if rng.random() < halfspace_prob:
        return HalfSpace(_unit(rng, N), rng.normal())
    return Sphere(1.5 * rng.normal(size=N), rng.uniform(0.3, 2.0), _side(rng))


def random_point(rng, N, inf_prob=0.05):
    if rng.random() < inf_prob:
        return ExtendedPoint.infinity(N)
    return ExtendedPoint.finite(2.0 * rng.normal(size=N))


def _orthogonal_to_unit_sphere(rng, N):
    # boundary meets the unit sphere at right angles: |c|^2 = r^2 + 1
    if rng.random() < 0.25:
        return HalfSpace(_unit(rng, N), 0.0)
    c = _unit(rng, N) * rng.uniform(1.2, 3.0)
    return Sphere(c, np.sqrt(c @ c - 1.0), _side(rng))


def _through_hyperbolic_origin(rng, N):
    # lift orthogonal to e_M: |c|^2 - r^2 = -1
    if rng.random() < 0.25:
        return HalfSpace(_unit(rng, N), 0.0)
    c = 1.5 * rng.normal(size=N)
    return Sphere(c, np.sqrt(c @ c + 1.0), _side(rng))


def _through_point(rng, N, p):
    if rng.random() < 0.25:
        n = _unit(rng, N)
        return HalfSpace(n, float(n @ p))
    c = p + _unit(rng, N) * rng.uniform(0.5, 2.0)
    return Sphere(c, np.linalg.norm(c - p), _side(rng))


def _distinct(make, n):
    items = []
    while len(items) < n:
        x = make()
        if x not in items:
            items.append(x)
    return items


def generate_configuration(kind, n, dim, seed, structure="full"):
    """Random configuration whose lift span has the class implied by ``structure``.

    Ball structures: ``full`` (generic; Unique once n >= dim + 2),
    ``strongly-symmetric`` / ``common-sphere`` (every boundary orthogonal to
    the unit sphere), ``fixed-point`` (every boundary plane through one
    hyperbolic point), ``common-point`` (every boundary through one point).
    Point structures: ``full`` and ``strongly-symmetric`` / ``common-sphere``
    (points on the unit sphere).
    """
    kind = Kind(kind)
    if structure not in STRUCTURES:
        raise ValueError(f"unknown structure {structure!r}")
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be positive")
    rng = np.random.default_rng(seed)
    N = dim
    if kind is Kind.POINTS:
        if structure == "full":
            items = _distinct(lambda: random_point(rng, N), n)
        elif structure in ("strongly-symmetric", "common-sphere"):
            if N == 1 and n > 2:
                raise ValueError("the unit sphere of R^1 has only two points")
            items = _distinct(lambda: ExtendedPoint.finite(_unit(rng, N)), n)
        else:
            raise ValueError(f"structure {structure!r} does not apply to points")
        return Configuration.points(items, dim=N)

    minimum = {"full": N + 2, "strongly-symmetric": N + 1, "common-sphere": N + 1, "fixed-point": N + 1}
    if n < minimum.get(structure, 1):
        raise ValueError(f"structure {structure!r} needs at least {minimum[structure]} balls in dimension {N}")
    if structure == "full":
        make = lambda: random_ball(rng, N)  # noqa: E731
    elif structure in ("strongly-symmetric", "common-sphere"):
        make = lambda: _orthogonal_to_unit_sphere(rng, N)  # noqa: E731
    elif structure == "fixed-point":
        make = lambda: _through_hyperbolic_origin(rng, N)  # noqa: E731
    else:
        p = rng.normal(size=N)
        make = lambda: _through_point(rng, N, p)  # noqa: E731
    for _ in range(MAX_ATTEMPTS):
        conf = Configuration.balls(_distinct(make, n), dim=N)
        # random half-spaces all pass through inf; redraw until the span is full
        if structure != "full" or analyze_span(conf.lifts()).rank == N + 2:
            return conf
    raise RuntimeError(f"no full-span configuration after {MAX_ATTEMPTS} draws")


def generate_instance(kind, n, dim, seed, structure="full", flip=False):
    """``(A, B, g)`` with B the image of A under the random positive map g.

    With ``flip`` (balls only) every ball of B is replaced by its complement.
    """
    A = generate_configuration(kind, n, dim, seed, structure)
    map_seed = int(np.random.default_rng([seed, 1]).integers(2**63))
    g = random_lorentz(map_seed, dim + 2)
    B = A.transformed(g)
    if flip:
        B = B.complemented()
    return A, B, g
