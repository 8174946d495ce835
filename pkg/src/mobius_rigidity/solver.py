"""Recovering the Mobius transformation between two configurations from their invariants.

Ball configurations are matched through the signed inversive distances
(the Lorentz Gram matrix of the ball lifts), point configurations through
absolute cross-ratios (a rescaled Gram matrix of the point lifts). In both
cases the map is built by matching Lorentz frames.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import product

import numpy as np

from . import kernels
from .errors import (
    CommonBoundaryPoint,
    CrossRatioMismatch,
    DegenerateSpan,
    DimensionMismatch,
    DuplicatePoints,
    GramMismatch,
    VerificationFailed,
)
from .inversive import (
    ExtendedPoint,
    HalfSpace,
    Side,
    Sphere,
    apply_to_ball,
    apply_to_point,
    ball_error,
    chordal_distance,
    lift_ball,
    lift_point,
    unlift_ball,
    unlift_point,
)
from .minkowski import (
    CausalClass,
    LorentzMap,
    SubspaceClass,
    TAU_RANK,
    _classify_basis,
    analyze_span,
    complete_to_lorentz_basis,
    lorentz_complement,
    reflection,
)

BALL_TOL = 1e-6
POINT_TOL = 1e-7


class Kind(str, Enum):
    BALLS = "balls"
    POINTS = "points"


class Mode(str, Enum):
    DIRECT = "Direct"
    COMPLEMENT_SWAPPED = "ComplementSwapped"


class Uniqueness(str, Enum):
    UNIQUE = "Unique"
    STRONGLY_SYMMETRIC = "StronglySymmetric"
    FIXED_HYPERBOLIC_POINT = "FixedHyperbolicPoint"
    POINTS_ON_COMMON_SPHERE = "PointsOnCommonSphere"
    # boundaries share a point: the invariants do not determine the configuration
    COMMON_BOUNDARY_POINT = "CommonBoundaryPoint"


@dataclass(frozen=True)
class Configuration:
    dim: int
    kind: Kind
    labels: tuple
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "items", tuple(self.items))
        if len(self.labels) != len(self.items):
            raise ValueError("labels and items differ in length")
        if len(set(self.labels)) != len(self.labels):
            dup = next(x for x in self.labels if self.labels.count(x) > 1)
            raise ValueError(f"duplicate label {dup!r}")
        allowed = (ExtendedPoint,) if self.kind is Kind.POINTS else (Sphere, HalfSpace)
        for label, item in zip(self.labels, self.items):
            if not isinstance(item, allowed):
                raise TypeError(f"item {label!r} is not a valid {self.kind.value} item")
            if item.dim != self.dim:
                raise DimensionMismatch(f"item {label!r} has dimension {item.dim}, expected {self.dim}")
        if self.kind is Kind.POINTS:
            seen = {}
            for label, item in zip(self.labels, self.items):
                if item in seen:
                    raise DuplicatePoints(f"points {seen[item]!r} and {label!r} coincide")
                seen[item] = label

    @classmethod
    def balls(cls, items, labels=None, dim=None):
        items = tuple(items)
        dim = items[0].dim if dim is None else dim
        labels = labels or [f"B{i + 1}" for i in range(len(items))]
        return cls(dim, Kind.BALLS, labels, items)

    @classmethod
    def points(cls, items, labels=None, dim=None):
        items = tuple(items)
        dim = items[0].dim if dim is None else dim
        labels = labels or [f"p{i + 1}" for i in range(len(items))]
        return cls(dim, Kind.POINTS, labels, items)

    def __len__(self):
        return len(self.items)

    @property
    def ambient(self):
        return self.dim + 2

    def lifts(self):
        lift = lift_point if self.kind is Kind.POINTS else lift_ball
        if not self.items:
            return np.zeros((0, self.ambient))
        return np.array([lift(x) for x in self.items])

    def transformed(self, g, complement=False):
        """Image under a positive Lorentz map (balls complemented first if asked)."""
        if self.kind is Kind.POINTS:
            items = [apply_to_point(g, p) for p in self.items]
        else:
            items = [apply_to_ball(g, b.complement() if complement else b) for b in self.items]
        return Configuration(self.dim, self.kind, self.labels, items)

    def complemented(self):
        if self.kind is not Kind.BALLS:
            raise TypeError("only ball configurations have complements")
        return Configuration(self.dim, self.kind, self.labels, [b.complement() for b in self.items])

    def with_sides(self, flips):
        """Complement the balls whose entry in ``flips`` is true."""
        items = [b.complement() if f else b for b, f in zip(self.items, flips)]
        return Configuration(self.dim, self.kind, self.labels, items)


@dataclass(frozen=True)
class SolveOutcome:
    map: LorentzMap
    mode: Mode
    uniqueness: Uniqueness
    residual_gram: float
    residual_match: float
    span: SubspaceClass | None = None
    witness: object = None

    def to_dict(self):
        return {
            "matrix": self.map.matrix.tolist(),
            "mode": self.mode.value,
            "uniqueness": self.uniqueness.value,
            "residual_gram": self.residual_gram,
            "residual_match": self.residual_match,
        }


@dataclass(frozen=True)
class UniquenessReport:
    kind: Uniqueness
    span: SubspaceClass
    # orthogonal ball / common sphere (a ball), fixed hyperbolic point (a
    # vector on the sheet) or a shared boundary point, depending on ``kind``
    witness: object = None


@dataclass(frozen=True)
class VerifyReport:
    passed: bool
    mode: Mode | None
    errors: tuple
    max_error: float
    gram_residual: float
    reason: str = ""


@dataclass(frozen=True)
class CrossRatioReport:
    passed: bool
    max_discrepancy: float
    witness: tuple
    witness_indices: tuple
    tuples_checked: int


def default_tol(V):
    G = kernels.lorentz_gram(V)
    return 1e-8 * (1.0 + (float(np.max(np.abs(G))) if G.size else 0.0))


@dataclass
class _FrameMatch:
    map: LorentzMap
    span: SubspaceClass
    residual_gram: float
    residual_match: float
    extra: dict = field(default_factory=dict)


def _match(V, W, tol, check_gram=True):
    V = np.asarray(V, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    if V.shape != W.shape:
        raise DimensionMismatch(f"frames have shapes {V.shape} and {W.shape}")
    M = V.shape[1]
    disc, i, j = kernels.gram_discrepancy(V, W)
    if check_gram and disc > tol:
        raise GramMismatch(f"Gram entries ({i}, {j}) differ by {disc:.3g} > {tol:.3g}")
    a = analyze_span(V)
    span = _classify_basis(a.basis, a.rank)
    if span.kind is CausalClass.LIGHT_LIKE:
        raise DegenerateSpan(f"span {span} is light-like; frames cannot be matched")
    S, S2 = V[a.pivots], W[a.pivots]
    if analyze_span(S2).rank != a.rank:
        raise GramMismatch("matched subset of the target is not independent")
    C, C2 = complete_to_lorentz_basis(S), complete_to_lorentz_basis(S2)
    sig = np.sign(np.einsum("ij,ij->i", C[:, :-1], C[:, :-1]) - C[:, -1] ** 2)
    sig2 = np.sign(np.einsum("ij,ij->i", C2[:, :-1], C2[:, :-1]) - C2[:, -1] ** 2)
    if not np.array_equal(sig, sig2):
        raise GramMismatch("complements have different signatures")
    B = np.vstack([S, C])
    B2 = np.vstack([S2, C2])
    # phi B^T = B2^T
    phi = np.linalg.solve(B, B2).T
    if phi.shape != (M, M):
        raise AssertionError("basis completion failed")
    res = float(np.max(np.abs(V @ phi.T - W))) if len(V) else 0.0
    scale = max(1.0, float(np.max(np.abs(W))))
    if res > 10.0 * tol * scale:
        raise GramMismatch(f"frame residual {res:.3g} exceeds {10.0 * tol * scale:.3g}")
    return _FrameMatch(LorentzMap(phi), span, float(disc), res)


def match_frames(vs, vs2, tol=None):
    """Lorentz map (not necessarily positive) sending each ``vs[i]`` to ``vs2[i]``."""
    V = np.atleast_2d(np.asarray(vs, dtype=np.float64))
    if tol is None:
        tol = default_tol(V)
    return _match(V, vs2, tol).map


def detect_common_boundary(conf):
    """Whether all boundary spheres share a point, and the span class of the lifts."""
    if conf.kind is not Kind.BALLS:
        raise TypeError("common boundary detection applies to balls")
    if not len(conf):
        raise ValueError("empty configuration")
    a = analyze_span(conf.lifts())
    span = _classify_basis(a.basis, a.rank)
    common = span.kind is CausalClass.LIGHT_LIKE or (
        span.kind is CausalClass.SPACE_LIKE and span.dim < conf.dim + 1
    )
    return common, span


def _check_pair(A, B, kind):
    if A.kind is not kind or B.kind is not kind:
        raise TypeError(f"expected two {kind.value} configurations")
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions differ: {A.dim} vs {B.dim}")
    if len(A) != len(B):
        raise DimensionMismatch(f"configurations have {len(A)} and {len(B)} items")
    if not len(A):
        raise ValueError("empty configuration")


def solve_balls(A, B, tol=None):
    """Mobius map f with f(A_i) = B_i for all i, or f(complement A_i) = B_i for all i."""
    _check_pair(A, B, Kind.BALLS)
    V, W = A.lifts(), B.lifts()
    if tol is None:
        tol = default_tol(V)
    disc, i, j = kernels.gram_discrepancy(V, W)
    if disc > tol:
        raise GramMismatch(
            f"signed inversive distances differ at ({A.labels[i]}, {A.labels[j]}) by {disc:.3g}"
        )
    common, span = detect_common_boundary(A)
    if common:
        raise CommonBoundaryPoint(f"all boundaries share a point (lift span {span})")
    fm = _match(V, W, tol, check_gram=False)
    if fm.map.positive:
        g, mode = fm.map, Mode.DIRECT
    else:
        g, mode = -fm.map, Mode.COMPLEMENT_SWAPPED
    image = A.transformed(g, complement=mode is Mode.COMPLEMENT_SWAPPED)
    errs = [ball_error(x, y) for x, y in zip(image.items, B.items)]
    worst = int(np.argmax(errs))
    if errs[worst] > BALL_TOL:
        raise VerificationFailed(f"image of {A.labels[worst]} misses its target by {errs[worst]:.3g}")
    u = classify_uniqueness(A)
    return SolveOutcome(g, mode, u.kind, fm.residual_gram, fm.residual_match, u.span, u.witness)


def _augment(A, B):
    """Pad both sides to three points with the same extra fixed points."""
    taken = set(A.items) | set(B.items)
    N = A.dim
    e1 = np.eye(N)[0]
    candidates = [
        ExtendedPoint.finite(np.zeros(N)),
        ExtendedPoint.infinity(N),
        ExtendedPoint.finite(e1),
        ExtendedPoint.finite(-e1),
        ExtendedPoint.finite(2 * e1),
        ExtendedPoint.finite(-2 * e1),
    ]
    extra = [c for c in candidates if c not in taken][: 3 - len(A)]
    labels = list(A.labels)
    for k in range(len(extra)):
        name = f"_aug{k}"
        while name in labels:
            name = "_" + name
        labels.append(name)
    return (
        Configuration(N, Kind.POINTS, labels, list(A.items) + extra),
        Configuration(N, Kind.POINTS, labels, list(B.items) + extra),
    )


def _unit_lifts(conf):
    U = conf.lifts()
    return U / np.linalg.norm(U, axis=1)[:, None]


def anchor_triple(A, B):
    """Three indices that are well separated on both sides.

    For unit lifts -<u_p, u_q> is a quarter of the squared chordal distance,
    so the pair maximizing the smaller of the two sides' separations is taken
    first and the third index maximizes its separation from both.
    """
    D = np.minimum(-kernels.lorentz_gram(_unit_lifts(A)), -kernels.lorentz_gram(_unit_lifts(B)))
    i, j = np.unravel_index(int(np.argmax(D)), D.shape)
    sep = np.minimum(D[i], D[j])
    sep[[i, j]] = -np.inf
    return int(i), int(j), int(np.argmax(sep))


def scaled_point_frames(A, B):
    """Rescale light-like lifts so that their Gram matrices must agree when the cross-ratios do.

    The anchor triple is scaled on ``A``'s side to match ``B``'s pairwise
    products (l_1^2 = h12 h13 g23 / (g12 g13 h23)). Every other lift on either
    side is scaled so that its product with a reference anchor equals a fixed
    constant; the reference is the anchor farthest from the point on both
    sides, which keeps the scale factors bounded.
    """
    if len(A) < 3:
        raise ValueError("need at least three points")
    U, U2 = _unit_lifts(A), _unit_lifts(B)
    anchors = np.array(anchor_triple(A, B))
    G, H = kernels.lorentz_gram(U[anchors]), kernels.lorentz_gram(U2[anchors])
    g12, g13, g23 = G[0, 1], G[0, 2], G[1, 2]
    h12, h13, h23 = H[0, 1], H[0, 2], H[1, 2]
    ratio = (h12 * h13 * g23) / (g12 * g13 * h23)
    if not ratio > 0:
        raise CrossRatioMismatch("anchor scaling has no positive solution")
    l1 = np.sqrt(ratio)
    lam = np.array([l1, h12 / (l1 * g12), h13 / (l1 * g13)])
    if not np.all(lam > 0):
        raise CrossRatioMismatch("anchor scaling has no positive solution")
    V, W = U.copy(), U2.copy()
    V[anchors] *= lam[:, None]
    rest = np.setdiff1d(np.arange(len(A)), anchors)
    if rest.size:
        kappa = np.cbrt(h12 * h13 * h23)  # negative, of the size of the anchor products
        PA = U[rest] @ _time_flip_rows(V[anchors]).T
        PB = U2[rest] @ _time_flip_rows(W[anchors]).T
        ref = np.argmax(np.minimum(-PA / lam, -PB), axis=1)
        rows = np.arange(rest.size)
        sa = kappa / PA[rows, ref]
        sb = kappa / PB[rows, ref]
        if not (np.all(sa > 0) and np.all(sb > 0)):
            raise CrossRatioMismatch("non-positive rescaling; points coincide numerically")
        V[rest] *= sa[:, None]
        W[rest] *= sb[:, None]
    return V, W


def _time_flip_rows(V):
    W = np.array(V, dtype=np.float64)
    W[..., -1] = -W[..., -1]
    return W


def solve_points(A, B, tol=None):
    """Mobius map f with f(A_i) = B_i, from equality of absolute cross-ratios."""
    _check_pair(A, B, Kind.POINTS)
    A3, B3 = _augment(A, B) if len(A) < 3 else (A, B)
    V, W = scaled_point_frames(A3, B3)
    if tol is None:
        tol = default_tol(W)
    disc, i, j = kernels.gram_discrepancy(V, W)
    if disc > tol:
        raise CrossRatioMismatch(
            f"cross-ratios disagree (rescaled Gram entry ({A3.labels[i]}, {A3.labels[j]}) off by {disc:.3g})"
        )
    fm = _match(V, W, tol, check_gram=False)
    g = fm.map if fm.map.positive else -fm.map
    errs = [chordal_distance(apply_to_point(g, p), q) for p, q in zip(A.items, B.items)]
    worst = int(np.argmax(errs))
    if errs[worst] > POINT_TOL:
        raise VerificationFailed(f"image of {A.labels[worst]} misses its target by {errs[worst]:.3g}")
    u = classify_uniqueness(A)
    return SolveOutcome(g, Mode.DIRECT, u.kind, fm.residual_gram, fm.residual_match, u.span, u.witness)


def _complement_frame(V):
    """Complement basis rescaled to Lorentz-orthonormal (or null) directions, with norms."""
    C = lorentz_complement(V)
    if not len(C):
        return C, np.zeros(0)
    lam, U = np.linalg.eigh(kernels.lorentz_gram(C))
    E = U.T @ C
    null = np.abs(lam) <= TAU_RANK * max(1.0, np.abs(lam).max())
    scale = np.where(null, 1.0, np.sqrt(np.abs(lam)))
    return E / scale[:, None], np.where(null, 0.0, np.sign(lam))


def _positive(v):
    return v if v[-1] > 0 else -v


def _orthogonal_ball(v):
    b = unlift_ball(v)
    if isinstance(b, Sphere) and b.side is Side.OUTSIDE:
        b = b.complement()
    return b


def common_boundary_point(V):
    """A point on every boundary sphere, from a null direction of the complement; None if absent."""
    E, sig = _complement_frame(V)
    null = np.flatnonzero(sig == 0)
    if null.size:
        return unlift_point(_positive(E[null[0]]))
    pos, neg = np.flatnonzero(sig > 0), np.flatnonzero(sig < 0)
    if pos.size and neg.size:
        return unlift_point(_positive(_positive(E[neg[0]]) + E[pos[0]]))
    return None


def classify_uniqueness(conf):
    V = conf.lifts()
    a = analyze_span(V)
    span = _classify_basis(a.basis, a.rank)
    M = conf.ambient
    if span.dim == M:
        return UniquenessReport(Uniqueness.UNIQUE, span)
    E, sig = _complement_frame(V)
    if conf.kind is Kind.POINTS:
        spacelike = E[sig > 0]
        witness = _orthogonal_ball(spacelike[0]) if len(spacelike) else None
        return UniquenessReport(Uniqueness.POINTS_ON_COMMON_SPHERE, span, witness)
    if span.kind is CausalClass.SPACE_LIKE and span.dim == conf.dim + 1:
        return UniquenessReport(Uniqueness.FIXED_HYPERBOLIC_POINT, span, _positive(E[0]))
    if span.kind is CausalClass.TIME_LIKE:
        return UniquenessReport(Uniqueness.STRONGLY_SYMMETRIC, span, _orthogonal_ball(E[sig > 0][0]))
    return UniquenessReport(Uniqueness.COMMON_BOUNDARY_POINT, span, common_boundary_point(V))


def alternate_map(conf, g):
    """A second positive map that agrees with ``g`` on every lift of ``conf``.

    Composes ``g`` with the reflection in a non-null vector of the Lorentz
    complement of the lifts; negated when needed to stay positive (the ball
    correspondence then switches mode).
    """
    E, sig = _complement_frame(conf.lifts())
    nonnull = np.flatnonzero(sig != 0)
    if not nonnull.size:
        raise ValueError("lifts span the whole space or a degenerate subspace; no alternative map")
    # prefer a space-like direction: the reflection is then positive
    k = nonnull[np.argmax(sig[nonnull])]
    h = g.compose(reflection(E[k]))
    return h if h.positive else -h


def verify_correspondence(A, B, g, tol=None):
    """Check a proposed map against two configurations item by item."""
    if A.kind is not B.kind or A.dim != B.dim or len(A) != len(B):
        raise DimensionMismatch("configurations are not comparable")
    if tol is None:
        tol = BALL_TOL if A.kind is Kind.BALLS else POINT_TOL
    V, W = A.lifts(), B.lifts()
    if A.kind is Kind.BALLS:
        gram_res = kernels.gram_discrepancy(V, W)[0]
    else:
        try:
            gram_res = kernels.gram_discrepancy(*scaled_point_frames(A, B))[0] if len(A) >= 3 else 0.0
        except CrossRatioMismatch:
            gram_res = float("inf")
    if g.dim != A.ambient:
        return VerifyReport(False, None, (), float("inf"), gram_res, "map has the wrong size")
    if not g.positive:
        return VerifyReport(False, None, (), float("inf"), gram_res, "map is not positive")
    if A.kind is Kind.POINTS:
        errs = tuple(chordal_distance(apply_to_point(g, p), q) for p, q in zip(A.items, B.items))
        mode = Mode.DIRECT
    else:
        direct = tuple(ball_error(apply_to_ball(g, a), b) for a, b in zip(A.items, B.items))
        swapped = tuple(ball_error(apply_to_ball(g, a.complement()), b) for a, b in zip(A.items, B.items))
        if max(swapped, default=0.0) < max(direct, default=0.0):
            errs, mode = swapped, Mode.COMPLEMENT_SWAPPED
        else:
            errs, mode = direct, Mode.DIRECT
    worst = max(errs, default=0.0)
    reason = "" if worst <= tol else f"max item error {worst:.3g} exceeds {tol:.3g}"
    return VerifyReport(bool(worst <= tol), mode, errs, float(worst), float(gram_res), reason)


def full_cross_ratio_check(A, B, tol=1e-9):
    """Compare the absolute cross-ratios of every ordered 4-tuple of distinct indices."""
    _check_pair(A, B, Kind.POINTS)
    m = len(A)
    if m < 4:
        raise ValueError("need at least four points")
    GA = kernels.lorentz_gram(_unit_lifts(A))
    GB = kernels.lorentz_gram(_unit_lifts(B))
    best, *idx = kernels.cross_ratio_discrepancy(GA, GB)
    idx = tuple(int(k) for k in idx)
    return CrossRatioReport(
        passed=bool(best <= tol),
        max_discrepancy=float(best),
        witness=tuple(A.labels[k] for k in idx),
        witness_indices=idx,
        tuples_checked=m * (m - 1) * (m - 2) * (m - 3),
    )


@dataclass(frozen=True)
class SideAssignment:
    flips: tuple
    max_discrepancy: float


def side_assignments(A, B, limit=16):
    """Signed-Gram discrepancy for every way of complementing balls of ``B``.

    Up to ``2**limit`` assignments; sorted best first.
    """
    _check_pair(A, B, Kind.BALLS)
    if len(B) > limit:
        raise ValueError(f"too many balls ({len(B)}) to enumerate side assignments")
    V, W = A.lifts(), B.lifts()
    out = []
    for flips in product((False, True), repeat=len(B)):
        s = np.where(flips, -1.0, 1.0)
        out.append(SideAssignment(flips, kernels.gram_discrepancy(V, W * s[:, None])[0]))
    return sorted(out, key=lambda a: a.max_discrepancy)
