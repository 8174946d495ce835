"""Lorentz linear algebra on R^M with the form x_1 y_1 + ... + x_{M-1} y_{M-1} - x_M y_M.

Vectors are plain 1-d float64 numpy arrays whose last coordinate is the
time-like one; sequences of vectors are 2-d arrays with one vector per row.
A Mobius transformation of R^N u {inf} is represented by an M x M Lorentz
matrix with M = N + 2.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from . import kernels
from .errors import (
    AllZero,
    DegenerateSpan,
    DimensionMismatch,
    FullSpace,
    NotOnSheet,
    RankAmbiguous,
)

TAU_ZERO = 1e-12
TAU_RANK = 1e-10
TAU_LORENTZ = 1e-9
# a singular value in (TAU_RANK, AMBIGUITY_FACTOR * TAU_RANK) * s_max is refused
AMBIGUITY_FACTOR = 100.0


class CausalClass(str, Enum):
    SPACE_LIKE = "SpaceLike"
    TIME_LIKE = "TimeLike"
    LIGHT_LIKE = "LightLike"
    ZERO = "Zero"


@dataclass(frozen=True)
class SubspaceClass:
    kind: CausalClass
    dim: int

    def __str__(self):
        return f"{self.kind.value}({self.dim})"


@dataclass(frozen=True)
class CanonicalForm:
    """One of the model subspaces T_p, S_p, L_p (``kind`` is "T", "S" or "L")."""

    kind: str
    dim: int


@dataclass(frozen=True, eq=False)
class LorentzMap:
    """An M x M matrix preserving the Lorentz form, acting on column vectors."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 3:
            raise DimensionMismatch(f"Lorentz map must be square of size >= 3, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("Lorentz map has non-finite entries")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def positive(self):
        return bool(self.matrix[-1, -1] > 0)

    def __call__(self, v):
        return self.apply(v)

    def apply(self, v):
        """Apply to one vector or to the rows of a 2-d array."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape[-1] != self.dim:
            raise DimensionMismatch(f"map of size {self.dim} applied to vector of size {v.shape[-1]}")
        return v @ self.matrix.T

    def compose(self, other):
        """``self o other``."""
        return LorentzMap(self.matrix @ other.matrix)

    def inverse(self):
        # G^{-1} = J G^T J for Lorentz G
        J = metric(self.dim)
        return LorentzMap(J @ self.matrix.T @ J)

    def __neg__(self):
        return LorentzMap(-self.matrix)

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim))


@dataclass(frozen=True)
class LorentzReport:
    residual: float
    time_entry: float
    positive: bool

    def ok(self, tol=1e-8):
        return self.positive and self.residual <= tol


def metric(M):
    """J = diag(1, ..., 1, -1)."""
    J = np.eye(M)
    J[-1, -1] = -1.0
    return J


def as_vectors(vs):
    """Coerce to a 2-d float array of finite vectors, one per row."""
    V = np.atleast_2d(np.asarray(vs, dtype=np.float64))
    if V.ndim != 2:
        raise DimensionMismatch(f"expected a sequence of vectors, got shape {V.shape}")
    if V.shape[1] < 3:
        raise DimensionMismatch(f"Minkowski dimension must be >= 3, got {V.shape[1]}")
    if not np.all(np.isfinite(V)):
        raise ValueError("vectors must be finite")
    return V


def lorentz_inner(u, v):
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape[-1] != v.shape[-1]:
        raise DimensionMismatch(f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")
    return np.sum(u[..., :-1] * v[..., :-1], axis=-1) - u[..., -1] * v[..., -1]


def lorentz_norm2(v):
    return lorentz_inner(v, v)


def causal_class(v, tol=TAU_ZERO):
    v = np.asarray(v, dtype=np.float64)
    e2 = float(v @ v)
    if np.sqrt(e2) <= tol:
        return CausalClass.ZERO
    n2 = float(lorentz_inner(v, v))
    if abs(n2) <= tol * e2:
        return CausalClass.LIGHT_LIKE
    return CausalClass.SPACE_LIKE if n2 > 0 else CausalClass.TIME_LIKE


def gram_matrix(vs):
    """Pairwise Lorentz products; exactly symmetric."""
    V = as_vectors(vs)
    return kernels.lorentz_gram(V)


@dataclass(frozen=True)
class SpanAnalysis:
    """Rank analysis shared by the span operations.

    ``basis`` holds a Euclidean-orthonormal basis of the span (rows), ``pivots``
    the indices of a maximal independent subset of the input, ``null`` a
    Euclidean-orthonormal basis of the Euclidean orthogonal complement.
    """

    rank: int
    pivots: np.ndarray
    basis: np.ndarray
    null: np.ndarray
    singular_values: np.ndarray


def analyze_span(vs, tol=TAU_RANK):
    V = as_vectors(vs)
    norms = np.linalg.norm(V, axis=1)
    if norms.max() <= TAU_ZERO:
        raise AllZero("all vectors are zero")
    keep = norms > TAU_ZERO * norms.max()
    rows = np.flatnonzero(keep)
    # row-normalize so that the rank decision is independent of vector scale
    U = V[rows] / norms[rows, None]
    _, s, vt = np.linalg.svd(U, full_matrices=True)
    smax = s[0]
    band = (s > tol * smax) & (s < AMBIGUITY_FACTOR * tol * smax)
    if np.any(band):
        raise RankAmbiguous(
            f"singular values {s.tolist()} straddle the rank threshold {tol * smax:.3g}",
            singular_values=s,
        )
    r = int(np.count_nonzero(s > tol * smax))
    _, _, piv = scipy.linalg.qr(U.T, mode="economic", pivoting=True)
    pivots = np.sort(rows[piv[:r]])
    return SpanAnalysis(rank=r, pivots=pivots, basis=vt[:r], null=vt[r:], singular_values=s)


def _classify_basis(Q, r):
    # Q rows are Euclidean-orthonormal; the compressed form has eigenvalues in [-1, 1]
    M = Q.shape[1]
    G = Q @ metric(M) @ Q.T
    w = np.linalg.eigvalsh(G)
    # ||G|| <= ||J|| = 1; a relative threshold would fail for a single null line
    if np.abs(w).min() <= TAU_RANK:
        return SubspaceClass(CausalClass.LIGHT_LIKE, r)
    neg = int(np.count_nonzero(w < 0))
    if neg == 0:
        return SubspaceClass(CausalClass.SPACE_LIKE, r)
    if neg == 1:
        return SubspaceClass(CausalClass.TIME_LIKE, r)
    raise ValueError(f"restricted form has {neg} negative eigenvalues")  # impossible for signature (M-1, 1)


def classify_span(vs):
    """Causal type and dimension of the span of ``vs``."""
    a = analyze_span(vs)
    return _classify_basis(a.basis, a.rank)


def lorentz_complement(vs):
    """Basis (rows) of {y : <x, y> = 0 for all x in span(vs)}."""
    a = analyze_span(vs)
    # <x, y> = x^T J y vanishes on the span iff J y is Euclidean-orthogonal to it
    return a.null @ metric(a.basis.shape[1])


def _orthonormal_completion(W, n):
    """Orthogonal n x n matrix whose first k rows span the rows of W (k x n)."""
    k = W.shape[0]
    if k == 0:
        return np.eye(n)
    Q, _ = np.linalg.qr(np.vstack([W, np.eye(n)]).T)
    return Q.T


def _householder(s):
    """Orthogonal matrix sending s to |s| e_1."""
    n = s.shape[0]
    norm = np.linalg.norm(s)
    h = s.copy()
    h[0] -= norm
    hn = np.linalg.norm(h)
    if norm == 0.0 or hn <= TAU_ZERO * norm:
        return np.eye(n)
    h /= hn
    return np.eye(n) - 2.0 * np.outer(h, h)


def hyperbolic_rotation(a, b, i, j, M):
    """The matrix A[a, b]: identity except a at (i,i), (j,j) and b at (i,j), (j,i)."""
    A = np.eye(M)
    A[i, i] = A[j, j] = a
    A[i, j] = A[j, i] = b
    return A


def canonicalize_subspace(vs):
    """Lorentz map taking span(vs) onto T_p, S_p or L_p.

    Follows the three-stage construction: ``alpha`` rotates the space-like
    block so that span(vs) n R^{M-1} becomes a coordinate subspace, ``beta``
    rotates the remaining space-like coordinates so the off-block part is
    concentrated in coordinate p, and ``gamma`` is the identity, a time
    reflection, or a hyperbolic rotation in the (p, M) plane.
    """
    V = as_vectors(vs)
    M = V.shape[1]
    a = analyze_span(V)
    p = a.rank
    if p == M:
        raise FullSpace("span is the whole space; no proper canonical form")
    kind = _classify_basis(a.basis, p).kind
    Q = a.basis  # p x M
    q = Q[:, -1]
    qn = np.linalg.norm(q)
    if qn <= TAU_RANK:
        # span already inside R^{M-1}
        O = _orthonormal_completion(Q[:, :-1], M - 1)
        alpha = np.eye(M)
        alpha[:-1, :-1] = O
        return LorentzMap(alpha), CanonicalForm("S", p)

    # intersection with R^{M-1}: combinations c with q . c = 0
    c0 = q / qn
    if p > 1:
        _, _, vt = np.linalg.svd(q[None, :])
        W = vt[1:] @ Q  # (p-1) x M, last coordinate ~ 0
    else:
        W = np.zeros((0, M))
    alpha = np.eye(M)
    alpha[:-1, :-1] = _orthonormal_completion(W[:, :-1], M - 1)

    u = alpha @ (c0 @ Q)  # time coordinate is qn > 0
    u[: p - 1] = 0.0  # R^{p-1} already lies in alpha(V)
    s = u[p - 1 : M - 1]
    beta = np.eye(M)
    beta[p - 1 : M - 1, p - 1 : M - 1] = _householder(s)
    w = beta @ u
    wp, wt = w[p - 1], w[-1]

    if kind == CausalClass.LIGHT_LIKE:
        if wp * wt >= 0:
            gamma = np.eye(M)
        else:
            gamma = metric(M)  # time reflection
        form = "L"
    else:
        ell = np.sqrt(abs(wp * wp - wt * wt))
        if kind == CausalClass.SPACE_LIKE:
            gamma = hyperbolic_rotation(wp / ell, -wt / ell, p - 1, M - 1, M)
            form = "S"
        else:
            gamma = hyperbolic_rotation(wt / ell, -wp / ell, p - 1, M - 1, M)
            form = "T"
    return LorentzMap(gamma @ beta @ alpha), CanonicalForm(form, p)


def canonical_support(form, M):
    """Boolean mask of the coordinates a vector of the canonical subspace may use."""
    mask = np.zeros(M, dtype=bool)
    p = form.dim
    mask[: p - 1] = True
    if form.kind == "S":
        mask[p - 1] = True
    elif form.kind == "T":
        mask[-1] = True
    else:
        mask[p - 1] = True
        mask[-1] = True
    return mask


def complete_to_lorentz_basis(vs):
    """Lorentz-orthonormal basis (rows) of the complement of a non-degenerate span.

    Space-like vectors come first; each row w satisfies <w, w> = +-1.
    """
    V = as_vectors(vs)
    cls = classify_span(V)
    if cls.kind == CausalClass.LIGHT_LIKE:
        raise DegenerateSpan("span is light-like; its complement meets it")
    C = lorentz_complement(V)
    if C.shape[0] == 0:
        return C
    G = kernels.lorentz_gram(C)
    lam, U = np.linalg.eigh(G)
    order = np.argsort(-lam, kind="stable")
    lam, U = lam[order], U[:, order]
    W = (U / np.sqrt(np.abs(lam))).T @ C
    return W


def validate_lorentz(m):
    G = m.matrix if isinstance(m, LorentzMap) else np.asarray(m, dtype=np.float64)
    J = metric(G.shape[0])
    residual = float(np.max(np.abs(G.T @ J @ G - J)))
    t = float(G[-1, -1])
    return LorentzReport(residual=residual, time_entry=t, positive=t > 0)


def on_sheet(x, tol=TAU_ZERO):
    x = np.asarray(x, dtype=np.float64)
    return x[-1] > 0 and abs(lorentz_inner(x, x) + 1.0) <= tol * max(1.0, float(x @ x))


def hyperbolic_distance(x, y):
    """Distance on the hyperboloid sheet: arccosh(-<x, y>)."""
    for name, z in (("x", x), ("y", y)):
        if not on_sheet(z):
            raise NotOnSheet(f"{name} is not on the upper sheet of the hyperboloid")
    return float(np.arccosh(max(1.0, -float(lorentz_inner(x, y)))))


def random_lorentz(seed, M):
    """Deterministic positive Lorentz map: 2M alternating rotations and boosts.

    Rotations act in a random pair of space-like coordinates with a uniform
    angle; boosts A[cosh t, sinh t] act in a random (i, M) plane with t
    uniform in [-2, 2].
    """
    if M < 3:
        raise DimensionMismatch("M must be >= 3")
    rng = np.random.default_rng(seed)
    G = np.eye(M)
    for step in range(2 * M):
        E = np.eye(M)
        if step % 2 == 0:
            i, j = rng.choice(M - 1, size=2, replace=False)
            th = rng.uniform(0.0, 2.0 * np.pi)
            c, s = np.cos(th), np.sin(th)
            E[i, i] = E[j, j] = c
            E[i, j], E[j, i] = -s, s
        else:
            i = int(rng.integers(M - 1))
            t = rng.uniform(-2.0, 2.0)
            E = hyperbolic_rotation(np.cosh(t), np.sinh(t), i, M - 1, M)
        G = E @ G
    return LorentzMap(G)


def reflection(w):
    """Lorentz reflection in the non-null vector ``w``: fixes w^L, sends w to -w."""
    w = np.asarray(w, dtype=np.float64)
    n2 = float(lorentz_inner(w, w))
    if abs(n2) <= TAU_ZERO * float(w @ w):
        raise ValueError("cannot reflect in a light-like vector")
    M = w.shape[0]
    return LorentzMap(np.eye(M) - 2.0 * np.outer(w, metric(M) @ w) / n2)
