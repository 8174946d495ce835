"""Pure numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` in semantics (including tie-breaking of the
reported witness indices) and are used when the compiled extension is not
available. The two backends accumulate products in different orders, so
values agree to rounding and witnesses agree unless two entries tie to within
rounding.
"""

import numpy as np


def lorentz_gram(V):
    """Gram matrix of the rows of ``V`` under the Lorentz form.

    The last coordinate is time-like. The result is exactly symmetric.
    """
    V = np.ascontiguousarray(V, dtype=np.float64)
    G = V[:, :-1] @ V[:, :-1].T - np.outer(V[:, -1], V[:, -1])
    upper = np.triu(G)
    return upper + np.triu(upper, 1).T


def gram_discrepancy(A, B):
    """Largest ``|<a_i, a_j> - <b_i, b_j>|`` over ``i <= j``.

    Returns ``(value, i, j)``; the first maximum in row-major order wins.
    ``(0.0, -1, -1)`` for empty input.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    m = A.shape[0]
    if m == 0:
        return 0.0, -1, -1
    D = np.abs(lorentz_gram(A) - lorentz_gram(B))
    D = np.triu(D)
    # lower triangle is zero and cannot beat a real entry except on ties at 0
    flat = int(np.argmax(D))
    i, j = divmod(flat, m)
    if D[i, j] == 0.0:
        return 0.0, 0, 0
    return float(D[i, j]), i, j


def _cross_ratio_block(G, a):
    # r[b, c, d] = sqrt(G[a,b] G[c,d] / (G[a,c] G[b,d]))
    num = G[a, :, None, None] * G[None, :, :]
    den = G[a, None, :, None] * G[:, None, :]
    return np.sqrt(num / den)


def cross_ratio_discrepancy(GA, GB):
    """Compare absolute cross-ratios over every ordered 4-tuple of distinct indices.

    ``GA`` and ``GB`` are Lorentz Gram matrices of (any positive multiples of)
    the light-like lifts of the two point configurations. The discrepancy of a
    tuple is ``|r - r'| / max(1, r, r')``. Returns ``(value, a, b, c, d)`` for
    the lexicographically first maximal tuple.
    """
    GA = np.ascontiguousarray(GA, dtype=np.float64)
    GB = np.ascontiguousarray(GB, dtype=np.float64)
    m = GA.shape[0]
    if m < 4:
        raise ValueError("need at least four points")
    idx = np.arange(m)
    distinct = (
        (idx[:, None, None] != idx[None, :, None])
        & (idx[:, None, None] != idx[None, None, :])
        & (idx[None, :, None] != idx[None, None, :])
    )
    best = -1.0
    witness = (0, 0, 0, 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        for a in range(m):
            ra = _cross_ratio_block(GA, a)
            rb = _cross_ratio_block(GB, a)
            disc = np.abs(ra - rb) / np.maximum(np.maximum(ra, rb), 1.0)
            mask = distinct & (idx[:, None, None] != a) & (idx[None, :, None] != a) & (idx[None, None, :] != a)
            disc = np.where(mask & ~np.isnan(disc), disc, -1.0)
            flat = int(np.argmax(disc))
            val = float(disc.flat[flat])
            if val > best:
                best = val
                b, rem = divmod(flat, m * m)
                c, d = divmod(rem, m)
                witness = (a, b, c, d)
    return best, *witness
