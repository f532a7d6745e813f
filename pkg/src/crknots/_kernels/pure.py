"""Pure numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or disabled via
CRKNOTS_PURE_PYTHON=1.  Same signatures and results as _fast.
"""

import numpy as np

BACKEND = "pure"


def poly_eval_batch(exps, coeffs, zs, ws):
    """Evaluate a sparse ambient polynomial at many points.

    exps: (t, 4) int64 exponents (j, k, m, l); coeffs: (t,) complex128;
    zs, ws: (n,) complex128.  Returns (n,) complex128.
    """
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    zs = np.asarray(zs, dtype=np.complex128)
    ws = np.asarray(ws, dtype=np.complex128)
    out = np.zeros(zs.shape, dtype=np.complex128)
    zc = np.conjugate(zs)
    wc = np.conjugate(ws)
    for (j, k, m, l), c in zip(exps, coeffs):
        out += c * zs ** int(j) * zc ** int(k) * ws ** int(m) * wc ** int(l)
    return out


def linking_sum(mid1, seg1, mid2, seg2):
    """Discrete Gauss double sum over segment pairs (before the 1/4pi).

    mid*: (n, 3) segment midpoints; seg*: (n, 3) segment vectors.
    Returns sum over pairs of det[seg1_i, seg2_j, mid2_j - mid1_i]
    / |mid2_j - mid1_i|^3.
    """
    mid1 = np.asarray(mid1, dtype=np.float64)
    seg1 = np.asarray(seg1, dtype=np.float64)
    mid2 = np.asarray(mid2, dtype=np.float64)
    seg2 = np.asarray(seg2, dtype=np.float64)
    diff = mid2[None, :, :] - mid1[:, None, :]  # (n1, n2, 3)
    cross = np.cross(seg1[:, None, :], seg2[None, :, :])
    num = np.einsum("ijk,ijk->ij", cross, diff)
    dist3 = np.linalg.norm(diff, axis=2) ** 3
    return float(np.sum(num / dist3))
