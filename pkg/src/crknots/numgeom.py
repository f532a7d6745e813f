"""Floating-point verification layer, independent of the symbolic solvers.

Everything here sees polynomials only through numeric evaluation:
surface sampling, tangent frames of graph embeddings in R^6, the
complex-tangency defect (smallest singular value of [B | JB]), Gauss-
Newton projection onto implicit curves, predictor-corrector curve
tracing, stereographic projection and discrete Gauss linking numbers.
"""

import json

import numpy as np
from scipy.linalg import null_space
from scipy.spatial import cKDTree

from . import _kernels
from .algebra import AMBIENT, Polynomial
from .cr import RHO_HEISENBERG, RHO_SPHERE
from .errors import (
    CurvesTooClose,
    NoCurveFound,
    NonConvergence,
    OpenCurve,
    PoleTooClose,
    RankDeficientJacobian,
)

SURFACE_TOL = 1e-8


class NumericPoly:
    """An ambient polynomial packed for fast numeric work.

    Precomputes exponent/coefficient arrays for the polynomial and its
    four Wirtinger derivatives.
    """

    def __init__(self, p):
        if p.form != AMBIENT:
            raise ValueError("NumericPoly expects ambient form")
        self.poly = p
        self._packed = self._pack(p)
        self._deriv = {
            v: self._pack(p.wirtinger(v)) for v in ("z", "zb", "w", "wb")
        }

    @staticmethod
    def _pack(p):
        if not p.terms:
            return (
                np.zeros((0, 4), dtype=np.int64),
                np.zeros(0, dtype=np.complex128),
            )
        exps = np.array(sorted(p.terms), dtype=np.int64)
        coeffs = np.array(
            [p.terms[tuple(e)].to_complex() for e in exps], dtype=np.complex128
        )
        return exps, coeffs

    def val(self, z, w):
        e, c = self._packed
        return complex(
            _kernels.poly_eval_batch(e, c, np.array([z]), np.array([w]))[0]
        )

    def val_many(self, zs, ws):
        e, c = self._packed
        return _kernels.poly_eval_batch(e, c, zs, ws)

    def wirt(self, var, z, w):
        e, c = self._deriv[var]
        if len(c) == 0:
            return 0j
        return complex(
            _kernels.poly_eval_batch(e, c, np.array([z]), np.array([w]))[0]
        )

    def complex_diff(self, z, w, dz, dw):
        """Total differential along (dz, dw) using all four derivatives."""
        return (
            self.wirt("z", z, w) * dz
            + self.wirt("zb", z, w) * np.conjugate(dz)
            + self.wirt("w", z, w) * dw
            + self.wirt("wb", z, w) * np.conjugate(dw)
        )

    def real_gradient_rows(self, z, w):
        """Rows (d Re/d x, d Im/d x) for x = (x1, x2, x3, x4) in R^4."""
        gz = self.wirt("z", z, w)
        gzb = self.wirt("zb", z, w)
        gw = self.wirt("w", z, w)
        gwb = self.wirt("wb", z, w)
        # d/dx1 = d/dz + d/dzb, d/dx2 = i(d/dz - d/dzb), same for w
        d = np.array(
            [gz + gzb, 1j * (gz - gzb), gw + gwb, 1j * (gw - gwb)],
            dtype=np.complex128,
        )
        return np.vstack([d.real, d.imag])


class SurfaceSpec:
    """One of the two built-in hypersurfaces rho = 0 in C^2."""

    def __init__(self, kind):
        if kind not in ("sphere", "heisenberg"):
            raise ValueError(f"unknown surface {kind!r}")
        self.kind = kind
        self.rho = RHO_SPHERE if kind == "sphere" else RHO_HEISENBERG
        self._rho_num = NumericPoly(self.rho)

    def rho_val(self, z, w):
        return self._rho_num.val(z, w).real

    def rho_grad(self, z, w):
        # rho is real-valued, so the real gradient is its top row
        return self._rho_num.real_gradient_rows(z, w)[0]


SPHERE_SURFACE = SurfaceSpec("sphere")
HEISENBERG_SURFACE = SurfaceSpec("heisenberg")


def get_surface(kind):
    return SPHERE_SURFACE if kind == "sphere" else HEISENBERG_SURFACE


def _to_pairs(x):
    """(z, w) complex pair from either a pair or an R^4 vector."""
    x = np.asarray(x)
    if x.shape == (4,):
        return complex(x[0], x[1]), complex(x[2], x[3])
    return complex(x[0]), complex(x[1])


def _to_r4(z, w):
    return np.array([z.real, z.imag, w.real, w.imag])


def sample_surface(surface, n, seed):
    """Deterministic random surface points, all satisfying |rho| < 1e-12.

    Sphere: normalized 4D Gaussians.  Heisenberg: z uniform in the
    radius-2 disc, u uniform in [-2, 2], w = u + i|z|^2.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    if surface.kind == "sphere":
        v = rng.normal(size=(n, 4))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return [(complex(a, b), complex(c, d)) for a, b, c, d in v]
    r = 2.0 * np.sqrt(rng.uniform(size=n))
    th = rng.uniform(0, 2 * np.pi, size=n)
    u = rng.uniform(-2, 2, size=n)
    zs = r * np.exp(1j * th)
    return [
        (complex(z), complex(uu, abs(z) ** 2)) for z, uu in zip(zs, u)
    ]


class TangentFrame:
    """Pushforward of an orthonormal tangent basis under the graph map."""

    def __init__(self, point, basis):
        self.point = point  # (z, w)
        self.basis = basis  # (6, 3)


def tangent_frame(surface, f, x):
    """Tangent frame of the graph of f over the surface at x.

    The first four rows of the basis are an orthonormal basis of
    ker grad(rho) in R^4; the last two carry the real Jacobian of f
    along those directions.
    """
    z, w = _to_pairs(x)
    if abs(surface.rho_val(z, w)) > SURFACE_TOL:
        raise ValueError("point is not on the surface")
    grad = surface.rho_grad(z, w)
    if np.linalg.norm(grad) < 1e-12:
        raise ValueError("vanishing surface gradient")
    basis4 = null_space(grad[None, :])  # (4, 3) orthonormal
    fn = f if isinstance(f, NumericPoly) else NumericPoly(f)
    rows = fn.real_gradient_rows(z, w)  # (2, 4)
    push = rows @ basis4  # (2, 3)
    return TangentFrame((z, w), np.vstack([basis4, push]))


def _apply_j(b):
    """Multiplication by i on R^6 = C^3, column-wise."""
    out = np.empty_like(b)
    out[0::2] = -b[1::2]
    out[1::2] = b[0::2]
    return out


def tangency_defect(frame):
    """Smallest singular value of [B | JB] with normalized columns.

    Zero exactly when the tangent 3-plane contains a complex line, i.e.
    when the point is a complex tangent of the graph embedding.
    """
    b = frame.basis
    m = np.hstack([b, _apply_j(b)])
    norms = np.linalg.norm(m, axis=0)
    if np.min(norms) < 1e-12:
        raise ValueError("degenerate frame")
    return float(np.linalg.svd(m / norms, compute_uv=False)[-1])


def project_to_variety(surface, g, x0, tol=1e-10, max_iter=50):
    """Gauss-Newton projection onto {g = 0} on the surface.

    The system is (rho, Re g, Im g): R^4 -> R^3.  Returns the converged
    point as a (z, w) pair, or raises NonConvergence /
    RankDeficientJacobian.
    """
    gn = g if isinstance(g, NumericPoly) else NumericPoly(g)
    z, w = _to_pairs(x0)

    def residual(z, w):
        gv = gn.val(z, w)
        return np.array([surface.rho_val(z, w), gv.real, gv.imag])

    r = residual(z, w)
    for _ in range(max_iter):
        if np.linalg.norm(r) < tol:
            return z, w
        jac = np.vstack(
            [surface.rho_grad(z, w)[None, :], gn.real_gradient_rows(z, w)]
        )
        if np.linalg.norm(jac) < 1e-14:
            raise RankDeficientJacobian("zero Jacobian during projection")
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        # damped update: halve until the residual does not increase
        scale = 1.0
        base = np.linalg.norm(r)
        for _ in range(20):
            xt = _to_r4(z, w) + scale * step
            zt, wt = _to_pairs(xt)
            rt = residual(zt, wt)
            if np.linalg.norm(rt) <= base:
                z, w, r = zt, wt, rt
                break
            scale *= 0.5
        else:
            raise NonConvergence("line search stalled")
    if np.linalg.norm(r) < tol:
        return z, w
    raise NonConvergence("projection did not reach tolerance")


class TracedCurve:
    """Ordered samples of the zero curve, grouped into components."""

    def __init__(self, components, meta):
        self.components = components  # list of (points (n,4), closed flag)
        self.meta = meta

    def to_json(self):
        doc = {
            "surface": self.meta.get("surface"),
            "polynomial": self.meta.get("polynomial"),
            "step": self.meta.get("step"),
            "seed": self.meta.get("seed"),
            "components": [
                {"closed": bool(closed), "points": pts.tolist()}
                for pts, closed in self.components
            ],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        comps = [
            (np.asarray(c["points"], dtype=float), bool(c["closed"]))
            for c in doc["components"]
        ]
        meta = {k: doc.get(k) for k in ("surface", "polynomial", "step", "seed")}
        return cls(comps, meta)


def _curve_tangent(surface, gn, z, w, min_sv=1e-6):
    """Unit kernel vector of the 3x4 Jacobian; raises on rank drop."""
    jac = np.vstack(
        [surface.rho_grad(z, w)[None, :], gn.real_gradient_rows(z, w)]
    )
    u, s, vt = np.linalg.svd(jac)
    if s[2] < min_sv * max(s[0], 1e-30):
        raise RankDeficientJacobian("curve Jacobian lost rank 3")
    return vt[3]


def _orient(t):
    """Fix sign by the first component exceeding a small floor."""
    for c in t:
        if abs(c) > 1e-9:
            return t if c > 0 else -t
    return t


def _trace_one_direction(surface, gn, start, direction, step, tol,
                         max_steps, radius_cap):
    """March from start along the curve; returns (points, closed)."""
    pts = [np.asarray(start, dtype=float)]
    t_prev = direction
    z, w = _to_pairs(start)
    for n_steps in range(1, max_steps + 1):
        pred = pts[-1] + step * t_prev
        zp, wp = _to_pairs(pred)
        try:
            z, w = project_to_variety(surface, gn, (zp, wp), tol=tol)
        except (NonConvergence, RankDeficientJacobian):
            return pts, False
        cur = _to_r4(z, w)
        if np.linalg.norm(cur) > radius_cap:
            return pts, False
        pts.append(cur)
        try:
            t = _curve_tangent(surface, gn, z, w)
        except RankDeficientJacobian:
            return pts, False
        if np.dot(t, t_prev) < 0:
            t = -t
        t_prev = t
        if n_steps >= 10 and np.linalg.norm(cur - pts[0]) < 2 * step:
            return pts, True
    return pts, False


def trace_curve(surface, g, step=0.01, seeds=64, tol=1e-9, seed=0,
                max_steps=100000, radius_cap=8.0):
    """Trace the zero curve {g = 0} on the surface.

    Predictor: unit kernel vector of the 3x4 Jacobian with a fixed sign
    convention at the start point and continuity afterwards.  Corrector:
    Gauss-Newton projection.  A component closes when it returns within
    2 x step of its start after at least 10 steps; open arcs are extended
    backwards from the seed.  Components whose point sets come within
    5 x step of an existing component are treated as duplicates.
    """
    gn = g if isinstance(g, NumericPoly) else NumericPoly(g)
    samples = sample_surface(surface, seeds, seed)
    components = []
    trees = []
    for x0 in samples:
        try:
            z, w = project_to_variety(surface, gn, x0, tol=tol)
        except (NonConvergence, RankDeficientJacobian):
            continue
        start = _to_r4(z, w)
        if any(t.query(start)[0] < 5 * step for t in trees):
            continue
        try:
            t0 = _orient(_curve_tangent(surface, gn, z, w))
        except RankDeficientJacobian:
            continue
        fwd, closed = _trace_one_direction(
            surface, gn, start, t0, step, tol, max_steps, radius_cap
        )
        if closed:
            pts = np.asarray(fwd)
        else:
            bwd, _ = _trace_one_direction(
                surface, gn, start, -t0, step, tol, max_steps, radius_cap
            )
            pts = np.vstack([np.asarray(bwd)[::-1], np.asarray(fwd)[1:]])
        if len(pts) < 3:
            continue
        if any(t.query(pts)[0].min() < 5 * step for t in trees):
            continue
        components.append((pts, closed))
        trees.append(cKDTree(pts))
    if not components:
        raise NoCurveFound("no seed reached the zero curve")
    meta = {
        "surface": surface.kind,
        "polynomial": g.format() if isinstance(g, Polynomial) else gn.poly.format(),
        "step": step,
        "seed": seed,
    }
    return TracedCurve(components, meta)


# -- stereographic projection and linking ---------------------------------


def _pole_basis(pole):
    pole = np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    basis = null_space(pole[None, :])  # (4, 3)
    return pole, basis


def stereo_project(points, pole):
    """Stereographic projection of S^3 points through the given pole.

    The image lives in the orthogonal complement of the pole, expressed
    in a deterministic orthonormal basis.  Raises PoleTooClose when a
    point is within 1e-3 of the pole.
    """
    pole, basis = _pole_basis(pole)
    pts = np.asarray(points, dtype=float)
    if np.min(np.linalg.norm(pts - pole, axis=1)) < 1e-3:
        raise PoleTooClose("curve passes too close to the projection pole")
    dots = pts @ pole
    perp = pts - np.outer(dots, pole)
    return (perp / (1.0 - dots)[:, None]) @ basis


def stereo_unproject(points3, pole):
    """Inverse of stereo_project with the same basis convention."""
    pole, basis = _pole_basis(pole)
    y = np.asarray(points3, dtype=float) @ basis.T  # back to R^4, pole-perp
    n2 = np.sum(y * y, axis=1)
    return (2 * y + np.outer(n2 - 1, pole)) / (n2 + 1)[:, None]


def choose_pole(points, n_candidates=100, seed=0):
    """Pole on S^3 maximizing the minimal distance to the given points."""
    rng = np.random.default_rng(seed)
    cands = rng.normal(size=(n_candidates, 4))
    cands /= np.linalg.norm(cands, axis=1, keepdims=True)
    tree = cKDTree(np.asarray(points, dtype=float))
    dists = tree.query(cands)[0]
    return cands[int(np.argmax(dists))]


def linking_number(c1, c2, closed1=True, closed2=True, min_separation=None):
    """Discrete Gauss linking integral of two closed R^3 polylines.

    Midpoint rule over all segment pairs; for well-resolved, well-
    separated curves the result is within a few percent of the integer
    linking number.
    """
    if not closed1 or not closed2:
        raise OpenCurve("linking number requires closed curves")
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    if c1.shape == c2.shape and np.allclose(c1, c2):
        raise CurvesTooClose("the two curves are identical")
    if min_separation is None:
        seg = max(
            np.median(np.linalg.norm(np.diff(c1, axis=0), axis=1)),
            np.median(np.linalg.norm(np.diff(c2, axis=0), axis=1)),
        )
        min_separation = 3 * seg
    d = cKDTree(c1).query(c2)[0].min()
    if d < min_separation:
        raise CurvesTooClose(f"curves are only {d:.3g} apart")
    s1 = np.roll(c1, -1, axis=0) - c1
    s2 = np.roll(c2, -1, axis=0) - c2
    m1 = c1 + 0.5 * s1
    m2 = c2 + 0.5 * s2
    total = _kernels.linking_sum(m1, s1, m2, s2)
    return total / (4 * np.pi)
