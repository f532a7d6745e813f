import numpy as np
import pytest

from crknots.algebra import parse_poly
from crknots.errors import (
    CurvesTooClose,
    NoCurveFound,
    OpenCurve,
    PoleTooClose,
)
from crknots.numgeom import (
    NumericPoly,
    TracedCurve,
    choose_pole,
    get_surface,
    linking_number,
    project_to_variety,
    sample_surface,
    stereo_project,
    stereo_unproject,
    tangency_defect,
    tangent_frame,
    trace_curve,
)

SPH = get_surface("sphere")
HEI = get_surface("heisenberg")


class TestSampling:
    def test_on_surface(self):
        for surf in (SPH, HEI):
            for z, w in sample_surface(surf, 200, seed=1):
                assert abs(surf.rho_val(z, w)) < 1e-12

    def test_deterministic(self):
        a = sample_surface(SPH, 10, seed=7)
        b = sample_surface(SPH, 10, seed=7)
        assert all(x == y for x, y in zip(a, b))


class TestNumericPoly:
    def test_val_matches_eval(self, rng):
        from helpers import random_poly

        p = random_poly(rng, 4, 4)
        np_p = NumericPoly(p)
        z, w = 0.3 - 0.2j, -0.1 + 0.7j
        assert abs(np_p.val(z, w) - p.eval(z, w)) < 1e-12

    def test_val_many(self):
        p = NumericPoly(parse_poly("z^2 + w^2"))
        zs = np.array([1j, 0.5]); ws = np.array([1.0, 0.5j])
        got = p.val_many(zs, ws)
        assert np.allclose(got, [0, 0])


class TestTangency:
    def test_holomorphic_graph_defect_zero(self):
        f = NumericPoly(parse_poly("z w"))
        for x in sample_surface(SPH, 50, seed=2):
            assert tangency_defect(tangent_frame(SPH, f, x)) < 1e-8

    def test_zb_on_heisenberg_bounded_below(self):
        f = NumericPoly(parse_poly("zb"))
        defects = [
            tangency_defect(tangent_frame(HEI, f, x))
            for x in sample_surface(HEI, 200, seed=3)
        ]
        assert min(defects) > 1e-3

    def test_frame_directional_derivative_oracle(self):
        f = NumericPoly(parse_poly("z^2 + w^3 + zb w"))
        h = 1e-5
        for x in sample_surface(SPH, 10, seed=4):
            fr = tangent_frame(SPH, f, x)
            z, w = fr.point
            base = np.array([z.real, z.imag, w.real, w.imag])
            for col in range(3):
                d4 = fr.basis[:4, col]
                plus = base + h * d4
                minus = base - h * d4
                fd = (
                    f.val(complex(plus[0], plus[1]), complex(plus[2], plus[3]))
                    - f.val(complex(minus[0], minus[1]),
                            complex(minus[2], minus[3]))
                ) / (2 * h)
                got = complex(fr.basis[4, col], fr.basis[5, col])
                assert abs(fd - got) < 1e-8 * max(1.0, abs(fd))

    def test_defect_basis_invariant(self):
        # rotating the 3 basis columns by a random orthogonal matrix
        # leaves the smallest singular value unchanged
        f = NumericPoly(parse_poly("z^2 + w^3"))
        x = sample_surface(SPH, 1, seed=5)[0]
        fr = tangent_frame(SPH, f, x)
        d0 = tangency_defect(fr)
        rng = np.random.default_rng(0)
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        fr2 = type(fr)(fr.point, fr.basis @ q)
        assert abs(tangency_defect(fr2) - d0) < 1e-8


class TestProjection:
    def test_converges_onto_variety(self):
        g = NumericPoly(parse_poly("z^2 + w^3"))
        hits = 0
        for x in sample_surface(SPH, 30, seed=6):
            try:
                z, w = project_to_variety(SPH, g, x)
            except Exception:
                continue
            hits += 1
            assert abs(SPH.rho_val(z, w)) < 1e-9
            assert abs(g.val(z, w)) < 1e-9
        assert hits >= 10


class TestTracing:
    def test_great_circle(self):
        curve = trace_curve(SPH, parse_poly("z"), step=0.02, seeds=16, seed=0)
        assert len(curve.components) == 1
        pts, closed = curve.components[0]
        assert closed
        ws = np.abs(pts[:, 2] + 1j * pts[:, 3])
        assert np.max(np.abs(ws - 1)) < 1e-8

    def test_torus_modulus_identity(self):
        image = parse_poly("z^2 + w^3")
        curve = trace_curve(SPH, image, step=0.01, seeds=32, seed=0)
        assert len(curve.components) == 1
        pts, closed = curve.components[0]
        assert closed
        z = pts[:, 0] + 1j * pts[:, 1]
        w = pts[:, 2] + 1j * pts[:, 3]
        assert np.max(np.abs(np.abs(z) ** 2 - np.abs(w) ** 3)) < 1e-6

    def test_half_step_consistency(self):
        a = trace_curve(SPH, parse_poly("z^2 + w^2"), step=0.02, seeds=16)
        b = trace_curve(SPH, parse_poly("z^2 + w^2"), step=0.01, seeds=16)
        assert len(a.components) == len(b.components) == 2
        from scipy.spatial import cKDTree

        for pa, _ in a.components:
            d = min(
                max(cKDTree(pb).query(pa)[0].max(),
                    cKDTree(pa).query(pb)[0].max())
                for pb, _ in b.components
            )
            assert d < 2 * 0.02

    def test_no_curve(self):
        with pytest.raises(NoCurveFound):
            trace_curve(SPH, parse_poly("2 + z zb"), seeds=8)

    def test_json_round_trip(self):
        curve = trace_curve(SPH, parse_poly("z"), step=0.05, seeds=8, seed=3)
        doc = curve.to_json()
        back = TracedCurve.from_json(doc)
        assert back.meta["surface"] == curve.meta["surface"]
        assert len(back.components) == len(curve.components)
        assert np.allclose(back.components[0][0], curve.components[0][0])


class TestStereo:
    def test_round_trip(self):
        rng = np.random.default_rng(1)
        pts = rng.normal(size=(20, 4))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        pole = np.array([0.0, 0.0, 0.0, -1.0])
        pts = pts[np.linalg.norm(pts - pole, axis=1) > 0.5]
        y = stereo_project(pts, pole)
        back = stereo_unproject(y, pole)
        assert np.max(np.abs(back - pts)) < 1e-10

    def test_pole_too_close(self):
        pole = np.array([1.0, 0.0, 0.0, 0.0])
        with pytest.raises(PoleTooClose):
            stereo_project(np.array([[1.0, 0, 0, 0]]), pole)

    def test_choose_pole_avoids_curve(self):
        t = np.linspace(0, 2 * np.pi, 100, endpoint=False)
        pts = np.stack([np.cos(t), np.sin(t), 0 * t, 0 * t], axis=1)
        pole = choose_pole(pts, seed=0)
        assert np.min(np.linalg.norm(pts - pole, axis=1)) > 0.5


class TestLinking:
    @staticmethod
    def circle(center, normal_pair, radius=1.0, n=200):
        t = np.linspace(0, 2 * np.pi, n, endpoint=False)
        e1, e2 = normal_pair
        return center + radius * (np.outer(np.cos(t), e1)
                                  + np.outer(np.sin(t), e2))

    def test_hopf_style_circles(self):
        e = np.eye(3)
        c1 = self.circle(np.zeros(3), (e[0], e[1]))
        c2 = self.circle(np.array([1.0, 0, 0]), (e[0], e[2]))
        lk = linking_number(c1, c2)
        assert abs(abs(lk) - 1) < 0.01

    def test_unlinked(self):
        e = np.eye(3)
        c1 = self.circle(np.zeros(3), (e[0], e[1]))
        c2 = self.circle(np.array([5.0, 0, 0]), (e[0], e[2]))
        assert abs(linking_number(c1, c2)) < 0.01

    def test_refinement_converges(self):
        e = np.eye(3)
        lks = []
        for n in (200, 400):
            c1 = self.circle(np.zeros(3), (e[0], e[1]), n=n)
            c2 = self.circle(np.array([1.0, 0, 0]), (e[0], e[2]), n=n)
            lks.append(linking_number(c1, c2))
        assert abs(lks[0] - lks[1]) < 0.01

    def test_open_rejected(self):
        c = np.array([[0.0, 0, 0], [1, 0, 0], [2, 0, 0]])
        with pytest.raises(OpenCurve):
            linking_number(c, c + np.array([0, 5, 0]), closed1=False)

    def test_identical_curves_rejected(self):
        e = np.eye(3)
        c = self.circle(np.zeros(3), (e[0], e[1]))
        with pytest.raises(CurvesTooClose):
            linking_number(c, c)
