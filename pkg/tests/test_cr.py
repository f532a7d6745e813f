import pytest

from crknots.algebra import GaussianRational, Polynomial, parse_poly
from crknots.cr import (
    HEISENBERG,
    RHO_HEISENBERG,
    RHO_SPHERE,
    SPHERE,
    apply_cr,
    cr_from_rho,
    solve_heisenberg,
    solve_sphere_holomorphic,
    torus_knot_source,
)
from crknots.errors import NotHolomorphic, NotInRange

from helpers import random_poly


class TestOperators:
    def test_heisenberg_coefficients(self):
        op = cr_from_rho(RHO_HEISENBERG)
        assert op.coeff_zb == Polynomial.constant(GaussianRational(0, 1))
        assert op.coeff_wb == parse_poly("2 z")

    def test_sphere_coefficients(self):
        op = cr_from_rho(RHO_SPHERE)
        assert op.coeff_zb == parse_poly("w")
        assert op.coeff_wb == parse_poly("-z")

    def test_constant_rho_gives_zero_operator(self):
        op = cr_from_rho(parse_poly("1"))
        assert op.coeff_zb.is_zero and op.coeff_wb.is_zero

    def test_non_real_rho_rejected(self):
        with pytest.raises(ValueError):
            cr_from_rho(parse_poly("z"))

    def test_apply_is_a_derivation(self, rng):
        for _ in range(10):
            p, q = random_poly(rng, 4, 3), random_poly(rng, 4, 3)
            lhs = apply_cr(SPHERE, p * q)
            rhs = apply_cr(SPHERE, p) * q + p * apply_cr(SPHERE, q)
            assert lhs == rhs

    def test_annihilates_holomorphic(self):
        assert apply_cr(SPHERE, parse_poly("z^3 w - 2 w^2")).is_zero
        assert apply_cr(HEISENBERG, parse_poly("z^3 w - 2 w^2")).is_zero


class TestSolveHeisenberg:
    def test_base_case(self):
        f = solve_heisenberg(parse_poly("1"))
        assert f == parse_poly("-i zb")
        assert apply_cr(HEISENBERG, f) == parse_poly("1")

    def test_documented_example(self):
        f = solve_heisenberg(parse_poly("zb wb"))
        assert f.format() == "(-1/2i) zb^2 wb + (1/3) z zb^3"

    def test_w_factor_passthrough(self, rng):
        w3 = parse_poly("w^3")
        for _ in range(5):
            q = random_poly(rng, 3, 3)
            assert solve_heisenberg(w3 * q) == w3 * solve_heisenberg(q)

    def test_round_trip_random(self, rng):
        for _ in range(30):
            p = random_poly(rng, 6, 5)
            assert apply_cr(HEISENBERG, solve_heisenberg(p)) == p

    def test_zero(self):
        assert solve_heisenberg(Polynomial.zero()).is_zero


class TestSolveSphereHolomorphic:
    def test_torus_form(self):
        f = solve_sphere_holomorphic(parse_poly("z^2 + w^3"))
        assert apply_cr(SPHERE, f) == parse_poly("z^2 + w^3")

    def test_z_example(self):
        f = solve_sphere_holomorphic(parse_poly("z"))
        assert f == parse_poly("-wb")
        assert apply_cr(SPHERE, f) == parse_poly("z")

    def test_constant_not_in_range(self):
        with pytest.raises(NotInRange):
            solve_sphere_holomorphic(parse_poly("1"))

    def test_antiholomorphic_rejected(self):
        with pytest.raises(NotHolomorphic):
            solve_sphere_holomorphic(parse_poly("zb"))


class TestTorusSource:
    def test_2_3(self):
        assert torus_knot_source(2, 3) == parse_poly("-z wb + zb w^2")

    def test_1_1(self):
        src = torus_knot_source(1, 1)
        assert src == parse_poly("zb - wb")
        assert apply_cr(SPHERE, src) == parse_poly("z + w")

    def test_2_2_hopf(self):
        src = torus_knot_source(2, 2)
        assert apply_cr(SPHERE, src) == parse_poly("z^2 + w^2")

    def test_identity_grid(self):
        for p in range(1, 7):
            for q in range(1, 7):
                image = apply_cr(SPHERE, torus_knot_source(p, q))
                assert image == parse_poly(f"z^{p} + w^{q}")

    def test_invalid(self):
        with pytest.raises(ValueError):
            torus_knot_source(0, 2)
