"""Tangential CR operators of the Heisenberg surface and the 3-sphere.

The operator attached to a real hypersurface rho = 0 in C^2 is the
first-order derivation

    L = (d rho / d wb) d/dzb - (d rho / d zb) d/dwb.

Zeros of L(f) on the surface locate the complex tangents of the graph
embedding x -> (x, f(x)).  This module holds the two built-in operators,
the constructive solver that inverts the Heisenberg operator on
polynomials, and the holomorphic-range solver for the sphere operator.
"""

from fractions import Fraction

from .algebra import (
    AMBIENT,
    GaussianRational,
    I,
    ONE,
    Polynomial,
    parse_poly,
)
from .errors import MixedFormError, NotHolomorphic, NotInRange


class CROperator:
    """A derivation A d/dzb + B d/dwb with polynomial coefficients."""

    __slots__ = ("coeff_zb", "coeff_wb", "name")

    def __init__(self, coeff_zb, coeff_wb, name="custom"):
        object.__setattr__(self, "coeff_zb", coeff_zb)
        object.__setattr__(self, "coeff_wb", coeff_wb)
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("CROperator is immutable")

    def __repr__(self):
        return (
            f"<CROperator {self.name}: ({self.coeff_zb}) d/dzb + "
            f"({self.coeff_wb}) d/dwb>"
        )


# defining functions of the two built-in surfaces
RHO_HEISENBERG = parse_poly("i wb - i w - 2 z zb")
RHO_SPHERE = parse_poly("z zb + w wb - 1")


def cr_from_rho(rho):
    """Build the tangential CR operator of the hypersurface rho = 0."""
    if rho.form != AMBIENT:
        raise MixedFormError("cr_from_rho expects an ambient polynomial")
    if rho.conjugate() != rho:
        raise ValueError("defining function must be real-valued")
    return CROperator(rho.wirtinger("wb"), -rho.wirtinger("zb"))


HEISENBERG = CROperator(
    Polynomial.constant(I),
    Polynomial.variable("z").scale(2),
    name="heisenberg",
)
SPHERE = CROperator(
    Polynomial.variable("w"),
    -Polynomial.variable("z"),
    name="sphere",
)


def apply_cr(op, f):
    """Exact polynomial A df/dzb + B df/dwb."""
    return op.coeff_zb * f.wirtinger("zb") + op.coeff_wb * f.wirtinger("wb")


# memoized particular solutions for monomials z^j zb^k wb^l; the
# cross-term recursion revisits shifted exponents, so sharing pays off
_solve_memo = {}


def _solve_monomial(j, k, l):
    """f with L_H(f) = z^j zb^k wb^l, following the inductive construction."""
    key = (j, k, l)
    cached = _solve_memo.get(key)
    if cached is not None:
        return cached
    lead = GaussianRational(0, Fraction(-1, k + 1))  # 1/(i(k+1))
    if l == 0:
        out = Polynomial.monomial((j, k + 1, 0, 0), lead)
    else:
        candidate = Polynomial.monomial((j, k + 1, 0, l), lead)
        # L_H(candidate) = z^j zb^k wb^l + (2l/(i(k+1))) z^{j+1} zb^{k+1} wb^{l-1}
        cross = GaussianRational(0, Fraction(-2 * l, k + 1))
        out = candidate - _solve_monomial(j + 1, k + 1, l - 1).scale(cross)
    _solve_memo[key] = out
    return out


def solve_heisenberg(p):
    """Particular polynomial solution of L_H(f) = p.

    The Heisenberg operator is surjective on polynomials; w^m factors
    pass through it, and the wb-exponent is eliminated by the inductive
    recursion on monomials.  The returned solution is the one generated
    by that recursion, with no kernel-element normalization.
    """
    if p.form != AMBIENT:
        raise MixedFormError("solve_heisenberg expects ambient form")
    out = Polynomial.zero()
    for (j, k, m, l), c in p.terms.items():
        f = _solve_monomial(j, k, l).scale(c)
        if m:
            f = f * Polynomial.monomial((0, 0, m, 0))
        out = out + f
    return out


def solve_sphere_holomorphic(h):
    """f with L_sphere(f) = h for holomorphic h with zero constant term.

    Splits h = z h1 + w h2 monomial by monomial (z-division preferred)
    and returns zb h2 - wb h1.
    """
    if h.form != AMBIENT:
        raise MixedFormError("solve_sphere_holomorphic expects ambient form")
    h1 = {}
    h2 = {}
    for (a, k, b, l), c in h.terms.items():
        if k or l:
            raise NotHolomorphic("input contains zb or wb")
        if a >= 1:
            h1[(a - 1, 0, b, 0)] = c
        elif b >= 1:
            h2[(a, 0, b - 1, 0)] = c
        else:
            raise NotInRange("constant term is not in the operator's range")
    zb = Polynomial.variable("zb")
    wb = Polynomial.variable("wb")
    return zb * Polynomial(h2) - wb * Polynomial(h1)


def torus_knot_source(p, q):
    """The graph function w^{q-1} zb - z^{p-1} wb.

    Its CR image under the sphere operator is z^p + w^q, whose zero set
    on the 3-sphere is the (p, q) torus knot (a link with gcd(p, q)
    components when p and q are not coprime).
    """
    if p < 1 or q < 1:
        raise ValueError("torus parameters must be positive integers")
    return Polynomial.monomial((0, 1, q - 1, 0), ONE) - Polynomial.monomial(
        (p - 1, 0, 0, 1), ONE
    )
