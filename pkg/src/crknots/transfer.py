"""Moving constructions between the Heisenberg surface and the 3-sphere.

phi maps the Heisenberg surface biholomorphically onto the sphere minus
(0, 1); psi is its inverse.  Pulling a polynomial back through phi and
clearing denominators turns sphere-side algebraic curves into
Heisenberg-side ones.  Pushing a Heisenberg graph function forward
through psi produces a rational function with poles at w = 1 only; after
multiplication by a high power of (1 - w) it extends continuously over
the pole, and its CR image vanishes there to a prescribed order.  Rigid
motions of the Heisenberg surface (exact rational data) move knots
around without leaving the polynomial world.
"""

from fractions import Fraction

from .algebra import (
    AMBIENT,
    GaussianRational,
    HCOORD,
    I,
    ONE,
    Polynomial,
    divide_by_linear,
    to_ambient,
    to_h_coords,
)
from .cr import SPHERE, apply_cr
from .errors import MixedFormError, PoleHit

_POLE_TOL = 1e-12


def eval_map(direction, z, w):
    """Numeric image of a point under phi or psi.

    phi(z, w) = (2z/(w+i), (w-i)/(w+i)) maps the Heisenberg surface into
    the sphere minus (0, 1); psi(z, w) = (iz/(1-w), i(1+w)/(1-w)) inverts
    it.  Raises PoleHit within 1e-12 of the excluded point.
    """
    z, w = complex(z), complex(w)
    if direction == "phi":
        d = w + 1j
        if abs(d) < _POLE_TOL:
            raise PoleHit("phi undefined at w = -i")
        return 2 * z / d, (w - 1j) / d
    if direction == "psi":
        d = 1 - w
        if abs(d) < _POLE_TOL:
            raise PoleHit("psi undefined at w = 1")
        return 1j * z / d, 1j * (1 + w) / d
    raise ValueError(f"unknown direction {direction!r}")


def _one_minus(var):
    return Polynomial.constant(1) - Polynomial.variable(var)


def _strip_linear(p, var, root):
    """Divide out (var - root) factors; returns (reduced, count)."""
    count = 0
    while p.terms:
        q, rem = divide_by_linear(p, var, root)
        if rem.terms:
            break
        p = q
        count += 1
    return p, count


def pullback_numerator(p):
    """Clear denominators of p composed with phi.

    Returns (q, M, N) with p(phi(x)) * (i+w)^M * (wb-i)^N = q(x).  Each
    monomial z^j zb^k w^m wb^l pulls back to
    2^{j+k} z^j zb^k (w-i)^m (wb+i)^l / ((w+i)^{j+m} (wb-i)^{k+l});
    clearing to the max denominator exponents and then dividing out any
    common (w+i), (wb-i) factors gives a canonical numerator.
    """
    if p.form != AMBIENT:
        raise MixedFormError("pullback_numerator expects ambient form")
    if not p.terms:
        return Polynomial.zero(), 0, 0
    M = max(j + m for (j, k, m, l) in p.terms)
    N = max(k + l for (j, k, m, l) in p.terms)
    w = Polynomial.variable("w")
    wb = Polynomial.variable("wb")
    w_mi = w - Polynomial.constant(I)  # w - i
    w_pi = w + Polynomial.constant(I)  # w + i
    wb_pi = wb + Polynomial.constant(I)  # wb + i
    wb_mi = wb - Polynomial.constant(I)  # wb - i
    q = Polynomial.zero()
    for (j, k, m, l), c in p.terms.items():
        term = Polynomial.monomial((j, k, 0, 0), c * GaussianRational(2 ** (j + k)))
        term = term * w_mi**m * wb_pi**l
        term = term * w_pi ** (M - j - m) * wb_mi ** (N - k - l)
        q = q + term
    # canonical representative: q is unique up to (w+i), (wb-i) factors
    while M > 0:
        red, rem = divide_by_linear(q, "w", -I)
        if rem.terms:
            break
        q, M = red, M - 1
    while N > 0:
        red, rem = divide_by_linear(q, "wb", I)
        if rem.terms:
            break
        q, N = red, N - 1
    return q, M, N


class PuncturedRational:
    """A function num * (1-w)^alpha * (1-wb)^beta on C^2 minus {w = 1}.

    Normalized so num is not divisible by (1-w) or (1-wb); the zero
    polynomial is stored with alpha = beta = 0.
    """

    __slots__ = ("num", "alpha", "beta")

    def __init__(self, num, alpha, beta):
        if num.form != AMBIENT:
            raise MixedFormError("PuncturedRational numerator must be ambient")
        if not num.terms:
            alpha = beta = 0
        else:
            num, a = _strip_linear(num, "w", GaussianRational(1))
            num, b = _strip_linear(num, "wb", GaussianRational(1))
            # stripping (w-1)^a pulls out (-1)^a relative to (1-w)^a
            if (a + b) % 2:
                num = -num
            alpha += a
            beta += b
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def __setattr__(self, name, value):
        raise AttributeError("PuncturedRational is immutable")

    def __eq__(self, other):
        if not isinstance(other, PuncturedRational):
            return NotImplemented
        return (
            self.num == other.num
            and self.alpha == other.alpha
            and self.beta == other.beta
        )

    def eval(self, z, w):
        w = complex(w)
        d1 = 1 - w
        d2 = 1 - w.conjugate()
        if (self.alpha < 0 or self.beta < 0) and min(abs(d1), abs(d2)) < _POLE_TOL:
            raise PoleHit("evaluation at the puncture w = 1")
        return self.num.eval(z, w) * d1**self.alpha * d2**self.beta

    @property
    def is_zero(self):
        return self.num.is_zero

    def __repr__(self):
        return (
            f"<PuncturedRational ({self.num}) * (1-w)^{self.alpha} "
            f"* (1-wb)^{self.beta}>"
        )


def transfer_to_sphere(f, r):
    """(1-w)^{2n+r} * (f o psi) as a normalized PuncturedRational.

    n is the total degree of f.  r >= 2 keeps the product continuously
    differentiable across the puncture.  Monomial z^j zb^k w^m wb^l of f
    composes with psi to
    i^j (-i)^k i^m (-i)^l z^j zb^k (1+w)^m (1+wb)^l
        / ((1-w)^{j+m} (1-wb)^{k+l}).
    """
    if f.form != AMBIENT:
        raise MixedFormError("transfer_to_sphere expects ambient form")
    if r < 2:
        raise ValueError("transfer exponent r must be at least 2")
    if not f.terms:
        return PuncturedRational(Polynomial.zero(), 0, 0)
    n = f.degree()
    D = max(j + m for (j, k, m, l) in f.terms)
    E = max(k + l for (j, k, m, l) in f.terms)
    one_pw = Polynomial.constant(1) + Polynomial.variable("w")
    one_pwb = Polynomial.constant(1) + Polynomial.variable("wb")
    one_mw = _one_minus("w")
    one_mwb = _one_minus("wb")
    num = Polynomial.zero()
    for (j, k, m, l), c in f.terms.items():
        unit = I ** (j + m) * (-I) ** (k + l)
        term = Polynomial.monomial((j, k, 0, 0), c * unit)
        term = term * one_pw**m * one_pwb**l
        term = term * one_mw ** (D - j - m) * one_mwb ** (E - k - l)
        num = num + term
    return PuncturedRational(num, 2 * n + r - D, -E)


def apply_cr_punctured(g):
    """Sphere CR operator applied to a punctured rational, exactly.

    (1-w) is holomorphic, so only the (1-wb)^beta factor differentiates:

        L(N (1-w)^a (1-wb)^b)
            = (1-w)^a (1-wb)^{b-1} (L(N) (1-wb) + b z N).

    The alpha exponent is unchanged (before renormalization).
    """
    ln = apply_cr(SPHERE, g.num)
    z = Polynomial.variable("z")
    num = ln * _one_minus("wb") + z * g.num.scale(g.beta)
    return PuncturedRational(num, g.alpha, g.beta - 1)


class RigidMotionH:
    """Rigid motion of the Heisenberg surface in (x, y, u) coordinates.

    Acts as v -> R v + (Re a, Im a, t) on the real coordinates
    (x, y, u) = (Re z, Im z, Re w).  All data is exact rational; R must
    be orthogonal exactly, which keeps moved knot polynomials exact.
    """

    __slots__ = ("a", "t", "R")

    IDENTITY_R = (
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
    )

    def __init__(self, a=GaussianRational(0), t=0, R=None):
        a = GaussianRational._coerce(a)
        if a is NotImplemented:
            raise TypeError("translation a must be exact (GaussianRational)")
        R = self.IDENTITY_R if R is None else tuple(
            tuple(Fraction(x) for x in row) for row in R
        )
        if len(R) != 3 or any(len(row) != 3 for row in R):
            raise ValueError("R must be a 3x3 matrix")
        for i in range(3):
            for j in range(3):
                dot = sum(R[k][i] * R[k][j] for k in range(3))
                if dot != (1 if i == j else 0):
                    raise ValueError("R is not exactly orthogonal")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "t", Fraction(t))
        object.__setattr__(self, "R", R)

    def __setattr__(self, name, value):
        raise AttributeError("RigidMotionH is immutable")

    @property
    def translation(self):
        return (self.a.re, self.a.im, self.t)

    def apply_numeric(self, z, u):
        """Forward motion of a surface point given as (z, u)."""
        v = (float(z.real), float(z.imag), float(u))
        b = tuple(float(x) for x in self.translation)
        out = [
            sum(float(self.R[i][j]) * v[j] for j in range(3)) + b[i]
            for i in range(3)
        ]
        return complex(out[0], out[1]), out[2]


def move_knot(g, motion):
    """Transport the zero set of g on the Heisenberg surface by a motion.

    Substitutes the inverse motion (real-linear in z, zb, u) into the
    hcoord form of g and converts back, so x in Z(g) implies
    motion(x) in Z(result) on the surface.
    """
    gh = to_h_coords(g)
    half = GaussianRational(Fraction(1, 2))
    mhalf_i = GaussianRational(0, Fraction(-1, 2))
    z = Polynomial.variable("z", HCOORD)
    zb = Polynomial.variable("zb", HCOORD)
    u = Polynomial.variable("u", HCOORD)
    coords = [
        (z + zb).scale(half),  # x
        (z - zb).scale(mhalf_i),  # y
        u,
    ]
    b = motion.translation
    shifted = [coords[i] - Polynomial.constant(GaussianRational(b[i]), HCOORD)
               for i in range(3)]
    # inverse motion: v -> R^T (v - b)
    inv = [
        sum(
            (shifted[k].scale(GaussianRational(motion.R[k][i])) for k in range(3)),
            Polynomial.zero(HCOORD),
        )
        for i in range(3)
    ]
    xp, yp, up = inv
    zp = xp + yp.scale(I)
    zbp = xp - yp.scale(I)
    moved = gh.substitute({"z": zp, "zb": zbp, "u": up})
    return to_ambient(moved)


def link_product(gs):
    """Product polynomial whose zero set is the union of the factors'."""
    gs = list(gs)
    if not gs:
        raise ValueError("link_product needs at least one polynomial")
    out = gs[0]
    for g in gs[1:]:
        out = out * g
    return out
