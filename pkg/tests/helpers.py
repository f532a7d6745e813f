"""Shared random-data generators for the test suite."""

from fractions import Fraction

from crknots.algebra import GaussianRational, Polynomial


def random_coeff(rng):
    return GaussianRational(
        Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
        Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
    )


def random_poly(rng, max_degree=6, n_terms=5, form="ambient"):
    """Random sparse polynomial with Gaussian-rational coefficients."""
    terms = {}
    for _ in range(n_terms):
        while True:
            mono = tuple(rng.randint(0, max_degree) for _ in range(4))
            if sum(mono) <= max_degree:
                break
        if form == "hcoord":
            mono = (mono[0], mono[1], mono[2], 0)
        terms[mono] = random_coeff(rng)
    return Polynomial(terms, form=form)
