"""Exact sparse polynomials over Gaussian rationals with Wirtinger calculus.

Two variable sets are supported:

* ambient form: the commuting formal variables z, zb, w, wb on C^2
  (zb and wb denote the formal conjugates of z and w),
* hcoord form: the variables z, zb, u used on the Heisenberg surface,
  where u is real so conjugation fixes it.

A monomial is a tuple (j, k, m, l) of exponents of (z, zb, w, wb); in
hcoord form the slot m holds the u-exponent and l is always 0.  All
coefficients are exact Gaussian rationals; floats only ever appear in
evaluation.
"""

from fractions import Fraction

from .errors import MixedFormError, PolyParseError

AMBIENT = "ambient"
HCOORD = "hcoord"

# variable name -> exponent slot
_SLOTS = {
    AMBIENT: {"z": 0, "zb": 1, "w": 2, "wb": 3},
    HCOORD: {"z": 0, "zb": 1, "u": 2},
}
# slot -> variable name, in canonical print order
_NAMES = {
    AMBIENT: ("z", "zb", "w", "wb"),
    HCOORD: ("z", "zb", "u", None),
}


class GaussianRational:
    """Exact complex scalar a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __pow__(self, n):
        if n < 0:
            return ONE / (self ** (-n))
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def to_complex(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_coeff(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _fmt_rat(r):
    return str(r)  # Fraction prints "p/q" or "p"


def format_coeff(c):
    """Plain (unparenthesized) text of a Gaussian rational, e.g. '1/2+1/3i'."""
    if c.im == 0:
        return _fmt_rat(c.re)
    if c.re == 0:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return _fmt_rat(c.im) + "i"
    s = _fmt_rat(c.re)
    if c.im > 0:
        s += "+"
    if c.im == 1:
        s += "i"
    elif c.im == -1:
        s += "-i"
    else:
        s += _fmt_rat(c.im) + "i"
    return s


class Polynomial:
    """Canonical sparse polynomial: monomial tuple -> nonzero coefficient.

    Instances are immutable by convention; all operations return new
    objects.  Mixing ambient and hcoord operands raises MixedFormError.
    """

    __slots__ = ("form", "terms")

    def __init__(self, terms=None, form=AMBIENT):
        if form not in (AMBIENT, HCOORD):
            raise ValueError(f"unknown form {form!r}")
        clean = {}
        for mono, c in (terms or {}).items():
            if not isinstance(c, GaussianRational):
                c = GaussianRational(c)
            if not c:
                continue
            j, k, m, l = mono
            if min(j, k, m, l) < 0:
                raise ValueError(f"negative exponent in monomial {mono}")
            if form == HCOORD and l != 0:
                raise ValueError("hcoord monomial with nonzero wb exponent")
            clean[(j, k, m, l)] = c
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, form=AMBIENT):
        return cls({}, form)

    @classmethod
    def constant(cls, c, form=AMBIENT):
        return cls({(0, 0, 0, 0): c}, form)

    @classmethod
    def variable(cls, name, form=AMBIENT):
        slot = _SLOTS[form].get(name)
        if slot is None:
            raise ValueError(f"variable {name!r} not in {form} form")
        mono = [0, 0, 0, 0]
        mono[slot] = 1
        return cls({tuple(mono): ONE}, form)

    @classmethod
    def monomial(cls, mono, c=ONE, form=AMBIENT):
        return cls({tuple(mono): c}, form)

    # -- ring operations -------------------------------------------------

    def _check_form(self, other):
        if self.form != other.form:
            raise MixedFormError(
                f"cannot combine {self.form} and {other.form} polynomials"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = Polynomial.constant(other, self.form)
        self._check_form(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono, ZERO) + c
            if s:
                terms[mono] = s
            else:
                terms.pop(mono, None)
        return Polynomial(terms, self.form)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()}, self.form)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = Polynomial.constant(other, self.form)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        self._check_form(other)
        terms = {}
        for (j1, k1, m1, l1), c1 in self.terms.items():
            for (j2, k2, m2, l2), c2 in other.terms.items():
                mono = (j1 + j2, k1 + k2, m1 + m2, l1 + l2)
                s = terms.get(mono, ZERO) + c1 * c2
                if s:
                    terms[mono] = s
                else:
                    terms.pop(mono, None)
        return Polynomial(terms, self.form)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        if not isinstance(c, GaussianRational):
            c = GaussianRational(c)
        return Polynomial({m: c * v for m, v in self.terms.items()}, self.form)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1, self.form)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.form == other.form and self.terms == other.terms

    def __hash__(self):
        return hash((self.form, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self):
        return not self.terms

    # -- structure -------------------------------------------------------

    def degree(self):
        """Total degree (counting every variable with degree 1); -1 if zero."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def weight(self):
        """Common weight s = j + k + 2m + 2l of all monomials, else None.

        z and zb carry weight 1; w, wb and u carry weight 2.  Raises on
        the zero polynomial.
        """
        if not self.terms:
            raise ValueError("weight of the zero polynomial is undefined")
        ws = {j + k + 2 * m + 2 * l for (j, k, m, l) in self.terms}
        if len(ws) == 1:
            return ws.pop()
        return None

    def conjugate(self):
        """Complex conjugate: swaps z<->zb, w<->wb, conjugates coefficients.

        In hcoord form u is real and stays fixed.
        """
        terms = {}
        for (j, k, m, l), c in self.terms.items():
            if self.form == AMBIENT:
                mono = (k, j, l, m)
            else:
                mono = (k, j, m, 0)
            terms[mono] = c.conjugate()
        return Polynomial(terms, self.form)

    def wirtinger(self, var):
        """Formal partial derivative with respect to one ambient variable."""
        if self.form != AMBIENT:
            raise MixedFormError("wirtinger derivatives require ambient form")
        slot = _SLOTS[AMBIENT].get(var)
        if slot is None:
            raise ValueError(f"unknown variable {var!r}")
        terms = {}
        for mono, c in self.terms.items():
            e = mono[slot]
            if e == 0:
                continue
            new = list(mono)
            new[slot] = e - 1
            terms[tuple(new)] = c * e
        return Polynomial(terms, AMBIENT)

    def eval(self, z, second):
        """Numeric value at a point.

        Ambient form expects (z, w) complex; hcoord form expects (z, u)
        with u real.  Coefficients are converted to complex doubles.
        """
        z = complex(z)
        total = 0j
        if self.form == AMBIENT:
            w = complex(second)
            zc, wc = z.conjugate(), w.conjugate()
            for (j, k, m, l), c in self.terms.items():
                total += c.to_complex() * z**j * zc**k * w**m * wc**l
        else:
            u = complex(second)
            zc = z.conjugate()
            for (j, k, m, l), c in self.terms.items():
                total += c.to_complex() * z**j * zc**k * u**m
        return total

    def substitute(self, mapping):
        """Exact composition p(var -> polynomial).

        ``mapping`` maps variable names to polynomials of a common form;
        unmapped variables are substituted by themselves in the target
        form (which must contain them).
        """
        if not mapping:
            return self
        forms = {q.form for q in mapping.values()}
        if len(forms) != 1:
            raise MixedFormError("substituted polynomials have mixed forms")
        target = forms.pop()
        subs = {}
        for name in _SLOTS[self.form]:
            if name in mapping:
                subs[name] = mapping[name]
            else:
                if name not in _SLOTS[target]:
                    raise ValueError(
                        f"incomplete variable map: {name!r} has no image in "
                        f"{target} form"
                    )
                subs[name] = Polynomial.variable(name, target)
        order = _NAMES[self.form]
        powers = {name: {0: Polynomial.constant(1, target)} for name in subs}

        def power(name, e):
            cache = powers[name]
            if e not in cache:
                cache[e] = power(name, e - 1) * subs[name]
            return cache[e]

        out = Polynomial.zero(target)
        for mono, c in self.terms.items():
            term = Polynomial.constant(c, target)
            for slot, e in enumerate(mono):
                if e == 0:
                    continue
                term = term * power(order[slot], e)
            out = out + term
        return out

    # -- printing --------------------------------------------------------

    def format(self):
        """Canonical text: graded by weight, then lex on (j, k, m, l)."""
        if not self.terms:
            return "0"
        monos = sorted(
            self.terms,
            key=lambda m: (m[0] + m[1] + 2 * m[2] + 2 * m[3], m),
        )
        pieces = []
        for idx, mono in enumerate(monos):
            c = self.terms[mono]
            factors = self._format_mono(mono)
            sep, body = _coeff_piece(c, factors, leading=(idx == 0))
            pieces.append((sep, body))
        out = pieces[0][1]
        for sep, body in pieces[1:]:
            out += f" {sep} {body}"
        return out

    def _format_mono(self, mono):
        parts = []
        for slot, e in enumerate(mono):
            if e == 0:
                continue
            name = _NAMES[self.form][slot]
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"<Polynomial {self.form}: {self.format()}>"


def _coeff_piece(c, factors, leading):
    """Render one term; returns (separator, body) with separator '+'/'-'.

    Sign is pulled into the separator only for coefficients that stay
    grammar-clean afterwards (rationals and +/-i); complex coefficients
    keep their sign inside the parentheses.
    """
    sep = "+"
    if c.im == 0:
        r = c.re
        if r < 0 and not leading:
            sep, r = "-", -r
        if r.denominator == 1:
            body = _fmt_rat(r)
            if factors and abs(r) == 1:
                body = "" if r == 1 else "-"
            elif factors:
                body += " "
        else:
            body = _fmt_rat(r) if not factors else f"({_fmt_rat(r)}) "
        return sep, (body + factors if factors else body)
    if c.re == 0 and abs(c.im) == 1:
        s = c.im
        if s < 0 and not leading:
            sep, s = "-", 1
        body = "i" if s > 0 else "-i"
        return sep, (body + " " + factors if factors else body)
    # general imaginary/complex coefficient: parenthesized, sign kept inside
    inner = format_coeff(c)
    if factors:
        return sep, f"({inner}) {factors}"
    return sep, inner if c.re != 0 or c.im > 0 else inner


# -- parsing -------------------------------------------------------------


class _Lexer:
    """Tokenizer for the polynomial grammar.

    Alphabetic runs are split greedily into known variable names, so
    juxtaposed factors like "zw" lex as z, w.
    """

    def __init__(self, text, names):
        self.text = text
        self.names = sorted(names, key=len, reverse=True)
        self.pos = 0
        self.toks = []
        self._scan()
        self.idx = 0

    def _scan(self):
        t, n = self.text, len(self.text)
        i = 0
        while i < n:
            ch = t[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and t[j].isdigit():
                    j += 1
                self.toks.append(("nat", int(t[i:j]), i))
                i = j
                continue
            if ch.isalpha():
                matched = None
                for name in self.names:
                    if t.startswith(name, i):
                        matched = name
                        break
                if matched is None:
                    raise PolyParseError(f"unknown symbol {ch!r}", i)
                kind = "i" if matched == "i" else "var"
                self.toks.append((kind, matched, i))
                i += len(matched)
                continue
            if ch in "+-*/^()":
                self.toks.append((ch, ch, i))
                i += 1
                continue
            raise PolyParseError(f"unexpected character {ch!r}", i)
        self.toks.append(("end", None, n))

    def peek(self):
        return self.toks[self.idx]

    def next(self):
        tok = self.toks[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise PolyParseError(f"expected {kind!r}, got {tok[1]!r}", tok[2])
        return tok


class _Parser:
    def __init__(self, text, form, varnames, slots):
        extra = ["i"]
        self.lex = _Lexer(text, list(varnames) + extra)
        self.form = form
        self.slots = slots

    def parse(self):
        terms = {}
        sign = 1
        kind, _, _ = self.lex.peek()
        if kind in "+-":
            sign = 1 if self.lex.next()[0] == "+" else -1
        self._term(terms, sign)
        while True:
            kind, val, pos = self.lex.peek()
            if kind == "end":
                break
            if kind not in "+-":
                raise PolyParseError(f"expected '+' or '-', got {val!r}", pos)
            sign = 1 if self.lex.next()[0] == "+" else -1
            self._term(terms, sign)
        return terms

    def _term(self, terms, sign):
        coeff = GaussianRational(sign)
        kind, _, pos = self.lex.peek()
        if kind in ("nat", "i", "("):
            coeff = coeff * self._coeff()
        elif kind not in ("var",):
            raise PolyParseError("expected a term", pos)
        mono = [0, 0, 0, 0]
        while True:
            kind, val, pos = self.lex.peek()
            if kind == "*":
                self.lex.next()
                continue
            if kind != "var":
                break
            self.lex.next()
            slot = self.slots.get(val)
            if slot is None:
                raise PolyParseError(
                    f"variable {val!r} not allowed in {self.form} form", pos
                )
            exp = 1
            if self.lex.peek()[0] == "^":
                self.lex.next()
                k2, v2, p2 = self.lex.next()
                if k2 == "-":
                    raise PolyParseError("negative exponent", p2)
                if k2 != "nat":
                    raise PolyParseError(f"expected exponent, got {v2!r}", p2)
                exp = v2
            mono[slot] += exp
        key = tuple(mono)
        s = terms.get(key, ZERO) + coeff
        if s:
            terms[key] = s
        else:
            terms.pop(key, None)

    def _nat(self):
        return self.lex.expect("nat")[1]

    def _rat(self, allow_sign):
        sign = 1
        if allow_sign and self.lex.peek()[0] in "+-":
            sign = 1 if self.lex.next()[0] == "+" else -1
        n = self._nat()
        if self.lex.peek()[0] == "/":
            self.lex.next()
            d = self._nat()
            if d == 0:
                raise PolyParseError("zero denominator", self.lex.peek()[2])
            return Fraction(sign * n, d)
        return Fraction(sign * n)

    def _coeff(self):
        kind, _, _ = self.lex.peek()
        if kind == "(":
            self.lex.next()
            c = self._gauss()
            self.lex.expect(")")
            return c
        return self._simple_coeff(allow_sign=False)

    def _simple_coeff(self, allow_sign):
        kind, _, _ = self.lex.peek()
        if kind == "i":
            self.lex.next()
            return I
        r = self._rat(allow_sign)
        if self.lex.peek()[0] == "i":
            self.lex.next()
            return GaussianRational(0, r)
        return GaussianRational(r)

    def _gauss(self):
        # liberal superset of the documented gauss rule: a signed part,
        # optionally followed by one more signed part; parts are rationals,
        # rational multiples of i, or bare i
        total = ZERO
        kind, _, pos = self.lex.peek()
        sign = 1
        if kind in "+-":
            sign = 1 if self.lex.next()[0] == "+" else -1
        total = total + GaussianRational(sign) * self._simple_coeff(False)
        kind, _, _ = self.lex.peek()
        if kind in "+-":
            sign = 1 if self.lex.next()[0] == "+" else -1
            total = total + GaussianRational(sign) * self._simple_coeff(False)
        return total


def parse_poly(text, form=AMBIENT):
    """Parse polynomial text into canonical sparse form.

    The grammar is the one documented in the README: terms joined by '+'
    or '-', each an optional coefficient followed by variable factors
    with optional '^' powers; '*' and whitespace between factors are
    optional.  Ambient form uses z, zb, w, wb; hcoord form uses z, zb, u.
    """
    if form not in _SLOTS:
        raise ValueError(f"unknown form {form!r}")
    parser = _Parser(text, form, _SLOTS[form].keys(), _SLOTS[form])
    return Polynomial(parser.parse(), form)


def parse_real_poly(text):
    """Parse a real polynomial in x1..x4 into {(e1,e2,e3,e4): Fraction}."""
    slots = {"x1": 0, "x2": 1, "x3": 2, "x4": 3}
    parser = _Parser(text, "real", slots.keys(), slots)
    out = {}
    for mono, c in parser.parse().items():
        if c.im != 0:
            raise PolyParseError("real polynomial with imaginary coefficient", 0)
        out[mono] = c.re
    return out


# -- coordinate changes ---------------------------------------------------


def to_ambient(p):
    """Rewrite an hcoord polynomial on all of C^2 via u = (w + wb)/2."""
    if p.form != HCOORD:
        raise MixedFormError("to_ambient expects hcoord form")
    half = GaussianRational(Fraction(1, 2))
    u_sub = (Polynomial.variable("w") + Polynomial.variable("wb")).scale(half)
    return p.substitute(
        {
            "z": Polynomial.variable("z"),
            "zb": Polynomial.variable("zb"),
            "u": u_sub,
        }
    )


def to_h_coords(p):
    """Restrict an ambient polynomial to the Heisenberg surface.

    Uses w = u + i z zb and wb = u - i z zb, which hold exactly on
    Im(w) = |z|^2; the result agrees with p at every point of the surface.
    """
    if p.form != AMBIENT:
        raise MixedFormError("to_h_coords expects ambient form")
    zzb = Polynomial.monomial((1, 1, 0, 0), ONE, HCOORD)
    u = Polynomial.variable("u", HCOORD)
    w_sub = u + zzb.scale(I)
    wb_sub = u - zzb.scale(I)
    return p.substitute(
        {
            "z": Polynomial.variable("z", HCOORD),
            "zb": Polynomial.variable("zb", HCOORD),
            "w": w_sub,
            "wb": wb_sub,
        }
    )


def from_real(p):
    """Complexify a real polynomial in x1..x4 to ambient form.

    Accepts either text or a mapping {(e1,e2,e3,e4): rational}.  Uses the
    identification z = x1 + i x2, w = x3 + i x4, i.e. x1 = (z+zb)/2,
    x2 = -i(z-zb)/2, x3 = (w+wb)/2, x4 = -i(w-wb)/2.
    """
    if isinstance(p, str):
        p = parse_real_poly(p)
    half = GaussianRational(Fraction(1, 2))
    mhalf_i = GaussianRational(0, Fraction(-1, 2))
    z, zb = Polynomial.variable("z"), Polynomial.variable("zb")
    w, wb = Polynomial.variable("w"), Polynomial.variable("wb")
    xs = [
        (z + zb).scale(half),
        (z - zb).scale(mhalf_i),
        (w + wb).scale(half),
        (w - wb).scale(mhalf_i),
    ]
    out = Polynomial.zero()
    for mono, c in p.items():
        term = Polynomial.constant(GaussianRational(c))
        for x, e in zip(xs, mono):
            for _ in range(e):
                term = term * x
        out = out + term
    return out


# -- exact division by linear factors -------------------------------------


def divide_by_linear(p, var, root):
    """Exact division p = (var - root) * q + r with r free of var.

    ``root`` is a GaussianRational constant.  Returns (q, r); division is
    exact iff r is the zero polynomial.
    """
    slot = _SLOTS[p.form].get(var)
    if slot is None:
        raise ValueError(f"variable {var!r} not in {p.form} form")
    root = GaussianRational._coerce(root)
    # group terms by the exponent of var
    by_deg = {}
    for mono, c in p.terms.items():
        e = mono[slot]
        base = list(mono)
        base[slot] = 0
        by_deg.setdefault(e, {})[tuple(base)] = c
    if not by_deg:
        return Polynomial.zero(p.form), Polynomial.zero(p.form)
    dmax = max(by_deg)
    coeffs = [
        Polynomial(by_deg.get(e, {}), p.form) for e in range(dmax + 1)
    ]
    quot = [Polynomial.zero(p.form)] * dmax
    carry = Polynomial.zero(p.form)
    for e in range(dmax, 0, -1):
        b = coeffs[e] + carry
        quot[e - 1] = b
        carry = b.scale(root)
    rem = coeffs[0] + carry
    qterms = {}
    for e, qp in enumerate(quot):
        for mono, c in qp.terms.items():
            new = list(mono)
            new[slot] = e
            qterms[tuple(new)] = c
    return Polynomial(qterms, p.form), rem
