"""Exact sparse polynomial arithmetic for the evaluation rings.

Polynomials live in Z[E1,E2] (symmetric variables, deg E1 = 2, deg E2 = 4)
or Z[a1,a2] (root variables, both of degree 2), optionally with Gaussian
integer coefficients (w adjoined, w^2 = -1, deg w = 0).  Terms are stored
sparsely as a map from exponent tuples to nonzero coefficients.

LocPoly adjoins the inverse of one fixed base element per ring: the
discriminant E1^2 - 4*E2 over the symmetric variables, or the root
difference a2 - a1 over the root variables.  A LocPoly is num / base^power,
normalized so the base does not divide the numerator while power > 0.

Division is plain multivariate exact division with remainder detection
(all divisors used here are powers of a single binomial or of the
discriminant, so no Groebner machinery is needed).  Matrix rank and
determinant use fraction-free Bareiss elimination, valid over any of these
integral domains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

E_VARS = ("E1", "E2")
ALPHA_VARS = ("a1", "a2")

VAR_DEGREES = {"E1": 2, "E2": 4, "a1": 2, "a2": 2}

NEG_INF = float("-inf")  # degree of the zero polynomial


class PolyError(Exception):
    pass


class VariableSetMismatch(PolyError):
    pass


class NonDivisible(PolyError):
    """Exact division failed; carries the offending remainder as witness."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class NotSymmetric(PolyError):
    pass


class NotHomogeneous(PolyError):
    pass


class GaussInt:
    """Gaussian integer re + im*w with w^2 = -1."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re
        self.im = im

    @staticmethod
    def coerce(value):
        if isinstance(value, GaussInt):
            return value
        if isinstance(value, int):
            return GaussInt(value, 0)
        raise TypeError(f"cannot coerce {value!r} to GaussInt")

    def __add__(self, other):
        other = GaussInt.coerce(other)
        return GaussInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussInt.coerce(other)
        return GaussInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussInt.coerce(other) - self

    def __mul__(self, other):
        other = GaussInt.coerce(other)
        return GaussInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, int):
            other = GaussInt(other, 0)
        if not isinstance(other, GaussInt):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conjugate(self):
        return GaussInt(self.re, -self.im)

    def exact_div(self, other):
        """Return self/other in Z[w], or None when not divisible."""
        other = GaussInt.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        num = self * other.conjugate()
        if num.re % norm or num.im % norm:
            return None
        return GaussInt(num.re // norm, num.im // norm)

    def __repr__(self):
        return f"GaussInt({self.re}, {self.im})"

    def render(self, parens_if_mixed=True):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            if im == 1:
                return "w"
            if im == -1:
                return "-w"
            return f"{im}*w"
        w_part = "w" if im == 1 else ("-w" if im == -1 else f"{im}*w")
        joined = f"{re} + {w_part}" if im > 0 else f"{re} - {w_part.lstrip('-')}"
        return f"({joined})" if parens_if_mixed else joined


def omega_power(k):
    """w^k as a GaussInt, any integer k (w^-1 = -w)."""
    return (GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1))[k % 4]


def _zero_coeff(gauss):
    return GaussInt(0, 0) if gauss else 0


def _coerce_coeff(value, gauss):
    if gauss:
        return GaussInt.coerce(value)
    if isinstance(value, GaussInt):
        if value.im != 0:
            raise VariableSetMismatch("Gaussian coefficient in a plain-integer ring")
        return value.re
    return value


class Poly:
    """Sparse polynomial over a fixed variable tuple.

    terms maps exponent tuples (one slot per variable) to nonzero
    coefficients.  gauss selects Gaussian-integer coefficients.
    """

    __slots__ = ("vars", "gauss", "terms")

    def __init__(self, vars, terms=None, gauss=False):
        self.vars = tuple(vars)
        self.gauss = bool(gauss)
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = _coerce_coeff(coeff, self.gauss)
                if coeff == 0:
                    continue
                exps = tuple(exps)
                if len(exps) != len(self.vars):
                    raise PolyError("exponent tuple has wrong arity")
                clean[exps] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(vars, gauss=False):
        return Poly(vars, {}, gauss)

    @staticmethod
    def const(vars, value, gauss=False):
        return Poly(vars, {(0,) * len(vars): value}, gauss)

    @staticmethod
    def variable(name, vars, gauss=False):
        idx = tuple(vars).index(name)
        exps = tuple(1 if i == idx else 0 for i in range(len(vars)))
        one = GaussInt(1, 0) if gauss else 1
        return Poly(vars, {exps: one}, gauss)

    # -- ring structure ----------------------------------------------------

    def _check_compatible(self, other):
        if self.vars != other.vars or self.gauss != other.gauss:
            raise VariableSetMismatch(
                f"operands over ({self.vars}, gauss={self.gauss}) vs "
                f"({other.vars}, gauss={other.gauss})"
            )

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check_compatible(other)
            return other
        if isinstance(other, (int, GaussInt)):
            return Poly.const(self.vars, other, self.gauss)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps, _zero_coeff(self.gauss)) + coeff
            if acc == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = acc
        return Poly(self.vars, terms, self.gauss)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()}, self.gauss)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        zero = _zero_coeff(self.gauss)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(exps, zero) + c1 * c2
                if acc == 0:
                    terms.pop(exps, None)
                else:
                    terms[exps] = acc
        return Poly(self.vars, terms, self.gauss)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise PolyError("polynomial powers must be nonnegative integers")
        result = Poly.const(self.vars, 1, self.gauss)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, GaussInt)):
            other = Poly.const(self.vars, other, self.gauss)
        if not isinstance(other, Poly):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.gauss == other.gauss
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def var_degrees(self):
        return tuple(VAR_DEGREES[v] for v in self.vars)

    def term_degree(self, exps):
        return sum(e * d for e, d in zip(exps, self.var_degrees()))

    def _sort_key(self, exps):
        return (self.term_degree(exps), exps)

    def leading(self):
        """Leading (exponent, coefficient) in graded lexicographic order."""
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        exps = max(self.terms, key=self._sort_key)
        return exps, self.terms[exps]

    def to_gauss(self):
        if self.gauss:
            return self
        return Poly(self.vars, {e: GaussInt(c, 0) for e, c in self.terms.items()}, True)

    def substitute(self, images, vars, gauss=False):
        """Map each variable to a Poly over `vars`; returns the image."""
        result = Poly.zero(vars, gauss)
        for exps, coeff in self.terms.items():
            term = Poly.const(vars, coeff if gauss or not isinstance(coeff, GaussInt) else coeff, gauss)
            for name, exp in zip(self.vars, exps):
                if exp:
                    term = term * (images[name] ** exp)
            result = result + term
        return result

    def specialize(self, values):
        """Evaluate at numeric values (Fraction per variable).

        Returns a Fraction, or an (re, im) Fraction pair for Gaussian
        coefficients.
        """
        if self.gauss:
            re = Fraction(0)
            im = Fraction(0)
            for exps, coeff in self.terms.items():
                mono = Fraction(1)
                for name, exp in zip(self.vars, exps):
                    mono *= values[name] ** exp
                re += coeff.re * mono
                im += coeff.im * mono
            return (re, im)
        acc = Fraction(0)
        for exps, coeff in self.terms.items():
            mono = Fraction(1)
            for name, exp in zip(self.vars, exps):
                mono *= values[name] ** exp
            acc += coeff * mono
        return acc

    # -- rendering ---------------------------------------------------------

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self._sort_key(kv[0]), reverse=True)

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self._sorted_terms():
            mono = "*".join(
                name if exp == 1 else f"{name}^{exp}"
                for name, exp in zip(self.vars, exps)
                if exp
            )
            if isinstance(coeff, GaussInt):
                if coeff.im == 0:
                    c, mixed = coeff.re, False
                else:
                    c, mixed = coeff, True
            else:
                c, mixed = coeff, False
            if mixed:
                text = coeff.render()
                body = f"{text}*{mono}" if mono else text
                parts.append(("+", body))
            else:
                sign = "+" if c >= 0 else "-"
                mag = abs(c)
                if not mono:
                    body = str(mag)
                elif mag == 1:
                    body = mono
                else:
                    body = f"{mag}*{mono}"
                parts.append((sign, body))
        sign0, body0 = parts[0]
        out = body0 if sign0 == "+" else f"-{body0}"
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly[{','.join(self.vars)}]({self.render()})"

    def json_terms(self):
        """Canonical JSON form: list of [exponent-vector, coefficient]."""
        out = []
        for exps, coeff in self._sorted_terms():
            if isinstance(coeff, GaussInt):
                out.append([list(exps), [coeff.re, coeff.im]])
            else:
                out.append([list(exps), coeff])
        return out


# -- named elements ---------------------------------------------------------


def e1(gauss=False):
    return Poly.variable("E1", E_VARS, gauss)


def e2(gauss=False):
    return Poly.variable("E2", E_VARS, gauss)


def discriminant(gauss=False):
    p = e1(gauss)
    return p * p - 4 * e2(gauss)


def alpha1(gauss=False):
    return Poly.variable("a1", ALPHA_VARS, gauss)


def alpha2(gauss=False):
    return Poly.variable("a2", ALPHA_VARS, gauss)


def alpha_diff(gauss=False):
    """The canonical localization base a2 - a1 over the root variables."""
    return alpha2(gauss) - alpha1(gauss)


# -- operations -------------------------------------------------------------


def exact_divide(p, q):
    """Return r with p = q*r, or raise NonDivisible with remainder witness.

    Greedy leading-term division in graded lex order; over these integral
    domains p is divisible by q iff the loop ends with zero remainder.
    """
    p._check_compatible(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    quotient = Poly.zero(p.vars, p.gauss)
    rem = p
    q_exps, q_coeff = q.leading()
    while not rem.is_zero():
        r_exps, r_coeff = rem.leading()
        exps = tuple(a - b for a, b in zip(r_exps, q_exps))
        if any(e < 0 for e in exps):
            raise NonDivisible("leading monomial not divisible", remainder=rem)
        if p.gauss:
            c = r_coeff.exact_div(q_coeff)
            if c is None:
                raise NonDivisible("leading coefficient not divisible", remainder=rem)
        else:
            if r_coeff % q_coeff:
                raise NonDivisible("leading coefficient not divisible", remainder=rem)
            c = r_coeff // q_coeff
        step = Poly(p.vars, {exps: c}, p.gauss)
        quotient = quotient + step
        rem = rem - step * q
    return quotient


def divides(q, p):
    try:
        exact_divide(p, q)
        return True
    except NonDivisible:
        return False


def swap_roots(p):
    """The a1 <-> a2 image of a root-variable polynomial."""
    if p.vars != ALPHA_VARS:
        raise VariableSetMismatch("swap_roots needs root variables")
    return Poly(p.vars, {(j, i): c for (i, j), c in p.terms.items()}, p.gauss)


def is_symmetric(p):
    return p.vars == ALPHA_VARS and swap_roots(p) == p


def to_elementary(p):
    """Rewrite a symmetric root polynomial in E1 = a1+a2, E2 = a1*a2.

    Raises NotSymmetric when p is not fixed by the root swap.  The round
    trip through elementary_to_roots is the identity.
    """
    if not is_symmetric(p):
        raise NotSymmetric("polynomial is not symmetric in a1, a2")
    gauss = p.gauss
    result = Poly.zero(E_VARS, gauss)
    sym1 = alpha1(gauss) + alpha2(gauss)
    sym2 = alpha1(gauss) * alpha2(gauss)
    rem = p
    while not rem.is_zero():
        (i, j), coeff = rem.leading()
        if i < j:
            raise NotSymmetric("leading term violates symmetry")  # unreachable for symmetric input
        result = result + Poly(E_VARS, {(i - j, j): coeff}, gauss)
        rem = rem - coeff * (sym1 ** (i - j)) * (sym2 ** j)
    return result


def elementary_to_roots(p):
    """Substitute E1 -> a1+a2, E2 -> a1*a2."""
    if p.vars != E_VARS:
        raise VariableSetMismatch("elementary_to_roots needs symmetric variables")
    images = {"E1": alpha1(p.gauss) + alpha2(p.gauss), "E2": alpha1(p.gauss) * alpha2(p.gauss)}
    return p.substitute(images, ALPHA_VARS, p.gauss)


def homogeneous_degree(p):
    """Common graded degree of all terms; NEG_INF for zero; NotHomogeneous otherwise."""
    if p.is_zero():
        return NEG_INF
    degs = {p.term_degree(exps) for exps in p.terms}
    if len(degs) > 1:
        raise NotHomogeneous(f"mixed degrees {sorted(degs)}")
    return degs.pop()


@dataclass
class BareissResult:
    rank: int
    det: Poly | None  # None for non-square input; zero Poly when singular


def bareiss(matrix):
    """Fraction-free Gaussian elimination over an integral domain.

    Returns the rank over the fraction field, and the exact determinant for
    square inputs.  Entries must be Poly over one common variable set.
    """
    rows = [list(r) for r in matrix]
    if not rows:
        return BareissResult(0, None)
    n, m = len(rows), len(rows[0])
    if any(len(r) != m for r in rows):
        raise PolyError("ragged matrix")
    sample = rows[0][0]
    vars, gauss = sample.vars, sample.gauss
    one = Poly.const(vars, 1, gauss)
    prev = one
    sign = 1
    r = 0
    for c in range(m):
        if r == n:
            break
        pivot_row = next((i for i in range(r, n) if not rows[i][c].is_zero()), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            sign = -sign
        pivot = rows[r][c]
        for i in range(r + 1, n):
            for j in range(c + 1, m):
                rows[i][j] = exact_divide(pivot * rows[i][j] - rows[i][c] * rows[r][j], prev)
            rows[i][c] = Poly.zero(vars, gauss)
        prev = pivot
        r += 1
    det = None
    if n == m:
        det = sign * prev if r == n else Poly.zero(vars, gauss)
    return BareissResult(r, det)


class LocPoly:
    """num / base^power with the base a fixed ring element.

    Normalized so that base does not divide num while power > 0; the
    representation is then unique and equality is field-by-field.
    """

    __slots__ = ("num", "base", "power")

    def __init__(self, num, base, power=0):
        if power < 0:
            num = num * base ** (-power)
            power = 0
        while power > 0 and not num.is_zero():
            try:
                num = exact_divide(num, base)
            except NonDivisible:
                break
            power -= 1
        if num.is_zero():
            power = 0
        self.num = num
        self.base = base
        self.power = power

    def _check(self, other):
        if self.base != other.base:
            raise VariableSetMismatch("localizations at different base elements")

    def _coerce(self, other):
        if isinstance(other, LocPoly):
            self._check(other)
            return other
        if isinstance(other, Poly):
            return LocPoly(other, self.base, 0)
        if isinstance(other, (int, GaussInt)):
            return LocPoly(Poly.const(self.num.vars, other, self.num.gauss), self.base, 0)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        k = max(self.power, other.power)
        num = (
            self.num * self.base ** (k - self.power)
            + other.num * self.base ** (k - other.power)
        )
        return LocPoly(num, self.base, k)

    __radd__ = __add__

    def __neg__(self):
        return LocPoly(-self.num, self.base, self.power)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return LocPoly(self.num * other.num, self.base, self.power + other.power)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.power == other.power

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return self.num.is_zero()

    def as_poly(self):
        """The underlying Poly; raises NonDivisible when the power is positive."""
        if self.power:
            raise NonDivisible("value has a denominator", remainder=self.num)
        return self.num

    def render(self):
        if self.power == 0:
            return self.num.render()
        return f"({self.num.render()}) / ({self.base.render()})^{self.power}"

    def __repr__(self):
        return f"LocPoly({self.render()})"


def loc_zero(base):
    return LocPoly(Poly.zero(base.vars, base.gauss), base, 0)


def loc_one(base):
    return LocPoly(Poly.const(base.vars, 1, base.gauss), base, 0)
