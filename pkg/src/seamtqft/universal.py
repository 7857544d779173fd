"""State spaces of marked circles via the universal construction.

A spanning set of cobordisms from the empty meom into a boundary yields a
Gram matrix of closed-surface evaluations; ranks are taken over the
fraction field by fraction-free elimination, and the graded rank reads off
the degree multiset of a greedy maximal independent subset chosen in
ascending degree.  Induced maps of cobordisms are solved exactly against a
nonsingular basis Gram matrix; entries live in the fraction field and are
flagged when they happen to be polynomial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import cobordism as cb
from .evaluation import evaluate
from .poly import E_VARS, NonDivisible, Poly, bareiss, exact_divide


class UniversalError(Exception):
    pass


class SingularGram(UniversalError):
    pass


class RatPoly:
    """Element of the fraction field of the symmetric-variable ring.

    Reduction only happens through exact division by the denominator;
    equality cross-multiplies, so no gcd machinery is needed.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = Poly.const(num.vars, 1, num.gauss)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = Poly.const(num.vars, 1, num.gauss)
        else:
            try:
                num = exact_divide(num, den)
                den = Poly.const(num.vars, 1, num.gauss)
            except NonDivisible:
                pass
        self.num = num
        self.den = den

    @staticmethod
    def coerce(other, like):
        if isinstance(other, RatPoly):
            return other
        if isinstance(other, Poly):
            return RatPoly(other)
        if isinstance(other, int):
            return RatPoly(Poly.const(like.num.vars, other, like.num.gauss))
        return None

    def is_polynomial(self):
        return self.den == Poly.const(self.num.vars, 1, self.num.gauss)

    def __add__(self, other):
        other = RatPoly.coerce(other, self)
        if other is None:
            return NotImplemented
        return RatPoly(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-self.num, self.den)

    def __sub__(self, other):
        other = RatPoly.coerce(other, self)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = RatPoly.coerce(other, self)
        if other is None:
            return NotImplemented
        return RatPoly(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = RatPoly.coerce(other, self)
        if other is None:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def is_zero(self):
        return self.num.is_zero()

    def render(self):
        if self.is_polynomial():
            return self.num.render()
        return f"({self.num.render()}) / ({self.den.render()})"

    def __repr__(self):
        return f"RatPoly({self.render()})"


@dataclass(frozen=True)
class GradedRank:
    degrees: tuple[int, ...]  # degree multiset of a maximal independent subset

    @property
    def rank(self):
        return len(self.degrees)

    def q_string(self):
        if not self.degrees:
            return "0"
        counts = {}
        for d in self.degrees:
            counts[d] = counts.get(d, 0) + 1
        parts = []
        for d in sorted(counts):
            c = counts[d]
            if d == 0:
                parts.append(str(c))
            else:
                q = "q" if d == 1 else f"q^{d}"
                parts.append(q if c == 1 else f"{c}*{q}")
        return " + ".join(parts)


@dataclass
class StateSpace:
    boundary: cb.Meom
    spanning: list
    gram: list  # matrix of Poly over E1, E2
    mode: str  # "plain" | "omega"


def pairing(w1, w2, mode="plain"):
    """<[w1],[w2]> = evaluation of mirror(w1) glued onto w2."""
    closed = cb.close(cb.compose(cb.mirror(w1), w2))
    return evaluate(closed, omega=(mode == "omega")).value


def gram(boundary, spanning, mode="plain"):
    for w in spanning:
        if w.bottom != cb.EMPTY:
            raise UniversalError("spanning cobordisms must start at the empty meom")
        if w.top != boundary:
            raise UniversalError(
                f"spanning cobordism bounds {w.top}, expected {boundary}"
            )
    n = len(spanning)
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = pairing(spanning[i], spanning[j], mode)
            rows[i][j] = value
            if j > i:
                rows[j][i] = pairing(spanning[j], spanning[i], mode)
    return rows


def state_space(boundary, spanning, mode="plain"):
    return StateSpace(boundary, list(spanning), gram(boundary, spanning, mode), mode)


def rank(space_or_matrix):
    matrix = space_or_matrix.gram if isinstance(space_or_matrix, StateSpace) else space_or_matrix
    if not matrix:
        return 0
    return bareiss(matrix).rank


def gram_det(space_or_matrix):
    matrix = space_or_matrix.gram if isinstance(space_or_matrix, StateSpace) else space_or_matrix
    return bareiss(matrix).det


def rank_by_specialization(matrix, seed=0, trials=3):
    """Randomized rational-specialization rank (fast path cross-check).

    Specializes the roots to distinct rationals with nonzero discriminant;
    the result is a lower bound that reaches the symbolic rank at generic
    points, so the max over trials is reported.
    """
    if not matrix:
        return 0
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        while True:
            a1, a2 = rng.randrange(-40, 41), rng.randrange(-40, 41)
            if a1 != a2:
                break
        values = {"E1": Fraction(a1 + a2), "E2": Fraction(a1 * a2)}
        rows = [[entry.specialize(values) for entry in row] for row in matrix]
        if matrix[0][0].gauss:
            best = max(best, _gauss_fraction_rank(rows))
        else:
            best = max(best, _fraction_rank(rows))
    return best


def _fraction_rank(rows):
    rows = [r[:] for r in rows]
    rank_ = 0
    for c in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(rank_, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank_], rows[piv] = rows[piv], rows[rank_]
        for i in range(len(rows)):
            if i != rank_ and rows[i][c] != 0:
                f = rows[i][c] / rows[rank_][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank_])]
        rank_ += 1
    return rank_


def _gauss_fraction_rank(rows):
    def sub(a, b):
        return (a[0] - b[0], a[1] - b[1])

    def mul(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def div(a, b):
        n = b[0] * b[0] + b[1] * b[1]
        c = mul(a, (b[0], -b[1]))
        return (c[0] / n, c[1] / n)

    rows = [r[:] for r in rows]
    rank_ = 0
    for c in range(len(rows[0]) if rows else 0):
        piv = next(
            (i for i in range(rank_, len(rows)) if rows[i][c] != (0, 0)), None
        )
        if piv is None:
            continue
        rows[rank_], rows[piv] = rows[piv], rows[rank_]
        for i in range(len(rows)):
            if i != rank_ and rows[i][c] != (0, 0):
                f = div(rows[i][c], rows[rank_][c])
                rows[i] = [sub(a, mul(f, b)) for a, b in zip(rows[i], rows[rank_])]
        rank_ += 1
    return rank_


def graded_rank(space):
    """Degrees of a greedy maximal independent subset, ascending by degree
    (ties broken by input order).  A class is independent of the chosen
    ones when adding its Gram row increases the row rank."""
    degrees = [w.degree() for w in space.spanning]
    order = sorted(range(len(degrees)), key=lambda i: (degrees[i], i))
    chosen = []
    chosen_degrees = []
    current = 0
    for i in order:
        rows = [space.gram[j] for j in chosen + [i]]
        if bareiss(rows).rank == current + 1:
            chosen.append(i)
            chosen_degrees.append(degrees[i])
            current += 1
    return GradedRank(tuple(sorted(chosen_degrees)))


def standard_spanning(boundary):
    """The 2^k cup forests (at most one dot each) under k unmarked circles."""
    k = len(boundary.circles)
    for c in boundary.circles:
        if c.marks:
            raise UniversalError("standard spanning needs unmarked circles")
    out = []
    for bits in range(1 << k):
        w = cb.empty_cobordism()
        for c in range(k):
            parent = boundary.circles[c].parent
            piece = cb.cup(dots=(bits >> c) & 1)
            w = cb.tensor_nested(w, piece, top_parent=parent)
        # tensor_nested appends circles in order, so parents line up
        if w.top != boundary:
            raise UniversalError("could not rebuild the boundary forest")
        out.append(w)
    return out


def state_vector(w, probes, mode="plain"):
    """Evaluations of w closed off against each probe (probes map the
    boundary back to the empty meom)."""
    out = []
    for probe in probes:
        closed = cb.close(cb.compose(probe, w))
        out.append(evaluate(closed, omega=(mode == "omega")).value)
    return out


def _solve_exact(matrix, vector):
    """Cramer solve of matrix * x = vector over the fraction field."""
    n = len(matrix)
    det = bareiss(matrix).det
    if det is None or det.is_zero():
        raise SingularGram("basis Gram matrix is singular over the fraction field")
    xs = []
    for i in range(n):
        cols = [
            [vector[r] if c == i else matrix[r][c] for c in range(n)]
            for r in range(n)
        ]
        xs.append(RatPoly(bareiss(cols).det, det))
    return xs


def induced_matrix(w, basis_from, basis_to, mode="plain"):
    """Matrix of the induced state-space map in the given bases.

    Column j holds the coordinates of [w composed onto basis_from[j]] in
    basis_to, solved exactly against the Gram matrix of basis_to.
    """
    for b in basis_from:
        if b.top != w.bottom:
            raise UniversalError("basis_from must bound the source of w")
    for b in basis_to:
        if b.top != w.top:
            raise UniversalError("basis_to must bound the target of w")
    gram_to = gram(w.top, basis_to, mode)
    probes = [cb.mirror(b) for b in basis_to]
    cols = []
    for b in basis_from:
        image = cb.compose(w, b)
        vec = state_vector(image, probes, mode)
        cols.append(_solve_exact(gram_to, vec))
    return [[cols[j][i] for j in range(len(basis_from))] for i in range(len(basis_to))]


def matrix_is_polynomial(matrix):
    return all(entry.is_polynomial() for row in matrix for entry in row)


def mat_mul(a, b):
    rows, mid, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(mid):
                term = a[i][k] * b[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def mat_eq(a, b):
    if len(a) != len(b) or any(len(r) != len(s) for r, s in zip(a, b)):
        return False
    return all(x == y for row_a, row_b in zip(a, b) for x, y in zip(row_a, row_b))


def scalar_matrix(matrix, scalar):
    return [[entry * scalar for entry in row] for row in matrix]


def identity_matrix(n, vars=E_VARS, gauss=False):
    one = Poly.const(vars, 1, gauss)
    zero = Poly.zero(vars, gauss)
    return [[RatPoly(one if i == j else zero) for j in range(n)] for i in range(n)]
