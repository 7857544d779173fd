import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seamtqft.poly import (
    ALPHA_VARS,
    E_VARS,
    NEG_INF,
    BareissResult,
    GaussInt,
    LocPoly,
    NonDivisible,
    NotHomogeneous,
    NotSymmetric,
    Poly,
    VariableSetMismatch,
    alpha1,
    alpha2,
    alpha_diff,
    bareiss,
    discriminant,
    divides,
    e1,
    e2,
    elementary_to_roots,
    exact_divide,
    homogeneous_degree,
    is_symmetric,
    omega_power,
    swap_roots,
    to_elementary,
)


def rand_poly(rng, vars=ALPHA_VARS, max_exp=3, n_terms=4, gauss=False):
    terms = {}
    for _ in range(rng.randrange(n_terms + 1)):
        exps = tuple(rng.randrange(max_exp + 1) for _ in vars)
        c = rng.randrange(-5, 6)
        if gauss:
            c = GaussInt(c, rng.randrange(-5, 6))
        terms[exps] = c
    return Poly(vars, terms, gauss)


def test_basic_ring_ops():
    d = alpha_diff()
    sq = d * d
    assert sq == Poly(ALPHA_VARS, {(2, 0): 1, (1, 1): -2, (0, 2): 1})
    assert e1() * Poly.zero(E_VARS) == 0
    assert (e1() + e2()) - e1() == e2()


def test_omega_square_is_minus_one():
    w = Poly.const(E_VARS, GaussInt(0, 1), gauss=True)
    assert w * w == Poly.const(E_VARS, -1, gauss=True)
    assert omega_power(-1) == GaussInt(0, -1)
    assert omega_power(-2) == GaussInt(-1, 0)


def test_variable_set_mismatch():
    with pytest.raises(VariableSetMismatch):
        e1() + alpha1()
    with pytest.raises(VariableSetMismatch):
        e1() * e1(gauss=True)


def test_exact_divide_examples():
    a1, a2 = alpha1(), alpha2()
    assert exact_divide(a2 * a2 - a1 * a1, a2 - a1) == a1 + a2
    assert exact_divide((a1 - a2) ** 2, a2 - a1) == a2 - a1
    with pytest.raises(NonDivisible) as exc:
        exact_divide(a1, a2 - a1)
    assert exc.value.remainder is not None


def test_exact_divide_integer_coefficients():
    # divisibility over Z, not just over Q
    with pytest.raises(NonDivisible):
        exact_divide(alpha1(), 2 * alpha1())
    assert exact_divide(6 * alpha1(), 2 * alpha1()) == 3


def test_exact_divide_roundtrip_fuzz():
    rng = random.Random(7)
    for _ in range(200):
        p = rand_poly(rng)
        q = rand_poly(rng)
        if q.is_zero():
            continue
        assert exact_divide(p * q, q) == p


def test_exact_divide_roundtrip_gauss():
    rng = random.Random(11)
    for _ in range(100):
        p = rand_poly(rng, gauss=True)
        q = rand_poly(rng, gauss=True)
        if q.is_zero():
            continue
        assert exact_divide(p * q, q) == p


def test_to_elementary_examples():
    a1, a2 = alpha1(), alpha2()
    assert to_elementary(a1 + a2) == e1()
    assert to_elementary((a1 - a2) ** 2) == discriminant()
    with pytest.raises(NotSymmetric):
        to_elementary(a1)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(-4, 4), st.integers(-4, 4))
@settings(max_examples=60, deadline=None)
def test_to_elementary_roundtrip(i, j, c1, c2):
    a1, a2 = alpha1(), alpha2()
    p = c1 * (a1 ** i * a2 ** i) + c2 * (a1 ** j * a2 ** j) * (a1 + a2)
    assert is_symmetric(p)
    assert elementary_to_roots(to_elementary(p)) == p


def test_homogeneous_degree():
    assert homogeneous_degree(discriminant()) == 4
    assert homogeneous_degree(Poly.zero(E_VARS)) == NEG_INF
    with pytest.raises(NotHomogeneous):
        homogeneous_degree(e1() + e2())
    # alpha grading: both variables in degree 2
    assert homogeneous_degree(alpha1() ** 3) == 6


def test_bareiss_examples():
    zero = Poly.zero(E_VARS)
    one = Poly.const(E_VARS, 1)
    m = [[zero, one], [one, e1()]]
    res = bareiss(m)
    assert res.rank == 2
    assert res.det == Poly.const(E_VARS, -1)

    z3 = [[zero] * 3 for _ in range(3)]
    assert bareiss(z3) == BareissResult(0, zero)


def test_bareiss_rank_matches_specialization():
    from fractions import Fraction

    rng = random.Random(23)
    for _ in range(25):
        n = rng.randrange(1, 4)
        m = rng.randrange(1, 4)
        mat = [[rand_poly(rng, max_exp=2, n_terms=3) for _ in range(m)] for _ in range(n)]
        sym = bareiss(mat).rank
        best = 0
        for _ in range(3):
            while True:
                v1, v2 = rng.randrange(-9, 10), rng.randrange(-9, 10)
                if v1 != v2:
                    break
            vals = {"a1": Fraction(v1), "a2": Fraction(v2)}
            rows = [[entry.specialize(vals) for entry in row] for row in mat]
            best = max(best, _fraction_rank(rows))
        assert best <= sym
        assert best == sym or _generic_retry(mat, sym, rng)


def _fraction_rank(rows):
    rows = [r[:] for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _generic_retry(mat, sym, rng):
    # unlucky specialization points happen; a wider retry must reach the rank
    from fractions import Fraction

    for _ in range(20):
        v1, v2 = rng.randrange(-50, 51), rng.randrange(-50, 51)
        if v1 == v2:
            continue
        vals = {"a1": Fraction(v1), "a2": Fraction(v2)}
        rows = [[entry.specialize(vals) for entry in row] for row in mat]
        if _fraction_rank(rows) == sym:
            return True
    return False


def test_bareiss_det_multiplicativity():
    rng = random.Random(31)
    for _ in range(10):
        a = [[rand_poly(rng, vars=E_VARS, max_exp=1, n_terms=2) for _ in range(2)] for _ in range(2)]
        b = [[rand_poly(rng, vars=E_VARS, max_exp=1, n_terms=2) for _ in range(2)] for _ in range(2)]
        ab = [
            [sum((a[i][k] * b[k][j] for k in range(2)), Poly.zero(E_VARS)) for j in range(2)]
            for i in range(2)
        ]
        assert bareiss(ab).det == bareiss(a).det * bareiss(b).det


def test_locpoly_normalization_idempotent():
    d = alpha_diff()
    v = LocPoly((alpha2() ** 2 - alpha1() ** 2) * d, d, 3)
    assert v.power == 1 and v.num == alpha1() + alpha2()
    again = LocPoly(v.num, v.base, v.power)
    assert again == v
    assert LocPoly(Poly.zero(ALPHA_VARS), d, 5).power == 0


def test_locpoly_arithmetic():
    d = alpha_diff()
    e_one = LocPoly(-alpha1(), d, 1)   # (X - a1)/(a2 - a1) constant part
    e_two = LocPoly(alpha2(), d, 1)
    assert e_one + e_two == LocPoly(Poly.const(ALPHA_VARS, 1), d, 0)
    half = LocPoly(Poly.const(ALPHA_VARS, 1), d, 1)
    assert half * d == 1
    assert (half - half).is_zero()


def test_locpoly_negative_power_multiplies_in():
    d = alpha_diff()
    v = LocPoly(Poly.const(ALPHA_VARS, 1), d, -2)
    assert v.power == 0
    assert v.num == d * d


def test_render_canonical():
    p = 2 * e1() * e1() - 8 * e2()
    assert p.render() == "2*E1^2 - 8*E2"
    q = Poly(E_VARS, {(1, 0): GaussInt(-1, 1)}, gauss=True)
    assert q.render() == "(-1 + w)*E1"
    assert Poly.zero(E_VARS).render() == "0"
    assert (-e1()).render() == "-E1"


def test_json_terms_roundtrip():
    p = 2 * e1() * e1() - 8 * e2()
    assert p.json_terms() == [[[2, 0], 2], [[0, 1], -8]]
    q = Poly(E_VARS, {(0, 1): GaussInt(0, 2)}, gauss=True)
    assert q.json_terms() == [[[0, 1], [0, 2]]]


def test_swap_roots_and_symmetry():
    p = alpha1() ** 2 * alpha2()
    assert swap_roots(p) == alpha2() ** 2 * alpha1()
    assert is_symmetric(p + swap_roots(p))
    assert divides(alpha_diff(), alpha2() ** 3 - alpha1() ** 3)
