import pytest

from seamtqft import cobordism as cb
from seamtqft.poly import E_VARS, GaussInt, Poly, discriminant, e1, e2
from seamtqft.universal import (
    GradedRank,
    RatPoly,
    SingularGram,
    gram,
    gram_det,
    graded_rank,
    identity_matrix,
    induced_matrix,
    mat_eq,
    mat_mul,
    matrix_is_polynomial,
    pairing,
    rank,
    rank_by_specialization,
    scalar_matrix,
    standard_spanning,
    state_space,
    state_vector,
)


def const(c, gauss=False):
    return Poly.const(E_VARS, c, gauss)


def circle_basis():
    return [cb.cup(), cb.cup(dots=1)]


def pm_basis():
    return [cb.seamed_cup(), cb.seamed_cup(dotted=True)]


def six_elements():
    u, du = cb.seamed_cup(), cb.seamed_cup(dotted=True)
    return [
        cb.tensor(u, u),
        cb.tensor(du, u),
        cb.tensor(u, du),
        cb.twisted_tube(),
        cb.tensor(du, du),
        cb.twisted_tube(dots=1),
    ]


def s4_elements():
    return [
        cb.chord_disk("+-+-", [(0, 1), (2, 3)]),
        cb.chord_disk("+-+-", [(1, 2), (3, 0)]),
        cb.chord_disk("+-+-", [(0, 1), (2, 3)], dots={1: 1}),
        cb.chord_disk("+-+-", [(1, 2), (3, 0)], dots={0: 1}),
    ]


def test_gram_circle():
    m = gram(cb.CIRCLE, circle_basis())
    assert m[0][0] == 0 and m[0][1] == 1 and m[1][0] == 1 and m[1][1] == e1()


def test_gram_six_elements_golden():
    E1, E2 = e1(), e2()
    expected = [
        [0, 0, 0, 0, 1, 1],
        [0, 0, 1, 1, E1, E1],
        [0, 1, 0, 1, E1, E1],
        [0, 1, 1, -2, E1, -E1],
        [1, E1, E1, E1, E1 * E1, E1 * E1 - E2],
        [1, E1, E1, -E1, E1 * E1 - E2, -(E1 * E1) + 2 * E2],
    ]
    boundary = cb.meom("+-", "+-")
    m = gram(boundary, six_elements())
    for i in range(6):
        for j in range(6):
            assert m[i][j] == expected[i][j], (i, j)
    det = gram_det(m)
    assert det == 4 * discriminant()
    assert det.render() == "4*E1^2 - 16*E2"


def test_gram_s4_golden():
    E1 = e1()
    expected = [
        [0, 0, 1, -1],
        [0, 0, 1, 1],
        [1, 1, E1, 0],
        [-1, 1, 0, E1],
    ]
    m = gram(cb.meom("+-+-"), s4_elements())
    for i in range(4):
        for j in range(4):
            assert m[i][j] == expected[i][j], (i, j)
    assert gram_det(m) == 4


def test_gram_symmetry_and_entry_degrees():
    from seamtqft.poly import homogeneous_degree

    elems = six_elements()
    m = gram(cb.meom("+-", "+-"), elems)
    for i in range(6):
        for j in range(6):
            assert m[i][j] == m[j][i]
            if not m[i][j].is_zero():
                assert homogeneous_degree(m[i][j]) == elems[i].degree() + elems[j].degree()


def test_table_of_ranks_and_graded_ranks():
    # single unmarked circle
    sp = state_space(cb.CIRCLE, standard_spanning(cb.CIRCLE))
    assert rank(sp) == 2
    assert graded_rank(sp) == GradedRank((-1, 1))
    assert graded_rank(sp).q_string() == "q^-1 + q"

    # two-point balanced circle
    sp = state_space(cb.CIRCLE_PM, pm_basis())
    assert rank(sp) == 2
    assert graded_rank(sp) == GradedRank((-1, 1))

    # ++-- : one valid non-crossing pairing, plain and dotted
    elems = [
        cb.chord_disk("++--", [(0, 3), (1, 2)]),
        cb.chord_disk("++--", [(0, 3), (1, 2)], dots={0: 1}),
    ]
    sp = state_space(cb.meom("++--"), elems)
    assert rank(sp) == 2
    assert graded_rank(sp) == GradedRank((-1, 1))

    # +-+- : rank four
    sp = state_space(cb.meom("+-+-"), s4_elements())
    assert rank(sp) == 4
    assert graded_rank(sp) == GradedRank((-1, -1, 1, 1))
    assert graded_rank(sp).q_string() == "2*q^-1 + 2*q"


def test_six_element_graded_rank():
    sp = state_space(cb.meom("+-", "+-"), six_elements())
    assert rank(sp) == 6  # strictly exceeds 2*2: the functor is not monoidal
    assert graded_rank(sp) == GradedRank((-2, 0, 0, 0, 2, 2))
    assert graded_rank(sp).q_string() == "q^-2 + 3 + 2*q^2"


def test_rank_by_specialization_agrees_on_goldens():
    cases = [
        gram(cb.CIRCLE, circle_basis()),
        gram(cb.meom("+-", "+-"), six_elements()),
        gram(cb.meom("+-+-"), s4_elements()),
        gram(cb.meom("+-+-"), s4_elements(), mode="omega"),
    ]
    for m in cases:
        assert rank_by_specialization(m, seed=11) == rank(m)


def test_standard_spanning_counts_and_ranks():
    assert len(standard_spanning(cb.EMPTY)) == 1
    sp = state_space(cb.EMPTY, standard_spanning(cb.EMPTY))
    assert rank(sp) == 1 and sp.gram[0][0] == 1

    nested = cb.meom("", "", parents=[None, 0])
    elems = standard_spanning(nested)
    assert len(elems) == 4
    assert all(w.top == nested for w in elems)
    sp = state_space(nested, elems)
    assert rank(sp) == 4

    with pytest.raises(Exception):
        standard_spanning(cb.CIRCLE_PM)


def test_state_vectors():
    probes = [cb.mirror(b) for b in circle_basis()]
    assert state_vector(cb.cup(), probes) == [const(0), const(1)]
    assert state_vector(cb.cup(dots=1), probes) == [const(1), e1()]
    v = state_vector(cb.compose(cb.sigma_annulus("+"), cb.cup()), probes)
    assert v == [const(0), const(1)]  # sigma+(1) = 1


def test_induced_sigma_matrix_golden():
    m = induced_matrix(cb.sigma_annulus("+"), circle_basis(), circle_basis())
    assert matrix_is_polynomial(m)
    assert mat_eq(m, [[RatPoly(const(1)), RatPoly(e1())], [RatPoly(const(0)), RatPoly(const(-1))]])
    m_minus = induced_matrix(cb.sigma_annulus("-"), circle_basis(), circle_basis())
    assert mat_eq(m_minus, [[RatPoly(const(-1)), RatPoly(-e1())], [RatPoly(const(0)), RatPoly(const(1))]])


def test_induced_tube_is_identity():
    m = induced_matrix(cb.tube(cb.CIRCLE), circle_basis(), circle_basis())
    assert mat_eq(m, identity_matrix(2))
    m = induced_matrix(cb.tube(cb.CIRCLE_PM), pm_basis(), pm_basis())
    assert mat_eq(m, identity_matrix(2))


def product_basis():
    # 1x1, Xx1, 1xX, XxX
    return [
        cb.tensor(cb.cup(0), cb.cup(0)),
        cb.tensor(cb.cup(1), cb.cup(0)),
        cb.tensor(cb.cup(0), cb.cup(1)),
        cb.tensor(cb.cup(1), cb.cup(1)),
    ]


def test_induced_pants_is_multiplication():
    E1, E2 = e1(), e2()
    m = induced_matrix(cb.pants(), product_basis(), circle_basis())
    expected = [
        [RatPoly(const(1)), RatPoly(const(0)), RatPoly(const(0)), RatPoly(-E2)],
        [RatPoly(const(0)), RatPoly(const(1)), RatPoly(const(1)), RatPoly(E1)],
    ]
    assert mat_eq(m, expected)


def test_induced_copants_is_comultiplication():
    E1, E2 = e1(), e2()
    m = induced_matrix(cb.copants(), circle_basis(), product_basis())
    expected = [
        [RatPoly(-E1), RatPoly(-E2)],
        [RatPoly(const(1)), RatPoly(const(0))],
        [RatPoly(const(1)), RatPoly(const(0))],
        [RatPoly(const(0)), RatPoly(const(1))],
    ]
    assert mat_eq(m, expected)


def test_induced_cup_cap():
    empty_basis = [cb.empty_cobordism()]
    m = induced_matrix(cb.cup(), empty_basis, circle_basis())
    assert mat_eq(m, [[RatPoly(const(1))], [RatPoly(const(0))]])
    m = induced_matrix(cb.cup(dots=1), empty_basis, circle_basis())
    assert mat_eq(m, [[RatPoly(const(0))], [RatPoly(const(1))]])
    m = induced_matrix(cb.cap(), circle_basis(), empty_basis)
    assert mat_eq(m, [[RatPoly(const(0)), RatPoly(const(1))]])


def test_functoriality_of_induced_matrices():
    B = circle_basis()
    w1 = cb.sigma_annulus("+")
    w2 = cb.tube(cb.CIRCLE).with_dot("top", 0)
    m21 = induced_matrix(cb.compose(w2, w1), B, B)
    assert mat_eq(m21, mat_mul(induced_matrix(w2, B, B), induced_matrix(w1, B, B)))

    w3 = cb.pants()
    m = induced_matrix(cb.compose(w3, cb.tensor(w1, w2)), product_basis(), B)
    assert mat_eq(
        m,
        mat_mul(
            induced_matrix(w3, product_basis(), B),
            induced_matrix(cb.tensor(w1, w2), product_basis(), product_basis()),
        ),
    )


def test_singular_gram_raises():
    with pytest.raises(SingularGram):
        induced_matrix(cb.tube(cb.CIRCLE), circle_basis(), [cb.cup(), cb.cup()])


def test_omega_rank_contrast():
    plain = state_space(cb.meom("+-+-"), s4_elements(), mode="plain")
    om = state_space(cb.meom("+-+-"), s4_elements(), mode="omega")
    assert rank(plain) == 4
    assert rank(om) == 2
    pm_plain = state_space(cb.CIRCLE_PM, pm_basis(), mode="plain")
    pm_om = state_space(cb.CIRCLE_PM, pm_basis(), mode="omega")
    assert rank(pm_plain) == 2 and rank(pm_om) == 2


def test_balanced_pair_isos_compose_to_identity():
    # the two-point pair insertion and its cancellation are mutually inverse
    # isomorphisms in omega mode (the cancellation scaled by w)
    create = cb.pair_create(cb.meom("+-"), 0, 1, "+-")
    cancel = cb.pair_cancel(cb.meom("+-+-"), 0, 2)
    basis_s4 = s4_elements()[:1] + s4_elements()[2:3]  # {P, dotted P}: nonsingular in omega mode
    t_create = induced_matrix(create, pm_basis(), basis_s4, mode="omega")
    t_cancel = induced_matrix(cancel, basis_s4, pm_basis(), mode="omega")
    w = const(GaussInt(0, 1), gauss=True)
    t_cancel = scalar_matrix(t_cancel, w)
    assert mat_eq(mat_mul(t_cancel, t_create), identity_matrix(2, gauss=True))
    assert mat_eq(mat_mul(t_create, t_cancel), identity_matrix(2, gauss=True))


def test_pairing_modes():
    u = cb.seamed_cup()
    assert pairing(u, cb.seamed_cup(dotted=True)) == 1
    # theta = 1 on the closed surface, so omega mode scales by w^-1 = -w
    assert pairing(u, cb.seamed_cup(dotted=True), mode="omega") == const(
        GaussInt(0, -1), gauss=True
    )
