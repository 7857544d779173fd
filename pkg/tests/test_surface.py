import random

import pytest

from seamtqft.surface import (
    ClosedSeamedSurface,
    Facet,
    Seam,
    SurfaceError,
    admissible_colorings,
    closed_genus,
    coloring_stats,
    components,
    degree,
    disjoint_union,
    euler_characteristic,
    example_sphere_with_annulus,
    from_json,
    make_surface,
    odd_surface,
    sphere,
    sphere_with_one_seam,
    to_json,
    torus_with_vertical_seams,
    validate,
)


def two_disk_sphere():
    return make_surface([(0, 0, 1), (0, 0, 1)], [Seam((0, 0), (1, 0), "a")])


def test_validate_ok_cases():
    assert validate(closed_genus(1)) == []
    assert validate(two_disk_sphere()) == []


def test_validate_dangling_and_double():
    bad = ClosedSeamedSurface.__new__(ClosedSeamedSurface)
    object.__setattr__(bad, "facets", (Facet(0, 0, 1),))
    object.__setattr__(bad, "seams", ())
    codes = [c for c, _ in validate(bad)]
    assert "DanglingSlot" in codes

    object.__setattr__(bad, "facets", (Facet(0, 0, 1), Facet(0, 0, 1)))
    object.__setattr__(
        bad, "seams", (Seam((0, 0), (1, 0), "a"), Seam((0, 0), (1, 0), "a"))
    )
    codes = [c for c, _ in validate(bad)]
    assert "DoubleUsedSlot" in codes

    with pytest.raises(SurfaceError):
        make_surface([(0, 0, 1)], [])


def test_euler_characteristic():
    assert euler_characteristic(closed_genus(3)) == -4
    assert euler_characteristic(two_disk_sphere()) == 2
    assert euler_characteristic(disjoint_union(sphere(), sphere())) == 4
    assert euler_characteristic(example_sphere_with_annulus()) == 2


def test_degree():
    assert degree(sphere(1)) == -2 + 2
    assert degree(closed_genus(3)) == 4
    assert degree(closed_genus(1)) == 0


def test_admissible_colorings_counts():
    assert len(admissible_colorings(two_disk_sphere())) == 2
    assert admissible_colorings(odd_surface()) == []
    assert len(admissible_colorings(closed_genus(2))) == 2
    both = disjoint_union(two_disk_sphere(), closed_genus(1))
    assert len(admissible_colorings(both)) == 4
    assert components(both) == [[0, 1], [2]]


def test_coloring_swap_bijection():
    surf = disjoint_union(example_sphere_with_annulus(), sphere())
    cols = admissible_colorings(surf)
    as_sets = {tuple(sorted(c.items())) for c in cols}
    for c in cols:
        swapped = {f: 3 - v for f, v in c.items()}
        assert tuple(sorted(swapped.items())) in as_sets


def test_chi_even_random_surfaces():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randrange(1, 5)
        facets = [[rng.randrange(3), rng.randrange(3), 0] for _ in range(n)]
        # random perfect matching of an even number of slots
        stubs = []
        for _ in range(rng.randrange(4)):
            i, j = rng.randrange(n), rng.randrange(n)
            stubs.append((i, facets[i][2]))
            facets[i][2] += 1
            stubs.append((j, facets[j][2]))
            facets[j][2] += 1
        rng.shuffle(stubs)
        seams = [
            Seam(stubs[2 * k], stubs[2 * k + 1], rng.choice("ab"))
            for k in range(len(stubs) // 2)
        ]
        surf = make_surface(facets, seams)
        assert euler_characteristic(surf) % 2 == 0
        for c in admissible_colorings(surf):
            stats = coloring_stats(surf, c)
            assert stats.chi_f1_closed % 2 == 0
            assert stats.theta1 + stats.theta2 == surf.theta


def test_example_sphere_stats():
    surf = example_sphere_with_annulus()
    cols = admissible_colorings(surf)
    by_annulus = {c[1]: c for c in cols}
    c1 = by_annulus[1]  # annulus facet has color 1
    s1 = coloring_stats(surf, c1)
    assert (s1.theta1, s1.chi_f1_closed, s1.d1, s1.d2) == (2, 2, 1, 0)
    c2 = by_annulus[2]
    s2 = coloring_stats(surf, c2)
    assert (s2.theta1, s2.chi_f1_closed, s2.d2) == (0, 4, 1)


def test_seamless_sphere_stats():
    surf = sphere()
    for c in admissible_colorings(surf):
        stats = coloring_stats(surf, c)
        assert (stats.theta1, stats.d1, stats.d2) == (0, 0, 0)


def test_torus_with_vertical_seams_shape():
    t = torus_with_vertical_seams("+-")
    assert euler_characteristic(t) == 0
    assert t.theta == 2
    assert len(admissible_colorings(t)) == 2
    t1 = torus_with_vertical_seams("+")
    assert admissible_colorings(t1) == []  # self-adjacent


def test_json_roundtrip():
    surf = example_sphere_with_annulus()
    assert from_json(to_json(surf)) == surf
    with pytest.raises(SurfaceError) as exc:
        from_json({"facets": [{"genus": 0}], "seams": []})
    assert "SchemaError" in str(exc.value)


def test_one_seam_sphere_colorings():
    surf = sphere_with_one_seam(dots_preferred=1)
    cols = admissible_colorings(surf)
    assert len(cols) == 2
    stats = {coloring_stats(surf, c).theta1 for c in cols}
    assert stats == {0, 1}
