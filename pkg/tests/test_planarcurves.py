import pytest

from arcspec.planarcurves import (
    CrossinglessMatching,
    FlatTangle,
    PlatformSpec,
    add_horizontal_strands,
    classify_circles,
    enumerate_matchings,
    enumerate_platform_matchings,
    glue,
    iota,
)

from oracles import brute_force_matchings

CM = CrossinglessMatching


def M(*pairs):
    return CM(2 * len(pairs), tuple(pairs))


def test_enumerate_trivial_cases():
    assert [m.pairs for m in enumerate_matchings(0)] == [()]
    assert [m.pairs for m in enumerate_matchings(2)] == [((1, 2),)]
    assert [m.pairs for m in enumerate_matchings(4)] == [((1, 2), (3, 4)), ((1, 4), (2, 3))]


def test_enumerate_rejects_odd():
    with pytest.raises(ValueError):
        enumerate_matchings(3)
    with pytest.raises(ValueError):
        enumerate_matchings(-2)


@pytest.mark.parametrize("points", range(0, 11, 2))
def test_enumerate_against_brute_force(points):
    ours = [m.pairs for m in enumerate_matchings(points)]
    assert ours == brute_force_matchings(points)


def test_catalan_counts_through_16():
    expected = [1, 1, 2, 5, 14, 42, 132, 429, 1430]
    got = [len(enumerate_matchings(2 * i)) for i in range(9)]
    assert got == expected


def test_enumeration_is_lexicographic():
    for points in (4, 6, 8):
        pairs = [m.pairs for m in enumerate_matchings(points)]
        assert pairs == sorted(pairs)


def test_matching_validation():
    with pytest.raises(ValueError):
        CM(4, ((1, 3), (2, 4)))  # crossing
    with pytest.raises(ValueError):
        CM(4, ((1, 2), (2, 3)))  # not an involution
    with pytest.raises(ValueError):
        CM(4, ((1, 2),))  # misses points


def test_platform_enumeration_examples():
    assert [m.pairs for m in enumerate_platform_matchings(PlatformSpec(1, 1, 0))] == [((1, 2),)]
    assert len(enumerate_platform_matchings(PlatformSpec(2, 1, 1))) == 2
    got = [m.pairs for m in enumerate_platform_matchings(PlatformSpec(4, 2, 0))]
    assert sorted(got) == sorted([
        ((1, 6), (2, 3), (4, 5)),
        ((1, 6), (2, 5), (3, 4)),
        ((1, 4), (2, 3), (5, 6)),
    ])


def test_platform_parity_violation():
    with pytest.raises(ValueError):
        PlatformSpec(2, 1, 0)


def test_glue_examples():
    one = M((1, 2))
    dec = glue(one, None, one)
    assert len(dec) == 1 and dec.circles[0].nodes == frozenset({1, 2})

    a = M((1, 2), (3, 4))
    b = M((1, 4), (2, 3))
    assert len(glue(a, None, b)) == 1
    assert len(glue(a, None, a)) == 2
    assert [set(c.nodes) for c in glue(a, None, a).circles] == [{1, 2}, {3, 4}]


def test_glue_mismatch_errors():
    with pytest.raises(ValueError):
        glue(M((1, 2)), None, M((1, 2), (3, 4)))


def test_glue_with_middle_flat_tangle():
    # A 2-strand identity between two matchings of two points.
    flat = FlatTangle(2, 2, ((1, 3), (2, 4)))
    dec = glue(M((1, 2)), flat, M((1, 2)))
    assert len(dec) == 1
    # A free circle in the middle shows up as its own platform-free circle.
    flat2 = FlatTangle(2, 2, ((1, 3), (2, 4)), closed_circles=1)
    dec2 = glue(M((1, 2)), flat2, M((1, 2)))
    assert len(dec2) == 2


def test_classify_circles_examples():
    spec = PlatformSpec(2, 1, 1)
    a = M((1, 2), (3, 4))
    assert classify_circles(glue(a, None, a), spec) == ("typeII", "typeII")

    spec2 = PlatformSpec(4, 2, 0)
    x = M((1, 4), (2, 3), (5, 6))
    y = M((1, 6), (2, 5), (3, 4))
    assert classify_circles(glue(x, None, y), spec2) == ("typeIII",)

    spec3 = PlatformSpec(4, 0, 0)
    assert set(classify_circles(glue(a, None, a), spec3)) == {"free"}


def test_classify_symmetric_in_a_b():
    spec = PlatformSpec(2, 1, 1)
    ms = enumerate_matchings(4)
    for a in ms:
        for b in ms:
            assert classify_circles(glue(a, None, b), spec) == classify_circles(glue(b, None, a), spec)


def test_iota_examples():
    assert iota(M((1, 2))).pairs == ((1, 4), (2, 3))
    assert iota(CM(0, ())).pairs == ((1, 2),)


def test_iota_preserves_constraints_and_is_injective():
    for n in range(5):
        for k1 in range(4):
            for k2 in range(4):
                if (k1 + k2 - n) % 2:
                    continue
                spec = PlatformSpec(n, k1, k2)
                target = PlatformSpec(n, k1 + 1, k2 + 1)
                source = enumerate_platform_matchings(spec)
                images = [iota(a, spec) for a in source]
                assert len(set(images)) == len(images)
                for img in images:
                    assert target.admits(img)
                if k1 + k2 >= n:
                    assert len(images) == len(enumerate_platform_matchings(target))


def test_iota_bijection_b211_to_b222():
    src = enumerate_platform_matchings(PlatformSpec(2, 1, 1))
    tgt = enumerate_platform_matchings(PlatformSpec(2, 2, 2))
    assert sorted(iota(a).pairs for a in src) == sorted(m.pairs for m in tgt)


def test_flat_tangle_strip_noncrossing():
    FlatTangle(2, 2, ((1, 3), (2, 4)))  # identity: fine
    FlatTangle(2, 2, ((1, 2), (3, 4)))  # cap-cup: fine
    with pytest.raises(ValueError):
        FlatTangle(2, 2, ((1, 4), (2, 3)))  # would cross in the strip


def test_add_horizontal_strands_flat():
    ident1 = FlatTangle(1, 1, ((1, 2),))
    out = add_horizontal_strands(ident1, 1, 0)
    assert (out.left_points, out.right_points) == (2, 2)
    assert out.boundary_matching == ((1, 3), (2, 4))

    empty = FlatTangle(0, 0, ())
    out2 = add_horizontal_strands(empty, 1, 1)
    assert out2.boundary_matching == ((1, 3), (2, 4))
