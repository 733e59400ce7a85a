"""Free complexes: Koszul, Buchsbaum-Rim, tensor, homology, regularity."""

import random

import pytest

from ribetkit.brcomplex import (
    br_complexes,
    br_f,
    check_d2,
    generic_2xn,
    homology_at_point,
    inhomogeneous_regular_check,
    koszul,
    koszul_general,
    subcomplex,
    symbolic_h1,
    tensor,
    truncate,
    unit_complex,
)
from ribetkit.errors import StructuralError
from ribetkit.exactpoly import QQ
from ribetkit.groebner import FreeModuleMatrix, module_contains, module_gb
from ribetkit.brcomplex.build import regularity_check


def bvars(n):
    M = generic_2xn(n)
    return M, list(M.entries[0]), list(M.entries[1])


def test_koszul_two_elements():
    M, b, bp = bvars(2)
    K = koszul(b)
    assert K.ranks == [1, 2, 1]
    assert K.diffs[1].entries == ((b[0], b[1]),)
    d2 = K.diffs[2]
    assert [d2.entries[0][0], d2.entries[1][0]] == [-b[1], b[0]]
    assert check_d2(K)
    assert K.twists() == [0, 1, 2]


def test_koszul_single_element():
    M, b, bp = bvars(1)
    f = b[0] * bp[0] - 3
    K = koszul([f])
    assert K.ranks == [1, 1]
    assert K.diffs[1].entries[0][0] == f


def test_koszul_resolves_regular_variable_sequence():
    # Variables form a regular sequence; homology vanishes above degree 0
    # symbolically at degree 1 and at sampled points everywhere.
    M, b, bp = bvars(3)
    K = koszul(b)
    assert check_d2(K)
    assert symbolic_h1(K).is_exact_at_1
    rng = random.Random(3)
    p = 101
    nvars = len(K.table)
    for _ in range(50):
        point = {i: rng.randrange(p) for i in range(nvars)}
        dims = homology_at_point(K, point, p)
        assert all(d == 0 for d in dims[1:])


def test_br_complexes_shapes_and_d2():
    for n in (2, 3, 4):
        M, b, bp = bvars(n)
        brs = br_complexes(M)
        assert check_d2(brs.Rf)
        assert check_d2(brs.Rdetf)
        assert brs.Rf.ranks[0] == 2 and brs.Rf.ranks[1] == n
        assert brs.Rdetf.ranks[0] == 1 and brs.Rdetf.ranks[1] == n * (n - 1) // 2


def test_br_full_length_n5():
    M, b, bp = bvars(5)
    brs = br_complexes(M)
    assert brs.Rf.ranks == [2, 5, 10, 10, 3]
    assert brs.Rdetf.ranks == [1, 10, 25, 24, 8]
    assert check_d2(brs.Rf)
    assert check_d2(brs.Rdetf)


def test_br_detf_degree1_image_is_minors_ideal():
    M, b, bp = bvars(3)
    rd = br_complexes(M).Rdetf
    entries = [rd.diffs[1].entries[0][j] for j in range(rd.ranks[1])]
    r = lambda i, j: b[i] * bp[j] - b[j] * bp[i]
    minors = {r(0, 1), r(0, 2), r(1, 2)}
    assert set(entries) == minors


def test_br_f_degree2_image_is_dijk():
    M, b, bp = bvars(3)
    rf = br_complexes(M).Rf
    col = [rf.diffs[2].entries[i][0] for i in range(3)]
    r = lambda i, j: b[i] * bp[j] - b[j] * bp[i]
    # d_123 = r_12 e_3 + r_23 e_1 + r_31 e_2.
    assert col == [r(1, 2), -r(0, 2), r(0, 1)]


def test_br_m1_input_is_koszul():
    M, b, bp = bvars(2)
    row = FreeModuleMatrix([[b[0], b[1]]])
    brs = br_complexes(row)
    assert brs.Rf.ranks == brs.Rdetf.ranks == [1, 2, 1]


def test_tensor_unit_and_multiplicativity():
    M, b, bp = bvars(2)
    K1, K2 = koszul([b[0]]), koszul([b[1]])
    T = tensor(K1, K2)
    K12 = koszul(b)
    assert T.ranks == K12.ranks == [1, 2, 1]
    assert check_d2(T)
    assert symbolic_h1(T).is_exact_at_1
    U = unit_complex(QQ, K1.table)
    TU = tensor(K12, U)
    assert TU.ranks == K12.ranks
    assert check_d2(TU)


def test_tensor_rank_convolution_and_twists():
    M, b, bp = bvars(3)
    A = koszul(b)  # ranks 1,3,3,1
    B = koszul(b[:2])  # ranks 1,2,1
    T = tensor(A, B)
    expected = []
    for n in range(6):
        expected.append(
            sum(
                A.ranks[p] * B.ranks[n - p]
                for p in range(len(A.ranks))
                if 0 <= n - p < len(B.ranks)
            )
        )
    assert T.ranks == expected
    assert T.twists() == [k + A.shift + B.shift for k in range(6)]
    tw = tensor(A.twist(-1), B)
    assert tw.twists() == [k - 1 for k in range(6)]


def test_check_d2_detects_corruption():
    M, b, bp = bvars(2)
    K = koszul(b)
    bad_d2 = FreeModuleMatrix([[b[1]], [b[0]]])  # sign flipped
    from ribetkit.brcomplex.free_complex import FreeComplex

    bad = FreeComplex(K.ring, K.table, K.ranks, [None, K.diffs[1], bad_d2], K.labels)
    assert not check_d2(bad)


def test_homology_at_point_examples():
    M, b, bp = bvars(2)
    K = koszul(b)
    p = 101
    generic = {0: 3, 1: 0, 2: 1, 3: 5}  # b1 != 0
    assert homology_at_point(K, generic, p) == [0, 0, 0]
    origin = {0: 0, 1: 0, 2: 1, 3: 5}
    assert homology_at_point(K, origin, p) == [1, 2, 1]


def test_symbolic_h1_examples():
    M, b, bp = bvars(2)
    assert symbolic_h1(koszul(b)).is_exact_at_1
    M3, b3, bp3 = bvars(3)
    rf = br_f(M3)
    rep = symbolic_h1(rf)
    assert rep.is_exact_at_1
    # Kernel is exactly the d_123 module: two-way containment.
    r = lambda i, j: b3[i] * bp3[j] - b3[j] * bp3[i]
    d123 = [r(1, 2), -r(0, 2), r(0, 1)]
    gb_d = module_gb([d123])
    for v in rep.h1_generators:
        assert module_contains(v, gb_d)
    # Deleting d_2 breaks exactness.
    crippled = truncate(rf, 1)
    assert not symbolic_h1(crippled).is_exact_at_1


def test_subcomplex_closure():
    M, b, bp = bvars(2)
    K = koszul(b)
    only_first = subcomplex(K, lambda lab: lab == () or lab == (1,))
    assert only_first.ranks == [1, 1]
    with pytest.raises(StructuralError):
        # Keeping the top wedge without degree 1 is not closed.
        subcomplex(K, lambda lab: lab == () or len(lab) == 2)


def test_koszul_general_distinct_keys():
    M, b, bp = bvars(2)
    cols = [((1, "A"), b[0]), ((1, "B"), bp[0]), ((2, "A"), b[1]), ((2, "B"), bp[1])]
    C = koszul_general(cols, distinct_key=lambda lab: lab[0])
    # Degree 1: all four columns; degree 2: only cross-slot pairs (4);
    # degree 3+: impossible.
    assert C.ranks == [1, 4, 4]
    assert check_d2(C)


def test_regularity_examples():
    assert regularity_check(generic_2xn(2))
    assert regularity_check(generic_2xn(3))
    M, b, bp = bvars(3)
    degenerate = FreeModuleMatrix([[b[0], b[0], b[2]], [bp[0], bp[0], bp[2]]])
    assert not regularity_check(degenerate)


def test_inhomogeneous_regularity_m2n2():
    assert inhomogeneous_regular_check(2, 2)


def test_br_exact_prop_instance():
    # One 2-element block plus one generic linear form: exact at degree 1
    # symbolically and at 20 random points in degrees >= 1.
    from ribetkit.veriharness.suites import _br_exact_instance

    C = _br_exact_instance()
    assert check_d2(C)
    assert symbolic_h1(C).is_exact_at_1
    rng = random.Random(0)
    p = 10007
    for _ in range(20):
        point = {i: rng.randrange(p) for i in range(len(C.table))}
        dims = homology_at_point(C, point, p)
        assert all(d == 0 for d in dims[1:]), dims


def test_complex_record():
    from ribetkit.brcomplex import complex_to_record

    M, b, bp = bvars(2)
    K = koszul(b)
    rec = complex_to_record(K)
    assert rec["ranks"] == [1, 2, 1]
    assert rec["twists"] == [0, 1, 2]
    assert rec["differentials"][0] == [["1*b1", "1*b2"]]
    assert rec["differentials"][1] == [["-1*b2"], ["1*b1"]]


def test_br_complexes_acyclic_at_generic_points():
    # Both complexes of a generic 2xn map are exact away from the minors
    # locus; random points land off it, so every homology vanishes in
    # degrees >= 1 (and in degree 0 for R(det f), whose H_0 is R/minors).
    rng = random.Random(17)
    p = 10007
    for n in (3, 4, 5):
        M, b, bp = bvars(n)
        brs = br_complexes(M)
        nvars = len(M.entries[0][0].table)
        for _ in range(10):
            point = {i: rng.randrange(p) for i in range(nvars)}
            for C in (brs.Rf, brs.Rdetf):
                dims = homology_at_point(C, point, p)
                assert all(d == 0 for d in dims[1:]), (n, dims)


def test_br_detf_exact_at_1_generic_2x3():
    M, b, bp = bvars(3)
    rd = br_complexes(M).Rdetf
    rep = symbolic_h1(rd)
    assert rep.is_exact_at_1
