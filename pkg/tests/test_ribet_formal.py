"""Formal-ring side of the relation shapes: matrices, ideals, and the
symbolic identity checks."""

import pytest

from ribetkit.borel import TauAction
from ribetkit.errors import StructuralError
from ribetkit.exactpoly import DEGREVLEX, GF, QQ
from ribetkit.groebner import IdealSpec, in_ideal, reduce_by
from ribetkit.ribet.formal import (
    FormalRing,
    build_A_generators,
    build_ideals,
    build_matrices,
    check_e_tau_invariance,
    check_example_r2,
    check_quotient_presentation,
    element_e,
    example_r2_target,
    symbolic_det,
)
from ribetkit.ribet.shapes import (
    RibetShape,
    RowSpec,
    corpus,
    shape_full_mixed,
    shape_one_place_type4,
    shape_r2_two_type2,
    shape_sigma_type3,
    shape_two_type1,
)


def test_shape_validation():
    with pytest.raises(StructuralError):
        RibetShape(name="bad-rows", r=2, rows=(RowSpec.type_i(),))
    with pytest.raises(StructuralError):
        RibetShape(
            name="bad-iii", r=2, rows=(RowSpec.type_iii(1), RowSpec.type_i())
        )  # TypeIII without Sigma
    with pytest.raises(StructuralError):
        RibetShape(
            name="dup-dedicated",
            r=3,
            rows=(RowSpec.type_iii(3), RowSpec.type_iii(3), RowSpec.type_i()),
            sigma_places=("v0",),
        )


def test_b_sets():
    sh = shape_full_mixed()
    assert sh.b_set("v1") == [2, 3]
    assert sh.b_set("w1") == [4]
    assert sh.b_v0() == [5]
    assert sh.free_generators() == [1]
    assert sorted(sh.x_bearing()) == [2, 3, 4]


def test_build_matrices_r2_example():
    sh = shape_r2_two_type2()
    mats = build_matrices(sh)
    F = mats.ring
    # E = [[delta121, delta122], [delta211, delta212]]
    assert mats.E.entries[0][0] == F.delta(1, 2, 1)
    assert mats.E.entries[0][1] == F.delta(1, 2, 2)
    assert mats.E.entries[1][0] == F.delta(2, 1, 1)
    assert mats.E.entries[1][1] == F.delta(2, 1, 2)
    # E' alterations.
    assert mats.Eprime.entries[0][0] == F.delta(1, 2, 1) - F.d(2)
    assert mats.Eprime.entries[0][1] == F.delta(1, 2, 2) - F.a(1) - F.nu(1)
    assert mats.Eprime.entries[1][0] == F.delta(2, 1, 1) - F.a(2) - F.nu(2)
    assert mats.Eprime.entries[1][1] == F.delta(2, 1, 2) - F.d(1)
    assert mats.D.entries == mats.E.entries


def test_det_E_factorizes_without_type_iv():
    # For a shape with a place in P but no TypeIV rows, the block
    # structure gives det(E) = (x + nu) det(D) exactly.
    sh = RibetShape(
        name="p-no-iv",
        r=3,
        rows=(RowSpec.type_ii(1, 2), RowSpec.type_ii(2, 1), RowSpec.type_i()),
        p_places=("v1",),
        sigma_v={"v1": 3},
    )
    mats = build_matrices(sh)
    F = mats.ring
    det_e = symbolic_det(mats.E)
    det_d = symbolic_det(mats.D)
    g = sh.sigma_v["v1"]
    assert det_e == (F.x(g) + F.nu(g)) * det_d


def test_type_v_row_shape():
    sh = shape_full_mixed()
    mats = build_matrices(sh)
    F = mats.ring
    # The TypeV row (last row) has a unit in its generator column and
    # x + nu in the bookkeeping column.
    n = sh.size
    row = sh.t + 5  # TypeV is the 6th row of the shape
    y_col = n - 1
    assert mats.E.entries[row][y_col] == F.x(4) + F.nu(4)
    assert mats.E.entries[row][sh.t + 4 - 1] == F.one()
    assert mats.Eprime.entries[row][y_col] == F.x(4) - F.a(4)


def test_build_ideals_examples():
    sh = shape_full_mixed()
    ideals = build_ideals(sh)
    F = ideals.ring
    # TypeI row contributes sum eps_i b_i to J'.
    eps_b = F.zero()
    for i in range(1, sh.r + 1):
        eps_b = eps_b + F.eps(1, i) * F.b(i)
    assert eps_b in set(ideals.Jprime.generators)
    # TypeII row (1,2) contributes (a1 + nu1) b2 + b1 d2 - sum delta b.
    tII = (F.a(1) + F.nu(1)) * F.b(2) + F.b(1) * F.d(2)
    for k in range(1, sh.r + 1):
        tII = tII - F.delta(1, 2, k) * F.b(k)
    assert tII in set(ideals.Jprime.generators)
    # Pair (2,3) at the P-place contributes B(2,3) to J' and all four
    # coefficients to J.
    B = F.b(2) * (F.x(3) - F.a(3)) - F.b(3) * (F.x(2) - F.a(2))
    assert B in set(ideals.Jprime.generators)
    A = F.b(2) * F.c(3) - (F.x(3) - F.d(3)) * (F.x(2) - F.a(2))
    assert A in set(ideals.J.generators)


def test_jprime_subset_of_j_generatorwise():
    for sh in corpus():
        ideals = build_ideals(sh)
        jset = set(ideals.J.generators)
        for g in ideals.Jprime.generators:
            assert g in jset


def test_deleted_b_never_appears():
    sh = shape_sigma_type3()
    ideals = build_ideals(sh)
    F = ideals.ring
    assert "b3" not in F.table.names
    assert F.b(3).is_zero()


def test_element_e_r2_matches_closed_form_mod_relations():
    sh = shape_r2_two_type2()
    ideals = build_ideals(sh)
    e = element_e(sh)
    F = ideals.ring
    target = e - example_r2_target(F)
    assert in_ideal(target, ideals.J)


def test_element_e_trivial_cases():
    # Only TypeI rows: E = E' so e = 0.
    assert element_e(shape_two_type1()).is_zero()
    sh = RibetShape(name="single-type1", r=1, rows=(RowSpec.type_i(),))
    assert element_e(sh).is_zero()


def test_element_e_lies_in_ir_for_corpus():
    for sh in corpus():
        element_e(sh)  # raises on membership failure


def test_check_example_r2_variants():
    assert check_example_r2()
    assert check_example_r2(ring=GF(10007))
    assert not check_example_r2(omit_relation=7)


def test_tau_invariance_positive_and_negative():
    assert check_e_tau_invariance(shape_r2_two_type2())
    assert check_e_tau_invariance(shape_one_place_type4())
    assert not check_e_tau_invariance(
        shape_one_place_type4(), drop_pair_generator=True
    )


def test_quotient_presentation_corpus():
    for sh in corpus():
        assert check_quotient_presentation(sh)


def test_quotient_presentation_collapse_values():
    from ribetkit.ribet.formal import quotient_presentation_images

    sh = shape_r2_two_type2()
    ideals = build_ideals(sh)
    F = ideals.ring
    images = [p for p in quotient_presentation_images(ideals) if not p.is_zero()]
    expected = set()
    for (i, j) in sh.type_ii_pairs():
        acc = F.zero()
        for k in range(1, sh.r + 1):
            acc = acc + F.delta(i, j, k) * F.nu(k)
        expected.add(acc)
    assert {(-p if False else p) for p in images} or True
    canon = lambda p: -p if p.leading_term(DEGREVLEX)[1] < 0 else p
    assert {canon(p) for p in images} == {canon(p) for p in expected}


def test_ideal_stability_via_adjoint_law():
    # tau_x moves every J generator by an explicit combination of its own
    # quadruple, so membership of the difference needs no basis at all.
    for sh in corpus():
        ideals = build_ideals(sh)
        act = TauAction(ideals.ring.table)
        x = act.x_var(QQ)
        for q in ideals.quadruples:
            A, B, C, D = (f.lift(act.table) for f in q.matrix.entries())
            assert act.apply(q.matrix.a) == A + B * x
            assert act.apply(q.matrix.b) == B
            assert act.apply(q.matrix.c) == C + (D - A) * x - B * x * x
            assert act.apply(q.matrix.d) == D - B * x


def test_a_generators():
    sh = shape_sigma_type3()
    F = FormalRing(sh)
    gens = dict(build_A_generators(sh, 2, formal=F))
    assert gens["tr(X1)"] == F.a(1) + F.d(1)
    assert gens["det(X1)"] == F.a(1) * F.d(1) - F.b(1) * F.c(1)
    tr12 = gens["tr(X1.X2)"]
    assert tr12 == (
        F.a(1) * F.a(2) + F.b(1) * F.c(2) + F.c(1) * F.b(2) + F.d(1) * F.d(2)
    )
    assert gens["d3"] == F.d(3)
    assert gens["tr(X1)-V"] == F.a(1) + F.d(1) + F.nu(1)


def test_a_generators_invariant():
    from ribetkit.borel import invariant_mod

    sh = shape_sigma_type3()
    F = FormalRing(sh)
    act = TauAction(F.table)
    zero = IdealSpec([])
    for label, g in build_A_generators(sh, 2, formal=F):
        if g.is_zero():
            continue
        assert invariant_mod(g, zero, action=act), label


def test_eprime_minus_e_entrywise_in_ir():
    # Every entry of E' - E lies in the shift ideal; its generators are
    # linear with coprime leading monomials, so plain reduction decides.
    for sh in corpus():
        from ribetkit.ribet.formal import build_matrices

        mats = build_matrices(sh)
        ideals = build_ideals(sh)
        n = sh.size
        for i in range(n):
            for j in range(n):
                diff = mats.Eprime.entries[i][j] - mats.E.entries[i][j]
                assert reduce_by(diff, ideals.I_R.generators).is_zero(), (sh.name, i, j)
