"""The inclusion of the b-coefficient resolution into the relation
complex: squares, images, adjoint law."""

from ribetkit.brcomplex import build_cd_morphism, check_d2, ideal_generator_sets_match
from ribetkit.exactpoly import DEGREVLEX, QQ, Polynomial, VariableTable
from ribetkit.groebner import IdealSpec
from ribetkit.ribet.shapes import corpus, shape_full_mixed, shape_r2_two_type2


def test_cd_morphism_r2():
    cd = build_cd_morphism(shape_r2_two_type2(), cap=2)
    assert cd.commutes
    assert cd.im_c1_is_jprime
    assert cd.im_d1_is_j
    assert cd.quadruples_adjoint
    # Small side: Koszul on two b-coefficient forms.
    assert cd.C.ranks == [1, 2, 1]
    # Big side: four layers per relation slot.
    assert cd.D.ranks[1] == 8
    assert check_d2(cd.C) and check_d2(cd.D)


def test_cd_morphism_corpus_cap2():
    for sh in corpus():
        cd = build_cd_morphism(sh, cap=2)
        assert cd.all_pass(), sh.name


def test_cd_morphism_full_mixed_cap3():
    cd = build_cd_morphism(shape_full_mixed(), cap=3)
    assert cd.all_pass()
    assert check_d2(cd.C) and check_d2(cd.D)
    assert cd.inclusion.check_commutes()


def test_h0_identification():
    # im(D1 -> D0) literally generates the relation ideal.
    cd = build_cd_morphism(shape_full_mixed(), cap=1)
    gens = [cd.D.diffs[1].entries[0][j] for j in range(cd.D.ranks[1])]
    assert ideal_generator_sets_match(IdealSpec(gens), cd.ideals.J)


def test_generator_sets_match_fallback():
    t = VariableTable(["x", "y"])
    x, y = (Polynomial.var(QQ, t, i) for i in range(2))
    # Same ideal, different presentations: needs the Groebner fallback.
    a = IdealSpec([x + y, x - y])
    b = IdealSpec([x, y])
    assert ideal_generator_sets_match(a, b)
    assert not ideal_generator_sets_match(IdealSpec([x]), IdealSpec([y]))


def test_place_factor_degree1_images_are_quadruple_entries():
    # The doubled-column Buchsbaum-Rim factor maps its four distinct-slot
    # wedges onto +-A, +-B, +-C, +-D of the place pair.
    from ribetkit.ribet.formal import build_ideals
    from ribetkit.ribet.shapes import shape_one_place_type4

    sh = shape_one_place_type4()
    ideals = build_ideals(sh)
    pair = next(q for q in ideals.quadruples if q.origin[0] == "pair")
    A, B, C, D = pair.matrix.entries()
    cd = build_cd_morphism(sh, cap=1)
    d1 = [cd.D.diffs[1].entries[0][j] for j in range(cd.D.ranks[1])]
    canon = lambda p: -p if p.leading_term(DEGREVLEX)[1] < 0 else p
    images = {canon(p) for p in d1 if not p.is_zero()}
    for f in (A, B, C, D):
        assert canon(f) in images
