"""Acceptance criteria.

One test per criterion, each printing a single pass/fail line; every
check is exact (symbolic identity or finite-field equality), with the
stated wall-clock ceilings asserted.  Run with ``pytest -s`` to see the
lines as they print.
"""

import random
import time
from itertools import product as iproduct

from ribetkit.borel import TauAction, adjoint_quadruple_check
from ribetkit.brcomplex import (
    br_complexes,
    build_cd_morphism,
    check_d2,
    generic_2xn,
    homology_at_point,
    inhomogeneous_regular_check,
    koszul,
    regularity_check,
    symbolic_h1,
)
from ribetkit.exactpoly import GF, QQ, Polynomial, VariableTable
from ribetkit.genmat import GenericModel, Mat2, Word, det_congruence_check, trace_congruence_check
from ribetkit.groebner import (
    FreeModuleMatrix,
    IdealSpec,
    buchberger,
    module_contains,
    module_gb,
)
from ribetkit.ribet import (
    FormalRing,
    build_ideals,
    check_e_tau_invariance,
    check_example_r2,
    check_quotient_presentation,
    check_specialized,
    corpus,
    generate_specialization,
    perturb_alpha,
    shape_one_place_type4,
    shape_r2_two_type2,
    shape_specialization,
)
from ribetkit.veriharness.suites import _br_exact_instance


class _Timed:
    def __init__(self, name, limit_s):
        self.name = name
        self.limit = limit_s

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"[{status}] {self.name} ({elapsed:.2f}s, limit {self.limit}s)")
        if exc_type is None:
            assert elapsed <= self.limit, f"{self.name} exceeded {self.limit}s"
        return False


def test_criterion_01_example_identity():
    with _Timed("criterion 1: r=2 worked identity, exact over QQ", 60):
        assert check_example_r2()


def test_criterion_02_trace_identities():
    with _Timed("criterion 2: trace congruences, words <= 3, r in {2,3}", 300):
        count = 0
        for r in (2, 3):
            for length in (1, 2, 3):
                for letters in iproduct(range(1, r + 1), repeat=length):
                    assert trace_congruence_check(Word(tuple(letters)), r), letters
                    count += 1
        assert count >= 11


def test_criterion_03_det_congruence():
    with _Timed("criterion 3: determinant congruences, single and pairs", 300):
        assert det_congruence_check(2, [1])
        assert det_congruence_check(2, [2])
        assert det_congruence_check(3, [3])
        assert det_congruence_check(2, [1, 2], word_cap=2)
        assert det_congruence_check(3, [1, 3], word_cap=2)
        assert det_congruence_check(2, [])


def test_criterion_04_stability():
    with _Timed("criterion 4: adjoint law for all relation quadruples", 10):
        for sh in corpus():
            ideals = build_ideals(sh)
            act = TauAction(ideals.ring.table)
            for q in ideals.quadruples:
                assert adjoint_quadruple_check(*q.matrix.entries(), action=act), (
                    sh.name,
                    q.origin,
                )
        F = FormalRing(shape_r2_two_type2())
        assert not adjoint_quadruple_check(F.a(1), F.b(1), F.c(1), F.zero())


def test_criterion_05_tau_invariance():
    with _Timed("criterion 5: tau-invariance of det(E') mod J'", 1200):
        assert check_e_tau_invariance(shape_r2_two_type2())
        assert check_e_tau_invariance(shape_one_place_type4())
        assert not check_e_tau_invariance(
            shape_one_place_type4(), drop_pair_generator=True
        )


def test_criterion_06_specialization():
    with _Timed("criterion 6: 20 seeds at p=10007, four numeric checks", 60):
        sh = shape_specialization()
        for seed in range(20):
            inst = generate_specialization(sh, seed, 10007)
            checks = check_specialized(inst)
            assert checks.all_pass(), (seed, checks)
        control = check_specialized(perturb_alpha(generate_specialization(sh, 0, 10007)))
        assert not control.detEprime_zero


def test_criterion_07_quotient_presentation():
    with _Timed("criterion 7: quotient presentation on the corpus", 10):
        shapes = corpus()
        assert len(shapes) >= 4
        kinds = {row.kind for sh in shapes for row in sh.rows}
        assert kinds == {"I", "II", "III", "IV", "V"}
        for sh in shapes:
            assert check_quotient_presentation(sh), sh.name


def test_criterion_08_complexes():
    with _Timed("criterion 8: complex axioms and exactness evidence", 300):
        for n in (2, 3, 4):
            M = generic_2xn(n)
            assert check_d2(koszul(list(M.entries[0])))
            brs = br_complexes(M, cap=3)
            assert check_d2(brs.Rf)
            assert check_d2(brs.Rdetf)
        M2 = generic_2xn(2)
        assert symbolic_h1(koszul(list(M2.entries[0]))).is_exact_at_1
        M3 = generic_2xn(3)
        rf = br_complexes(M3).Rf
        rep = symbolic_h1(rf)
        assert rep.is_exact_at_1
        b = list(M3.entries[0])
        bp = list(M3.entries[1])
        r = lambda i, j: b[i] * bp[j] - b[j] * bp[i]
        gb_d = module_gb([[r(1, 2), -r(0, 2), r(0, 1)]])
        for v in rep.h1_generators:
            assert module_contains(v, gb_d)
        C = _br_exact_instance()
        rng = random.Random(0)
        for _ in range(20):
            point = {i: rng.randrange(10007) for i in range(len(C.table))}
            dims = homology_at_point(C, point, 10007)
            assert all(d == 0 for d in dims[1:]), dims


def test_criterion_09_regularity():
    with _Timed("criterion 9: regularity criteria", 300):
        assert regularity_check(generic_2xn(2))
        assert regularity_check(generic_2xn(3))
        assert inhomogeneous_regular_check(2, 2)
        M = generic_2xn(3)
        b, bp = list(M.entries[0]), list(M.entries[1])
        degenerate = FreeModuleMatrix([[b[0], b[0], b[2]], [bp[0], bp[0], bp[2]]])
        assert not regularity_check(degenerate)


def test_criterion_10_morphism():
    with _Timed("criterion 10: C -> D morphism on the corpus, cap 2", 600):
        for sh in corpus():
            cd = build_cd_morphism(sh, cap=2)
            assert cd.commutes, sh.name
            assert cd.im_c1_is_jprime, sh.name
            assert cd.im_d1_is_j, sh.name
            assert cd.quadruples_adjoint, sh.name


def _random_poly(rng, ring, table, max_terms=4, max_exp=2):
    terms = {}
    n = len(table)
    for _ in range(rng.randrange(1, max_terms + 1)):
        m = [0] * n
        for _k in range(rng.randrange(0, 3)):
            m[rng.randrange(n)] += rng.randrange(1, max_exp + 1)
        if ring.kind == "GF":
            terms[tuple(m)] = rng.randrange(ring.p)
        else:
            terms[tuple(m)] = rng.randint(-6, 6)
    return Polynomial(ring, table, terms)


def test_criterion_11_kernel_library_properties():
    with _Timed("criterion 11: randomized kernel properties, 1000 cases each", 120):
        t3 = VariableTable(["x", "y", "z"])
        rng = random.Random(2024)

        # Ring axioms: 1000 random triples per ring.
        from ribetkit.exactpoly import ZZ

        for ring in (ZZ, QQ, GF(101)):
            for _ in range(1000):
                f = _random_poly(rng, ring, t3)
                g = _random_poly(rng, ring, t3)
                h = _random_poly(rng, ring, t3)
                assert (f + g) + h == f + (g + h)
                assert f * g == g * f
                assert f * (g + h) == f * g + f * h

        # Evaluation homomorphism: 1000 random (f, g, point).
        for _ in range(1000):
            f = _random_poly(rng, QQ, t3)
            g = _random_poly(rng, QQ, t3)
            point = {i: rng.randint(-5, 5) for i in range(3)}
            assert (f * g).evaluate(point) == f.evaluate(point) * g.evaluate(point)

        # Groebner S-pair reduction: at least 1000 verified S-pairs across
        # randomized small prime-field ideals.
        txy = VariableTable(["x", "y"])
        pairs_checked = 0
        while pairs_checked < 1000:
            gens = [_random_poly(rng, GF(101), txy, max_terms=3) for _ in range(2)]
            spec = IdealSpec([g for g in gens if not g.is_zero()])
            if not spec.generators:
                continue
            gb = buchberger(spec)
            assert gb.verify()
            k = len(gb.basis)
            pairs_checked += max(1, k * (k - 1) // 2)

        # Cayley-Hamilton: 1000 random polynomial 2x2 matrices.
        model = GenericModel(2)
        zero = Mat2.zero(QQ, model.table)
        for _ in range(1000):
            M = Mat2(
                _random_poly(rng, QQ, model.table, max_terms=2),
                _random_poly(rng, QQ, model.table, max_terms=2),
                _random_poly(rng, QQ, model.table, max_terms=2),
                _random_poly(rng, QQ, model.table, max_terms=2),
            )
            assert M * M - M.trace() * M + Mat2.scalar(M.det()) == zero
