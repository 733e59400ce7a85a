"""Finite-field specializations: generation invariants and the four
numeric checks."""

import pytest

from ribetkit.errors import StructuralError
from ribetkit.exactpoly import GF
from ribetkit.linalg import rank
from ribetkit.ribet.shapes import RibetShape, RowSpec, shape_r2_two_type2, shape_specialization
from ribetkit.ribet.specialize import (
    _coefficient_matrix,
    check_specialized,
    generate_specialization,
    perturb_alpha,
)

P = 10007


def test_generation_requires_four_free_generators():
    with pytest.raises(StructuralError):
        generate_specialization(shape_r2_two_type2(), 0, P)


def test_generated_instance_invariants():
    sh = shape_specialization()
    inst = generate_specialization(sh, 0, P)
    # Shifted images span the full matrix algebra.
    assert rank(_coefficient_matrix(inst), GF(P)) == 4
    # Lower-triangular at v0: the TypeIII generator has b = 0.
    for g in sh.b_v0():
        assert inst.rho_images[g][1] % P == 0
    # Local shape at the P-place: M_v conjugates to lower triangular.
    v = sh.p_places[0]
    data = inst.places[v]
    for g in sh.b_set(v):
        m = inst.rho_images[g]
        A, B, C, D = data.M
        # rho(g) M = M lower means the upper-right of M^{-1} rho(g) M is 0;
        # equivalently D * b(g) = B * (xi - psi - a(g)) (the e:db relation).
        b_entry = inst.rho_shift(g)[1]
        a_entry = inst.rho_shift(g)[0]
        assert (D * b_entry - B * (inst.x_val(g) - a_entry)) % P == 0
    # Relation rows hold exactly.
    coeff = _coefficient_matrix(inst)
    for eps in inst.eps:
        for i in range(4):
            assert sum(coeff[i][j] * eps[j] for j in range(sh.r)) % P == 0
    for (i, j), delta in inst.delta.items():
        lhs_mat = inst.rho_shift(i)
        import ribetkit.ribet.specialize as sp

        lhs = sp._m2_mul(
            sp._m2_add_scalar(inst.rho_shift(i), inst.nu(i), P), inst.rho_shift(j), P
        )
        for comp in range(4):
            rhs = sum(delta[k] * inst.rho_shift(k + 1)[comp] for k in range(sh.r)) % P
            assert lhs[comp] % P == rhs


def test_twenty_seeds_all_checks_pass():
    sh = shape_specialization()
    for seed in range(20):
        inst = generate_specialization(sh, seed, P)
        checks = check_specialized(inst)
        assert checks.all_pass(), (seed, checks)


def test_perturbed_instance_fails_det_eprime():
    sh = shape_specialization()
    inst = generate_specialization(sh, 0, P)
    bad = check_specialized(perturb_alpha(inst))
    assert not bad.detEprime_zero
    # Block structure is untouched, so the factorization still holds.
    assert bad.detE_factorization


def test_replay_determinism():
    sh = shape_specialization()
    a = generate_specialization(sh, 5, P)
    b = generate_specialization(sh, 5, P)
    assert a.E == b.E and a.Eprime == b.Eprime
    assert a.rho_images == b.rho_images and a.chi == b.chi and a.psi == b.psi
    c = generate_specialization(sh, 6, P)
    assert c.E != a.E


def test_no_place_shape_factorization_reduces_to_det_d():
    # A TypeI row needs a nonzero kernel, so r must exceed the spanning
    # dimension 4.
    sh = RibetShape(
        name="free-only",
        r=5,
        rows=(
            RowSpec.type_i(),
            RowSpec.type_ii(1, 2),
            RowSpec.type_ii(2, 3),
            RowSpec.type_ii(3, 4),
            RowSpec.type_ii(4, 5),
        ),
    )
    inst = generate_specialization(sh, 1, P)
    checks = check_specialized(inst)
    assert checks.all_pass()
    assert inst.E == inst.D  # t = s = 0


def test_small_prime_works():
    sh = shape_specialization()
    inst = generate_specialization(sh, 2, 101)
    assert check_specialized(inst).all_pass()


def test_instance_record_replay():
    import json

    sh = shape_specialization()
    a = generate_specialization(sh, 9, P).to_record()
    b = generate_specialization(sh, 9, P).to_record()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["E"] and a["delta"]


def test_four_free_generators_no_places():
    # The minimal spanning situation: exactly four generators, no places,
    # only TypeII rows; the shifted images must fill the matrix algebra.
    sh = RibetShape(
        name="r4-free",
        r=4,
        rows=(
            RowSpec.type_ii(1, 2),
            RowSpec.type_ii(2, 1),
            RowSpec.type_ii(3, 4),
            RowSpec.type_ii(4, 3),
        ),
    )
    inst = generate_specialization(sh, 0, P)
    assert rank(_coefficient_matrix(inst), GF(P)) == 4
    assert check_specialized(inst).all_pass()
