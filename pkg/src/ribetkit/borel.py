"""Lower-triangular Borel action on generic-matrix variables.

The unipotent part acts by the substitution tau_x (conjugation of each
generic matrix by [[1,0],[x,1]]):

    a_i -> a_i + b_i x
    b_i -> b_i
    c_i -> c_i + (d_i - a_i) x - b_i x^2
    d_i -> d_i - b_i x

with x a fresh parameter appended to the table and every variable not
tagged a/b/c/d held fixed.  The torus part is handled entirely by the
weight grading of exactpoly (b-tagged weight +1, c-tagged -1): every
torus-invariance question used here reduces to isobarity of weight 0,
so no Laurent polynomials are ever needed.  Full Borel invariance is
asserted as the conjunction tau-fixed + weight 0, since the group is
generated by its torus and lower unipotent one-parameter subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import StructuralError
from .exactpoly import Polynomial, VariableTable
from .groebner import Budget, DEFAULT_BUDGET, GroebnerBasis, IdealSpec, buchberger, in_ideal, normal_form, reduce_by


@dataclass
class TauAction:
    """Substitution action of the unipotent tau_x on one variable table.

    The parameter variable is appended to the base table (always last, so
    ideal membership in I.R[x] can reuse the base monomial order).
    """

    base: VariableTable
    param_name: str = "x"
    table: VariableTable = field(init=False)
    param: int = field(init=False)

    def __post_init__(self):
        name = self.param_name
        while name in self.base.names:
            name = "_" + name
        self.table = self.base.extend([name], ["param"])
        self.param = len(self.base)

    def _quadruple(self, ring, suffix: str) -> dict[str, Polynomial]:
        """The (a, b, c, d) variables sharing a name suffix; a deleted
        entry (name absent from the table) reads as 0."""
        out = {}
        for tag in "abcd":
            name = tag + suffix
            if name in self.base._index:
                out[tag] = Polynomial.var(ring, self.table, self.base.index(name))
            else:
                out[tag] = Polynomial.zero(ring, self.table)
        return out

    def _maps(self, ring) -> dict[int, Polynomial]:
        x = Polynomial.var(ring, self.table, self.param)
        mapping: dict[int, Polynomial] = {}
        for i, role in enumerate(self.base.roles):
            if role not in ("a", "b", "c", "d"):
                continue
            q = self._quadruple(ring, self.base.names[i][1:])
            a, b, c, d = q["a"], q["b"], q["c"], q["d"]
            if role == "a":
                mapping[i] = a + b * x
            elif role == "b":
                mapping[i] = b
            elif role == "c":
                mapping[i] = c + (d - a) * x - b * x * x
            else:
                mapping[i] = d - b * x
        return mapping

    def apply(self, f: Polynomial) -> Polynomial:
        """tau_x(f), in the x-extended table."""
        if f.table == self.base:
            f = f.lift(self.table)
        elif f.table != self.table:
            raise StructuralError("polynomial does not live in this action's table")
        return f.substitute(self._maps(f.ring))

    def x_var(self, ring) -> Polynomial:
        return Polynomial.var(ring, self.table, self.param)


def apply_tau(f: Polynomial, action: TauAction | None = None) -> Polynomial:
    """Convenience wrapper: act on f by tau_x for a fresh parameter x."""
    action = action or TauAction(f.table)
    return action.apply(f)


def adjoint_quadruple_check(
    A: Polynomial, B: Polynomial, C: Polynomial, D: Polynomial,
    action: TauAction | None = None,
) -> bool:
    """True iff (A, B, C, D) transforms exactly like the conjugation
    action on a generic 2x2 matrix:

        tau_x A = A + B x,   tau_x B = B,
        tau_x C = C + (D - A) x - B x^2,   tau_x D = D - B x,

    together with torus weights (0, +1, -1, 0).
    """
    table = A.table
    for f in (B, C, D):
        if f.table != table or f.ring != A.ring:
            raise StructuralError("quadruple entries must share ring and table")
    act = action or TauAction(table)
    x = act.x_var(A.ring)
    ext = act.table
    Ae, Be, Ce, De = (f.lift(ext) for f in (A, B, C, D))
    if act.apply(A) != Ae + Be * x:
        return False
    if act.apply(B) != Be:
        return False
    if act.apply(C) != Ce + (De - Ae) * x - Be * x * x:
        return False
    if act.apply(D) != De - Be * x:
        return False
    weights = (A.torus_weight(), B.torus_weight(), C.torus_weight(), D.torus_weight())
    return weights == (0, 1, -1, 0)


def invariant_mod(
    f: Polynomial,
    ideal: IdealSpec,
    budget: Budget = DEFAULT_BUDGET,
    gb: GroebnerBasis | None = None,
    action: TauAction | None = None,
) -> bool:
    """Borel invariance of f modulo an ideal.

    Checks tau_x(f) - f in I.R[x] (membership in the extended ring,
    generated by the lifted generators of I) and that f reduces modulo I
    to an isobaric normal form of torus weight 0.
    """
    act = action or TauAction(f.table)
    diff = act.apply(f) - f.lift(act.table)
    if not diff.is_zero():
        lifted = [g.lift(act.table) for g in ideal.generators]
        if not lifted:
            return False
        if not in_ideal(diff, IdealSpec(lifted, ideal.order), budget):
            return False
    if ideal.generators:
        gb = gb or buchberger(ideal, budget)
        nf = normal_form(f, gb, budget)
    else:
        nf = f
    return nf.torus_weight() == 0


def tau_fixed_mod(
    f: Polynomial,
    ideal: IdealSpec,
    budget: Budget = DEFAULT_BUDGET,
    action: TauAction | None = None,
    gb: GroebnerBasis | None = None,
) -> bool:
    """Just the unipotent half of invariant_mod: tau_x(f) - f in I.R[x]."""
    act = action or TauAction(f.table)
    diff = act.apply(f) - f.lift(act.table)
    if diff.is_zero():
        return True
    lifted = [g.lift(act.table) for g in ideal.generators]
    if not lifted:
        return False
    spec = IdealSpec(lifted, ideal.order)
    if reduce_by(diff, spec.generators, spec.order, budget).is_zero():
        return True
    if gb is not None:
        lifted_gb = GroebnerBasis(tuple(g.lift(act.table) for g in gb.basis), gb.order, spec)
        return lifted_gb.contains(diff if diff.ring == lifted_gb.basis[0].ring else diff.change_ring(lifted_gb.basis[0].ring), budget)
    return in_ideal(diff, spec, budget)
