"""2x2 matrices over polynomial rings: generic matrices, word products,
trace/determinant invariants, and the congruence checks that reduce
trace and determinant defects to ideal membership.

The model ring for the congruence checks carries one generic matrix
rho_i = [[a_i, b_i], [c_i, d_i]] per generator index plus free unit
symbols chi_i, psi_i.  The shifted matrices rhohat_i = rho_i + psi_i
play the role of actual group images; their characteristic polynomial
defects

    tr(prod rhohat) - (prod chi + prod psi)
    det(prod rhohat) - (prod chi)(prod psi)

generate the congruence ideal that every checked identity must land in.
chi and psi are ordinary polynomial variables, not localized units: no
check here ever divides by them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Mapping, Sequence

from .errors import StructuralError
from .exactpoly import DEGREVLEX, QQ, CoefficientRing, Polynomial, VariableTable
from .groebner import Budget, DEFAULT_BUDGET, IdealSpec, in_ideal


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix of polynomials sharing one ring and table."""

    a: Polynomial
    b: Polynomial
    c: Polynomial
    d: Polynomial

    def __post_init__(self):
        ref = self.a
        for e in (self.b, self.c, self.d):
            if e.ring != ref.ring or e.table != ref.table:
                raise StructuralError("matrix entries must share ring and table")

    @staticmethod
    def identity(ring, table) -> "Mat2":
        one = Polynomial.one(ring, table)
        zero = Polynomial.zero(ring, table)
        return Mat2(one, zero, zero, one)

    @staticmethod
    def zero(ring, table) -> "Mat2":
        z = Polynomial.zero(ring, table)
        return Mat2(z, z, z, z)

    @staticmethod
    def scalar(s: Polynomial) -> "Mat2":
        z = Polynomial.zero(s.ring, s.table)
        return Mat2(s, z, z, s)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __mul__(self, other) -> "Mat2":
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        return Mat2(self.a * other, self.b * other, self.c * other, self.d * other)

    __rmul__ = __mul__

    def add_scalar(self, s: Polynomial) -> "Mat2":
        return Mat2(self.a + s, self.b, self.c, self.d + s)

    def trace(self) -> Polynomial:
        return self.a + self.d

    def det(self) -> Polynomial:
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
        return (self.a, self.b, self.c, self.d)

    def map(self, fn: Callable[[Polynomial], Polynomial]) -> "Mat2":
        return Mat2(fn(self.a), fn(self.b), fn(self.c), fn(self.d))


@dataclass(frozen=True)
class Word:
    """Noncommuting monomial in generator letters.

    ``letters`` are generator indices (1-based); ``shifted`` optionally
    flags per letter that the matrix is to be shifted by a scalar before
    multiplying, as in (rho_i + nu_i) rho_j.
    """

    letters: tuple[int, ...]
    shifted: tuple[bool, ...] | None = None

    def __post_init__(self):
        if self.shifted is not None and len(self.shifted) != len(self.letters):
            raise StructuralError("one shift flag per letter required")

    def __len__(self):
        return len(self.letters)

    @staticmethod
    def parse(text: str) -> "Word":
        """Parse compact word syntax "X1.X2.X1"."""
        text = text.strip()
        if not text:
            return Word(())
        letters = []
        for piece in text.split("."):
            piece = piece.strip()
            if not piece.startswith("X"):
                raise StructuralError(f"bad word letter {piece!r}")
            letters.append(int(piece[1:]))
        return Word(tuple(letters))

    def __str__(self):
        return ".".join(f"X{i}" for i in self.letters)


def word_eval(
    w: Word,
    assign: Mapping[int, Mat2],
    shifts: Mapping[int, Polynomial] | None = None,
) -> Mat2:
    """Left-to-right product of the assigned matrices, each letter
    optionally shifted by its scalar.  The empty word is the identity."""
    missing = [i for i in w.letters if i not in assign]
    if missing:
        raise StructuralError(f"letters without matrix assignment: {missing}")
    if not w.letters:
        probe = next(iter(assign.values()))
        return Mat2.identity(probe.a.ring, probe.a.table)
    acc = None
    for pos, i in enumerate(w.letters):
        m = assign[i]
        if w.shifted and w.shifted[pos]:
            if shifts is None or i not in shifts:
                raise StructuralError(f"letter X{i} flagged shifted but no shift given")
            m = m.add_scalar(shifts[i])
        acc = m if acc is None else acc * m
    return acc


@dataclass
class MatrixInvariants:
    trace: Polynomial
    det: Polynomial
    charpoly: Polynomial
    charpoly_table: VariableTable


def invariants_of(m: Mat2) -> MatrixInvariants:
    """trace, determinant, and characteristic polynomial (in a table
    extended by a fresh variable for the charpoly indeterminate)."""
    tr = m.trace()
    det = m.det()
    table = m.a.table
    name = "x"
    while name in table.names:
        name = "_" + name
    ext = table.extend([name], ["param"])
    x = Polynomial.var(m.a.ring, ext, len(table))
    cp = x * x - tr.lift(ext) * x + det.lift(ext)
    return MatrixInvariants(tr, det, cp, ext)


# ---------------------------------------------------------------------------
# Model ring for congruence checks.

@dataclass
class GenericModel:
    """r generic 2x2 matrices with unit symbols chi_i, psi_i.

    Extra variables (for symbolic combination coefficients) can be
    requested at construction.
    """

    r: int
    ring: CoefficientRing = QQ
    extra: tuple[str, ...] = ()
    table: VariableTable = field(init=False)

    def __post_init__(self):
        names: list[str] = []
        roles: list[str] = []
        for i in range(1, self.r + 1):
            names += [f"a{i}", f"b{i}", f"c{i}", f"d{i}"]
            roles += ["a", "b", "c", "d"]
        for i in range(1, self.r + 1):
            names += [f"chi{i}", f"psi{i}"]
            roles += ["other", "other"]
        names += list(self.extra)
        roles += ["other"] * len(self.extra)
        self.table = VariableTable(names, roles)

    def _v(self, name: str) -> Polynomial:
        return Polynomial.var(self.ring, self.table, self.table.index(name))

    def rho(self, i: int) -> Mat2:
        """Generic matrix rho_i (the psi-shifted group image minus psi)."""
        return Mat2(self._v(f"a{i}"), self._v(f"b{i}"), self._v(f"c{i}"), self._v(f"d{i}"))

    def rhohat(self, i: int) -> Mat2:
        """rho_i + psi_i, the model of the actual group image."""
        return self.rho(i).add_scalar(self.psi(i))

    def chi(self, i: int) -> Polynomial:
        return self._v(f"chi{i}")

    def psi(self, i: int) -> Polynomial:
        return self._v(f"psi{i}")

    def nu(self, i: int) -> Polynomial:
        return self.psi(i) - self.chi(i)

    def extra_var(self, name: str) -> Polynomial:
        return self._v(name)

    def char_product(self, char: str, letters: Sequence[int]) -> Polynomial:
        acc = Polynomial.one(self.ring, self.table)
        for i in letters:
            acc = acc * (self.chi(i) if char == "chi" else self.psi(i))
        return acc

    def word_matrix(self, letters: Sequence[int], hat: bool = True) -> Mat2:
        acc = None
        for i in letters:
            m = self.rhohat(i) if hat else self.rho(i)
            acc = m if acc is None else acc * m
        if acc is None:
            return Mat2.identity(self.ring, self.table)
        return acc

    # -- congruence ideals ---------------------------------------------
    def trace_defect(self, letters: Sequence[int]) -> Polynomial:
        m = self.word_matrix(letters)
        return m.trace() - self.char_product("chi", letters) - self.char_product("psi", letters)

    def det_defect(self, letters: Sequence[int]) -> Polynomial:
        m = self.word_matrix(letters)
        return m.det() - self.char_product("chi", letters) * self.char_product("psi", letters)


def mat2_to_record(m: Mat2) -> dict:
    """4-entry record with entries in the polynomial text syntax."""
    from .exactpoly import to_text

    return {
        "a": to_text(m.a),
        "b": to_text(m.b),
        "c": to_text(m.c),
        "d": to_text(m.d),
    }


def v_map(w: Word, nu: Mapping[int, Polynomial]) -> Polynomial:
    """prod of (-nu_letter) over the word's letters.

    Defined only for nonempty words: the underlying algebra map is
    specified on polynomials with zero constant term.
    """
    if not w.letters:
        raise StructuralError("v_map is undefined on the empty word")
    acc = None
    for i in w.letters:
        if i not in nu:
            raise StructuralError(f"no nu value for letter X{i}")
        f = -nu[i]
        acc = f if acc is None else acc * f
    return acc


def trace_congruence_check(
    w: Word,
    r: int,
    budget: Budget = DEFAULT_BUDGET,
    model: GenericModel | None = None,
) -> bool:
    """Check tr(prod rho_j) - prod(chi_j - psi_j) lies in the ideal of
    trace defects of the nonempty subsequences of w.

    The generating subsequences mirror the telescoping expansion of the
    shifted product, so the cap on generator words is exactly the length
    of the word under test.
    """
    if not w.letters:
        raise StructuralError("trace congruence needs a nonempty word")
    if any(i < 1 or i > r for i in w.letters):
        raise StructuralError("word letters out of range for r generators")
    model = model or GenericModel(r)
    target = model.word_matrix(w.letters, hat=False).trace() - _char_diff_product(model, w.letters)
    gens = []
    positions = range(len(w.letters))
    for size in range(1, len(w.letters) + 1):
        for subset in combinations(positions, size):
            letters = [w.letters[p] for p in subset]
            gens.append(model.trace_defect(letters))
    return in_ideal(target, IdealSpec(gens, DEGREVLEX), budget)


def _char_diff_product(model: GenericModel, letters: Sequence[int]) -> Polynomial:
    acc = Polynomial.one(model.ring, model.table)
    for i in letters:
        acc = acc * (model.chi(i) - model.psi(i))
    return acc


def det_congruence_check(
    r: int,
    indices: Sequence[int],
    word_cap: int | None = None,
    budget: Budget = DEFAULT_BUDGET,
) -> bool:
    """Check det(sum_i c_i (rhohat_i - psi_i)) lies in the ideal of
    char-poly congruence defects of words of bounded length.

    The combination coefficients c_i are fresh symbolic variables.  The
    generator ideal holds tr and det defects of every word of length at
    most ``word_cap`` (default: the number of combined terms, minimum 1)
    in the shifted matrices, with chi and psi extended multiplicatively.
    """
    if any(i < 1 or i > r for i in indices):
        raise StructuralError("indices out of range")
    cap = word_cap if word_cap is not None else max(1, len(indices))
    coeff_names = tuple(f"c_{k}" for k in range(1, len(indices) + 1))
    model = GenericModel(r, extra=coeff_names)
    elem = Mat2.zero(model.ring, model.table)
    for name, i in zip(coeff_names, indices):
        c = model.extra_var(name)
        shifted = model.rhohat(i).add_scalar(-model.psi(i))
        elem = elem + c * shifted
    target = elem.det()
    if target.is_zero():
        return True
    alphabet = sorted(set(indices))
    gens = []
    for length in range(1, cap + 1):
        for letters in product(alphabet, repeat=length):
            gens.append(model.trace_defect(letters))
            gens.append(model.det_defect(letters))
    return in_ideal(target, IdealSpec(gens, DEGREVLEX), budget)
