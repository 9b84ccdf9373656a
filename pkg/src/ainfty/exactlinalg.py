"""Exact scalars over QQ and GF(p), and sparse linear algebra.

Vectors are plain dicts ``{index: scalar}`` with no stored zeros.  Matrices are
:class:`SparseMatrix` values.  Elimination is row-incremental and keeps the
pivot rows in reduced echelon form, so every output (rank, kernel basis,
particular solution) is a deterministic function of the input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

Vector = Dict[int, object]


class FieldMismatchError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class NotAModuleError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """The ground field: ``Field()`` is QQ, ``Field("prime", p)`` is GF(p)."""

    kind: str = "rationals"
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "rationals":
            if self.p is not None:
                raise ValueError("rationals take no modulus")
        elif self.kind == "prime":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"GF(p) needs a prime p, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __call__(self, x) -> object:
        """Coerce an int / Fraction / string into canonical form."""
        if isinstance(x, str):
            x = Fraction(x.replace("−", "-"))
        if self.p is None:
            return Fraction(x)
        x = Fraction(x)
        num = x.numerator % self.p
        den = x.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
        return num * pow(den, -1, self.p) % self.p

    def reduce(self, x):
        return x if self.p is None else x % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def to_str(self, x) -> str:
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x) % self.p)

    def __str__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text in ("QQ", "Q", "rationals"):
            return cls()
        if text.startswith("GF(") and text.endswith(")"):
            return cls("prime", int(text[3:-1]))
        raise ValueError(f"cannot parse field {text!r}")


QQ = Field()


def GF(p: int) -> Field:
    return Field("prime", p)


# --------------------------------------------------------------- vectors

def vec_axpy(F: Field, y: Vector, a, x: Vector) -> None:
    """In place ``y += a * x``."""
    for k, v in x.items():
        s = F.reduce(y.get(k, 0) + a * v)
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def vec_scale(F: Field, a, x: Vector) -> Vector:
    if not a:
        return {}
    return {k: F.reduce(a * v) for k, v in x.items()}


def vec_add(F: Field, *xs: Vector) -> Vector:
    out: Vector = {}
    for x in xs:
        vec_axpy(F, out, 1, x)
    return out


# --------------------------------------------------------------- matrices

@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Dict[Tuple[int, int], object] = field(default_factory=dict)
    field: Field = QQ

    def __post_init__(self):
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise DimensionMismatchError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            if not v:
                raise ValueError("stored zero entry")

    @classmethod
    def from_dense(cls, rows: List[List], F: Field = QQ, ncols: Optional[int] = None) -> "SparseMatrix":
        nrows = len(rows)
        nc = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        ent = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = F(v)
                if v:
                    ent[(i, j)] = v
        return cls(nrows, nc, ent, F)

    @classmethod
    def from_columns(cls, nrows: int, columns: List[Vector], F: Field = QQ) -> "SparseMatrix":
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    ent[(i, j)] = v
        return cls(nrows, len(columns), ent, F)

    def row_dicts(self) -> List[Vector]:
        out: List[Vector] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def col_dicts(self) -> List[Vector]:
        """Columns as dicts (cached; callers must not mutate them)."""
        cached = self.__dict__.get("_cols")
        if cached is None:
            cached = [dict() for _ in range(self.cols)]
            for (r, c), v in self.entries.items():
                cached[c][r] = v
            object.__setattr__(self, "_cols", cached)
        return cached

    def to_dense(self) -> List[List]:
        d = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            d[r][c] = v
        return d

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}, self.field)

    def apply(self, v: Vector) -> Vector:
        if any(not (0 <= k < self.cols) for k in v):
            raise DimensionMismatchError("vector index out of range")
        F = self.field
        cols = self.col_dicts()
        out: Vector = {}
        for k, a in v.items():
            vec_axpy(F, out, a, cols[k])
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same_field(self, other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        F = self.field
        rows = self.row_dicts()
        orows = other.row_dicts()
        ent = {}
        for i, row in enumerate(rows):
            acc: Vector = {}
            for k, a in row.items():
                vec_axpy(F, acc, a, orows[k])
            for j, v in acc.items():
                ent[(i, j)] = v
        return SparseMatrix(self.rows, other.cols, ent, F)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("shape mismatch in sum")
        F = self.field
        ent = dict(self.entries)
        for k, v in other.entries.items():
            s = F.reduce(ent.get(k, 0) + v)
            if s:
                ent[k] = s
            else:
                ent.pop(k, None)
        return SparseMatrix(self.rows, self.cols, ent, F)

    def scale(self, a) -> "SparseMatrix":
        F = self.field
        a = F(a)
        if not a:
            return SparseMatrix(self.rows, self.cols, {}, F)
        return SparseMatrix(self.rows, self.cols, {k: F.reduce(a * v) for k, v in self.entries.items()}, F)

    def is_zero(self) -> bool:
        return not self.entries

    @classmethod
    def identity(cls, n: int, F: Field = QQ) -> "SparseMatrix":
        return cls(n, n, {(i, i): F(1) for i in range(n)}, F)

    @classmethod
    def zero(cls, rows: int, cols: int, F: Field = QQ) -> "SparseMatrix":
        return cls(rows, cols, {}, F)


def _check_same_field(*ms: SparseMatrix) -> None:
    fields = {m.field for m in ms}
    if len(fields) > 1:
        raise FieldMismatchError(f"mixed fields: {sorted(map(str, fields))}")


# --------------------------------------------------------------- elimination

class Echelon:
    """Incrementally built reduced row echelon form.

    Rows are added one at a time; pivot rows stay fully reduced against each
    other.  ``add`` returns the residual of the new row (empty if dependent).
    """

    def __init__(self, F: Field):
        self.F = F
        self.pivots: Dict[int, Vector] = {}  # pivot column -> row with 1 there

    def reduce(self, row: Vector) -> Vector:
        F = self.F
        r = dict(row)
        for c in [c for c in r if c in self.pivots]:
            a = r.get(c)
            if a:
                vec_axpy(F, r, F.reduce(-a), self.pivots[c])
        return r

    def add(self, row: Vector) -> Vector:
        F = self.F
        r = self.reduce(row)
        if not r:
            return r
        lead = min(r)
        inv = F.inv(r[lead])
        r = {k: F.reduce(v * inv) for k, v in r.items()}
        for prow in self.pivots.values():
            a = prow.get(lead)
            if a:
                vec_axpy(F, prow, F.reduce(-a), r)
        self.pivots[lead] = r
        return r

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def contains(self, row: Vector) -> bool:
        return not self.reduce(row)


def rref(m: SparseMatrix) -> Tuple[List[int], Dict[int, Vector]]:
    ech = Echelon(m.field)
    for row in m.row_dicts():
        if row:
            ech.add(row)
    return sorted(ech.pivots), ech.pivots


def rank(m: SparseMatrix) -> int:
    return len(rref(m)[0])


def kernel_from_rref(ncols: int, pivots: Dict[int, Vector], F: Field) -> List[Vector]:
    free = [j for j in range(ncols) if j not in pivots]
    # column view of the non-pivot part of the pivot rows
    by_free: Dict[int, Dict[int, object]] = {}
    for pc, row in pivots.items():
        for j, v in row.items():
            if j != pc:
                by_free.setdefault(j, {})[pc] = v
    basis = []
    for f in free:
        v: Vector = {f: F(1)}
        for pc, a in by_free.get(f, {}).items():
            v[pc] = F.reduce(-a)
        basis.append(v)
    return basis


def rank_kernel(m: SparseMatrix) -> Tuple[int, List[Vector]]:
    """Rank and a reduced-echelon kernel basis (one vector per free column)."""
    piv, rows = rref(m)
    return len(piv), kernel_from_rref(m.cols, rows, m.field)


def solve(m: SparseMatrix, rhs: Vector) -> Optional[Vector]:
    """Some ``x`` with ``m x = rhs`` (free variables zero), or ``None``."""
    if any(not (0 <= k < m.rows) for k in rhs):
        raise DimensionMismatchError("rhs length does not match rows")
    F = m.field
    aug = m.cols
    ech = Echelon(F)
    rows = m.row_dicts()
    for i, row in enumerate(rows):
        r = dict(row)
        b = rhs.get(i, 0)
        if b:
            r[aug] = F(b) if not isinstance(b, (int, Fraction)) else F.reduce(b)
        if r:
            ech.add(r)
    if aug in ech.pivots:
        return None
    x: Vector = {}
    for pc, row in ech.pivots.items():
        b = row.get(aug, 0)
        if b:
            x[pc] = b
    return x


def image_basis(m: SparseMatrix) -> List[Vector]:
    """Echelon basis of the column space."""
    piv, rows = rref(m.transpose())
    return [rows[c] for c in piv]


# --------------------------------------------------------------- u-modules

@dataclass(frozen=True)
class UModuleReport:
    dim: int
    num_blocks: int
    block_multiplicities: Dict[int, int]
    free_over_trunc: bool
    n: int

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "n": self.n,
            "num_blocks": self.num_blocks,
            "blocks": {str(s): c for s, c in sorted(self.block_multiplicities.items())},
            "flat": self.free_over_trunc,
        }


def nilpotent_module_structure(u: SparseMatrix, n: int) -> UModuleReport:
    """Jordan profile of a nilpotent ``u`` with ``u**n == 0`` as a k[u]/(u^n)-module."""
    if u.rows != u.cols:
        raise DimensionMismatchError("u must be square")
    if n < 1:
        raise ValueError("n must be positive")
    dim = u.rows
    ranks = [dim]
    power = SparseMatrix.identity(dim, u.field)
    for _ in range(n):
        power = power @ u
        ranks.append(rank(power))
    if ranks[n] != 0:
        raise NotAModuleError(f"u^{n} != 0 (rank {ranks[n]})")
    ge = {s: ranks[s - 1] - ranks[s] for s in range(1, n + 1)}
    ge[n + 1] = 0
    mult = {s: ge[s] - ge[s + 1] for s in range(1, n + 1) if ge[s] - ge[s + 1]}
    num_blocks = ge[1]
    return UModuleReport(dim, num_blocks, mult, dim == n * num_blocks, n)
