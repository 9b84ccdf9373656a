"""A∞-algebras stored in shifted form, morphisms, and the standard constructions.

An algebra on the graded space ``A`` keeps operations ``b_n: W^{⊗n} -> W`` of
degree +1 on ``W = A[1]``.  Basis vectors of ``A`` and ``W`` share indices; the
classical operations are recovered by ``m_n = s^{-1} b_n s^{⊗n}`` where the
sign is :func:`graded.decalage_sign` of the shifted input degrees.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .coalgebra import Chain, Coderivation, extend_coderivation, taylor_of_square_by_composition
from .exactlinalg import (QQ, Echelon, Field, SparseMatrix, Vector, kernel_from_rref, rank, rref, solve,
                          vec_axpy)
from .graded import (GradedSpace, MultilinearMap, decalage_sign, reversal_sign, words)


class UnsupportedFieldError(ValueError):
    pass


class NotUnitalError(ValueError):
    pass


# --------------------------------------------------------------- décalage

def m_to_b(m: MultilinearMap, W: GradedSpace) -> MultilinearMap:
    """``b_n = s ∘ m_n ∘ (s^{-1})^{⊗n}`` on index tables."""
    F = m.field
    ent = {}
    for key, vec in m.entries.items():
        sign = decalage_sign([W.degrees[i] for i in key])
        ent[key] = {o: F.reduce(sign * c) for o, c in vec.items()}
    # degree in W: (2 - n) + n - 1 ... shifting all slots by one gives +1 for m_n
    return MultilinearMap(W, W, m.arity, m.degree + m.arity - 1, ent, F)


def b_to_m(b: MultilinearMap, A: GradedSpace) -> MultilinearMap:
    F = b.field
    W = b.source
    ent = {}
    for key, vec in b.entries.items():
        sign = decalage_sign([W.degrees[i] for i in key])
        ent[key] = {o: F.reduce(sign * c) for o, c in vec.items()}
    return MultilinearMap(A, A, b.arity, b.degree - b.arity + 1, ent, F)


# --------------------------------------------------------------- algebras

@dataclass(frozen=True)
class AInftyAlgebra:
    A: GradedSpace
    ops: Dict[int, MultilinearMap]
    field: Field = QQ
    strict_unit: Optional[str] = None
    name: str = "A"
    pairing: Optional[Dict[Tuple[int, int], object]] = None
    pairing_degree: Optional[int] = None

    def __post_init__(self):
        W = self.W
        for n, b in self.ops.items():
            if b.arity != n or b.source != W or b.target != W:
                raise ValueError(f"op b_{n} has the wrong shape")
            if not b.is_zero() and b.degree != 1:
                raise ValueError(f"b_{n} must have degree +1, got {b.degree}")
            if n < 1:
                raise ValueError("arity-0 operation not allowed")
        object.__setattr__(self, "ops", {n: b for n, b in sorted(self.ops.items()) if not b.is_zero()})
        if self.strict_unit is not None:
            self.A.index(self.strict_unit)

    @property
    def W(self) -> GradedSpace:
        return self.A.shift(1)

    @property
    def dim(self) -> int:
        return self.A.dim

    @property
    def n_max(self) -> int:
        return max(self.ops, default=1)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.A.names

    def op(self, n: int) -> MultilinearMap:
        return self.ops.get(n) or MultilinearMap.zero(self.W, self.W, n, 1, self.field)

    def m(self, n: int) -> MultilinearMap:
        return b_to_m(self.op(n), self.A)

    def coderivation(self, L: int = 6) -> Coderivation:
        taylor = dict(self.ops) or {1: MultilinearMap.zero(self.W, self.W, 1, 1, self.field)}
        return extend_coderivation(taylor, L, degree=1)

    @classmethod
    def from_m(cls, A: GradedSpace, m_ops: Dict[int, MultilinearMap], F: Field = QQ, **kw) -> "AInftyAlgebra":
        W = A.shift(1)
        return cls(A, {n: m_to_b(m, W) for n, m in m_ops.items()}, F, **kw)

    @classmethod
    def from_tables(cls, basis: Sequence[Tuple[str, int]], tables: Dict[int, Dict], F: Field = QQ,
                    convention: str = "m", grading: str = "Z", **kw) -> "AInftyAlgebra":
        """Build from ``{n: {(name, ...): {name: coeff}}}`` tables."""
        A = GradedSpace.from_pairs(basis, grading)
        W = A.shift(1)
        maps = {}
        for n, table in tables.items():
            ent = {}
            for key, vec in table.items():
                k = tuple(A.index(x) for x in key)
                v = {A.index(o): F(c) for o, c in vec.items() if F(c)}
                if v:
                    ent[k] = v
            if convention == "m":
                maps[int(n)] = MultilinearMap(A, A, int(n), 2 - int(n), ent, F)
            else:
                maps[int(n)] = MultilinearMap(W, W, int(n), 1, ent, F)
        if convention == "m":
            return cls.from_m(A, maps, F, **kw)
        return cls(A, maps, F, **kw)

    def tables(self, convention: str = "m") -> Dict[int, Dict]:
        out = {}
        for n in self.ops:
            mp = self.m(n) if convention == "m" else self.op(n)
            out[n] = {tuple(self.names[i] for i in k): {self.names[o]: c for o, c in v.items()}
                      for k, v in mp.entries.items()}
        return out

    def with_field(self, F: Field) -> "AInftyAlgebra":
        """Reduce all structure constants into another field."""
        tabs = self.tables("b")
        return AInftyAlgebra.from_tables(
            list(zip(self.A.names, self.A.degrees)),
            {n: {k: {o: F(c) for o, c in v.items()} for k, v in t.items()} for n, t in tabs.items()},
            F, convention="b", grading=self.A.grading, strict_unit=self.strict_unit, name=self.name)


@dataclass
class RelationReport:
    passed: bool
    L: int
    first_failing_arity: Optional[int] = None
    witness: Optional[Tuple[str, ...]] = None
    defect: Optional[Dict[str, str]] = None

    def as_dict(self) -> dict:
        return {"pass": self.passed, "L": self.L, "first_failing_arity": self.first_failing_arity,
                "witness": list(self.witness) if self.witness else None, "defect": self.defect}


def _first_failure(sq: Dict[int, MultilinearMap]):
    for n in sorted(sq):
        if not sq[n].is_zero():
            key = min(sq[n].entries)
            return n, key, sq[n].entries[key]
    return None


def check_relations(A: AInftyAlgebra, L: int = 6) -> RelationReport:
    """Does ``Q∘Q`` vanish on all words of length ``<= L``?"""
    if not A.ops:
        return RelationReport(True, L)
    sq = taylor_of_square_by_composition(A.ops, L)
    fail = _first_failure(sq)
    if fail is None:
        return RelationReport(True, L)
    n, key, vec = fail
    F = A.field
    return RelationReport(False, L, n, tuple(A.names[i] for i in key),
                          {A.names[o]: F.to_str(c) for o, c in sorted(vec.items())})


def check_strict_unit(A: AInftyAlgebra, unit: Optional[str] = None, n_max: Optional[int] = None) -> bool:
    """Strict unit identities on every basis tuple up to ``n_max``."""
    unit = unit if unit is not None else A.strict_unit
    if unit is None:
        return False
    u = A.A.index(unit)
    if A.A.degrees[u] != 0:
        return False
    F = A.field
    n_max = n_max if n_max is not None else max(A.n_max, 2)
    m2 = A.m(2)
    for v in range(A.dim):
        if m2(u, v) != {v: F(1)} or m2(v, u) != {v: F(1)}:
            return False
    for n, b in A.ops.items():
        if n == 2 or n > n_max:
            continue
        if any(u in key for key in b.entries):
            return False
    return True


# --------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class AInftyMorphism:
    source: AInftyAlgebra
    target: AInftyAlgebra
    taylor: Dict[int, MultilinearMap]

    def __post_init__(self):
        for n, f in self.taylor.items():
            if f.arity != n or f.source != self.source.W or f.target != self.target.W:
                raise ValueError(f"f_{n} has the wrong shape")
            if not f.is_zero() and f.degree != 0:
                raise ValueError(f"f_{n} must have degree 0 in shifted form, got {f.degree}")
        object.__setattr__(self, "taylor", {n: f for n, f in sorted(self.taylor.items()) if not f.is_zero()})

    def component(self, n: int) -> MultilinearMap:
        return self.taylor.get(n) or MultilinearMap.zero(self.source.W, self.target.W, n, 0, self.source.field)

    def apply_word(self, word: Tuple[int, ...]) -> Chain:
        """The induced coalgebra map ``T(W_A) -> T(W_B)`` on one word."""
        return _coalgebra_map(self.taylor, word, self.source.field)

    @classmethod
    def identity(cls, A: AInftyAlgebra) -> "AInftyMorphism":
        return cls(A, A, {1: MultilinearMap.identity(A.W, A.field)})

    @classmethod
    def from_linear(cls, A: AInftyAlgebra, B: AInftyAlgebra, table: Dict[str, Dict[str, object]]) -> "AInftyMorphism":
        F = A.field
        ent = {}
        for x, vec in table.items():
            v = {B.A.index(o): F(c) for o, c in vec.items() if F(c)}
            if v:
                ent[(A.A.index(x),)] = v
        return cls(A, B, {1: MultilinearMap(A.W, B.W, 1, 0, ent, F)})


def _coalgebra_map(taylor: Dict[int, MultilinearMap], word: Tuple[int, ...], F: Field) -> Chain:
    memo: Dict[int, Chain] = {len(word): {(): F(1)}}

    def from_pos(i: int) -> Chain:
        if i in memo:
            return memo[i]
        out: Chain = {}
        for n, f in taylor.items():
            if i + n > len(word):
                continue
            vec = f.entries.get(word[i:i + n])
            if not vec:
                continue
            rest = from_pos(i + n)
            for o, c in vec.items():
                for w, d in rest.items():
                    key = (o,) + w
                    s = F.reduce(out.get(key, 0) + c * d)
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
        memo[i] = out
        return out

    return from_pos(0)


@dataclass
class MorphismReport:
    passed: bool
    L: int
    first_failing_length: Optional[int] = None
    witness: Optional[Tuple[str, ...]] = None
    explicit_formula_agrees: Optional[bool] = None
    explicit_discrepancies: List[Tuple[str, ...]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"pass": self.passed, "L": self.L, "first_failing_length": self.first_failing_length,
                "witness": list(self.witness) if self.witness else None,
                "explicit_formula_agrees": self.explicit_formula_agrees,
                "explicit_discrepancies": [list(w) for w in self.explicit_discrepancies]}


def check_morphism(f: AInftyMorphism, L: int = 6, cross_check: bool = True) -> MorphismReport:
    """``F∘Q_A = Q_B∘F`` on all words of length ``<= L``."""
    A, B = f.source, f.target
    F = A.field
    QA, QB = A.coderivation(L), B.coderivation(L)
    report = MorphismReport(True, L)
    for n in range(1, L + 1):
        for w in words(A.dim, n):
            lhs: Chain = {}
            for k, c in QA.apply(w).items():
                vec_axpy(F, lhs, c, f.apply_word(k))
            rhs = QB.apply_chain(f.apply_word(w))
            if lhs != rhs:
                report.passed = False
                report.first_failing_length = n
                report.witness = tuple(A.names[i] for i in w)
                break
        if not report.passed:
            break
    if cross_check:
        bad = explicit_morphism_discrepancies(f, min(L, 3))
        report.explicit_formula_agrees = not bad
        report.explicit_discrepancies = bad
    return report


def explicit_morphism_discrepancies(f: AInftyMorphism, n_max: int = 3) -> List[Tuple[str, ...]]:
    """Evaluate the classical-convention morphism equations with the printed
    ``ε_s`` and ``γ_i`` signs; return input tuples where the two sides differ."""
    A, B = f.source, f.target
    F = A.field
    degA = A.A.degrees
    fm = {n: b_to_m_morphism(f.component(n), A.A, B.A) for n in range(1, n_max + 1)}
    mA = {n: A.m(n) for n in range(1, n_max + 1)}
    mB = {n: B.m(n) for n in range(1, n_max + 1)}
    bad = []
    for n in range(1, n_max + 1):
        for a in words(A.dim, n):
            lhs: Vector = {}
            for i in range(1, n + 1):
                for cuts in itertools.combinations(range(1, n), i - 1):
                    ls = (0,) + cuts + (n,)
                    gamma = 0
                    for p in range(1, i):
                        gamma += (i - p) * (ls[p] - ls[p - 1] - 1)
                        nu = sum(1 - ls[m] + ls[m - 1] for m in range(p + 1, i + 1))
                        gamma += nu * sum(degA[a[q]] for q in range(ls[p - 1], ls[p]))
                    vecs = [fm[ls[p] - ls[p - 1]](*a[ls[p - 1]:ls[p]]) for p in range(1, i + 1)]
                    for combo in itertools.product(*[sorted(v.items()) for v in vecs]):
                        key = tuple(k for k, _ in combo)
                        coef = 1
                        for _, c in combo:
                            coef *= c
                        out = mB[i](*key) if i in mB else {}
                        vec_axpy(F, lhs, F.reduce((-1) ** (gamma % 2) * coef), out)
            rhs: Vector = {}
            for s in range(1, n + 1):
                r = n + 1 - s
                for j in range(1, s + 1):
                    eps = r * sum(degA[a[p]] for p in range(j - 1)) + j - 1 + r * (s - j)
                    inner = mA[r](*a[j - 1:j - 1 + r])
                    for o, c in inner.items():
                        key = a[:j - 1] + (o,) + a[j - 1 + r:]
                        vec_axpy(F, rhs, F.reduce((-1) ** (eps % 2) * c), fm[s](*key))
            if lhs != rhs:
                bad.append(tuple(A.names[x] for x in a))
    return bad


def b_to_m_morphism(fb: MultilinearMap, A: GradedSpace, B: GradedSpace) -> MultilinearMap:
    F = fb.field
    ent = {}
    for key, vec in fb.entries.items():
        sign = decalage_sign([fb.source.degrees[i] for i in key])
        ent[key] = {o: F.reduce(sign * c) for o, c in vec.items()}
    return MultilinearMap(A, B, fb.arity, 1 - fb.arity, ent, F)


def compose_morphisms(g: AInftyMorphism, f: AInftyMorphism) -> AInftyMorphism:
    """Taylor coefficients of ``G∘F``."""
    if f.target.A != g.source.A or f.target.ops != g.source.ops:
        raise ValueError("target of f is not the source of g")
    A, C = f.source, g.target
    F = A.field
    n_top = max(f.taylor, default=1) * max(g.taylor, default=1)
    out = {}
    for n in range(1, n_top + 1):
        ent = {}
        for w in words(A.dim, n):
            acc: Vector = {}
            for u, c in f.apply_word(w).items():
                gk = g.taylor.get(len(u))
                if gk is not None:
                    vec_axpy(F, acc, c, gk(*u))
            if acc:
                ent[w] = acc
        out[n] = MultilinearMap(A.W, C.W, n, 0, ent, F)
    return AInftyMorphism(A, C, out)


# --------------------------------------------------------------- constructions

def opposite(A: AInftyAlgebra) -> AInftyAlgebra:
    """``b^op_n(x_1..x_n) = ±b_n(x_n..x_1)`` with the Koszul sign of the reversal
    (on degree-0 inputs this is ``m^op_n = (-1)^{n(n-1)/2} m_n`` reversed)."""
    W, F = A.W, A.field
    ops = {}
    for n, b in A.ops.items():
        ent = {}
        for key, vec in b.entries.items():
            rkey = key[::-1]
            sign = reversal_sign([W.degrees[i] for i in key])
            ent[rkey] = {o: F.reduce(sign * c) for o, c in vec.items()}
        ops[n] = MultilinearMap(W, W, n, 1, ent, F)
    name = A.name[:-3] if A.name.endswith("^op") else A.name + "^op"
    return AInftyAlgebra(A.A, ops, F, A.strict_unit, name)


def _fresh_name(names: Sequence[str], base: str = "1") -> str:
    name = base
    while name in names:
        name += "'"
    return name


def adjoin_unit(A: AInftyAlgebra) -> AInftyAlgebra:
    """``A_1 = A ⊕ k·1`` with ``1`` a strict unit."""
    F = A.field
    one = _fresh_name(A.names)
    A1 = A.A.direct_sum(GradedSpace((one,), (0,), A.A.grading))
    u = A1.dim - 1
    m_ops = {}
    for n in set(A.ops) | {2}:
        m = A.m(n)
        ent = {k: dict(v) for k, v in m.entries.items()}
        if n == 2:
            for v in range(A1.dim):
                ent[(u, v)] = {v: F(1)}
                ent[(v, u)] = {v: F(1)}
        m_ops[n] = MultilinearMap(A1, A1, n, 2 - n, ent, F)
    return AInftyAlgebra.from_m(A1, m_ops, F, strict_unit=one, name=A.name + "+1")


# --------------------------------------------------------------- cohomology

@dataclass
class Cohomology:
    algebra: AInftyAlgebra
    degrees: List[int]                  # degree of each H basis element
    reps: List[Vector]                  # representatives over the A basis
    names: List[str]
    product: Dict[Tuple[int, int], Vector]  # H-coordinates of π m_2(h_i, h_j)
    _solver: Tuple = field(repr=False, default=None)

    def dims(self, window: Optional[Tuple[int, int]] = None) -> Dict[int, int]:
        lo, hi = window if window else (min(self.algebra.A.degrees, default=0), max(self.algebra.A.degrees, default=0))
        if self.algebra.A.grading == "Z2":
            lo, hi = 0, 1
        return {d: sum(1 for e in self.degrees if e == d) for d in range(lo, hi + 1)}

    def project(self, z: Vector) -> Optional[Vector]:
        """H-coordinates of a cocycle ``z`` (``None`` if ``z`` is not a cocycle)."""
        P, nH = self._solver
        sol = solve(P, z)
        if sol is None:
            return None
        return {i: c for i, c in sol.items() if i < nH}


def _m_matrix(A: AInftyAlgebra, n: int = 1) -> SparseMatrix:
    m1 = A.m(1)
    cols = [m1(i) for i in range(A.dim)]
    return SparseMatrix.from_columns(A.dim, cols, A.field)


def splitting(A: AInftyAlgebra):
    """Deterministic ``A = H ⊕ B ⊕ C`` for ``m_1``: returns (H reps, C indices, B vectors, change-of-basis)."""
    F = A.field
    d = _m_matrix(A)
    piv, rows = rref(d)
    Cidx = list(piv)
    Bvecs = [d.apply({j: F(1)}) for j in Cidx]
    Z = kernel_from_rref(A.dim, rows, F)
    ech = Echelon(F)
    for b in Bvecs:
        ech.add(b)
    H = []
    for z in Z:
        if ech.add(z):
            H.append(z)
    cols = H + Bvecs + [{j: F(1)} for j in Cidx]
    P = SparseMatrix.from_columns(A.dim, cols, F)
    return H, Cidx, Bvecs, P


def _class_name(A: AInftyAlgebra, h: Vector) -> str:
    lead = min(h)
    return A.names[lead] if h == {lead: 1} else "[" + A.names[lead] + "]"


def cohomology(A: AInftyAlgebra, window: Optional[Tuple[int, int]] = None) -> Cohomology:
    if window is not None and window[0] > window[1]:
        raise ValueError("empty window")
    F = A.field
    H, Cidx, Bvecs, P = splitting(A)
    degs = [A.A.degrees[min(h)] for h in H]
    names = [_class_name(A, h) for h in H]
    coh = Cohomology(A, degs, H, names, {}, (P, len(H)))
    m2 = A.m(2)
    for i, hi in enumerate(H):
        for j, hj in enumerate(H):
            acc: Vector = {}
            for a, ca in hi.items():
                for b, cb in hj.items():
                    vec_axpy(F, acc, F.reduce(ca * cb), m2(a, b))
            if acc:
                proj = coh.project(acc)
                if proj:
                    coh.product[(i, j)] = proj
    return coh


@dataclass
class WeakUnitReport:
    is_weakly_unital_on_window: bool
    unit_class: Optional[Vector]
    unit_names: Optional[Dict[str, str]]
    window: Tuple[int, int]
    window_relative: bool = True

    def as_dict(self) -> dict:
        return {"weakly_unital_on_window": self.is_weakly_unital_on_window,
                "unit_class": self.unit_names, "window": list(self.window),
                "verdict": "window-relative"}


def weak_unit_check(A: AInftyAlgebra, window: Tuple[int, int] = (-3, 3)) -> WeakUnitReport:
    F = A.field
    coh = cohomology(A, window)
    lo, hi = window
    zero_idx = [i for i, d in enumerate(coh.degrees) if d == 0]
    test_idx = [i for i, d in enumerate(coh.degrees) if lo <= d <= hi or A.A.grading == "Z2"]
    if not zero_idx:
        return WeakUnitReport(False, None, None, window)
    nH = len(coh.degrees)
    # unknown u = Σ c_k h_k; equations u·x = x and x·u = x in H coordinates
    eqs: List[Tuple[Dict[int, object], object]] = []
    for x in test_idx:
        for side in (0, 1):
            for t in range(nH):
                row = {}
                for col, k in enumerate(zero_idx):
                    key = (k, x) if side == 0 else (x, k)
                    c = coh.product.get(key, {}).get(t, 0)
                    if c:
                        row[col] = c
                eqs.append((row, F(1) if t == x else F(0)))
    M = SparseMatrix(len(eqs), len(zero_idx), {(r, c): v for r, (row, _) in enumerate(eqs) for c, v in row.items()}, F)
    rhs = {r: b for r, (_, b) in enumerate(eqs) if b}
    sol = solve(M, rhs)
    if sol is None:
        return WeakUnitReport(False, None, None, window)
    rep: Vector = {}
    for col, c in sol.items():
        vec_axpy(F, rep, c, coh.reps[zero_idx[col]])
    return WeakUnitReport(True, rep, {A.names[i]: F.to_str(c) for i, c in sorted(rep.items())}, window)


# --------------------------------------------------------------- minimal models

def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def minimal_model(A: AInftyAlgebra, n_max_out: int = 4) -> Tuple[AInftyAlgebra, AInftyMorphism]:
    """Transfer the structure to cohomology along a deterministic splitting.

    With ``h`` on ``W`` satisfying ``b_1 h + h b_1 = i p - id``, set
    ``p_1 = i``, ``Φ_n = Σ_{k>=2} b_k(p_{n_1} ⊗ ... ⊗ p_{n_k})``,
    ``p_n = h Φ_n`` and ``b'_n = p Φ_n``.  The ``p_n`` are the Taylor
    coefficients of the quasi-isomorphism ``M -> A``.
    """
    F = A.field
    if F.characteristic != 0:
        raise UnsupportedFieldError("minimal models are computed over QQ only")
    H, Cidx, Bvecs, P = splitting(A)
    nH, nB = len(H), len(Bvecs)
    Hsp = GradedSpace(tuple(_class_name(A, h) for h in H),
                      tuple(A.A.degrees[min(h)] for h in H), A.A.grading)
    WH = Hsp.shift(1)

    coord_cache: Dict[int, Vector] = {}

    def coords(v: Vector) -> Vector:
        out: Vector = {}
        for k, c in v.items():
            if k not in coord_cache:
                coord_cache[k] = solve(P, {k: F(1)})
            vec_axpy(F, out, c, coord_cache[k])
        return out

    def proj(v: Vector) -> Vector:
        return {i: c for i, c in coords(v).items() if i < nH}

    def homotopy(v: Vector) -> Vector:
        out: Vector = {}
        for i, c in coords(v).items():
            if nH <= i < nH + nB:
                vec_axpy(F, out, F.reduce(-c), {Cidx[i - nH]: 1})
        return out

    p: Dict[int, Dict[Tuple[int, ...], Vector]] = {1: {(i,): dict(H[i]) for i in range(nH)}}
    bnew: Dict[int, Dict[Tuple[int, ...], Vector]] = {}
    for n in range(2, n_max_out + 1):
        p[n], bnew[n] = {}, {}
        for t in words(nH, n):
            phi: Vector = {}
            for k, bk in A.ops.items():
                if k < 2 or k > n:
                    continue
                for comp in _compositions(n, k):
                    vecs, pos = [], 0
                    for m in comp:
                        vecs.append(p[m].get(t[pos:pos + m], {}))
                        pos += m
                    if any(not v for v in vecs):
                        continue
                    for combo in itertools.product(*[sorted(v.items()) for v in vecs]):
                        coef = 1
                        for _, c in combo:
                            coef *= c
                        out = bk.entries.get(tuple(x for x, _ in combo))
                        if out:
                            vec_axpy(F, phi, F.reduce(coef), out)
            if not phi:
                continue
            hp = homotopy(phi)
            if hp:
                p[n][t] = hp
            pp = proj(phi)
            if pp:
                bnew[n][t] = pp
    ops = {n: MultilinearMap(WH, WH, n, 1, ent, F) for n, ent in bnew.items() if ent}
    M = AInftyAlgebra(Hsp, ops, F, name=f"min({A.name})")
    taylor = {n: MultilinearMap(WH, A.W, n, 0, ent, F) for n, ent in p.items() if ent}
    return M, AInftyMorphism(M, A, taylor)


# --------------------------------------------------------------- change of basis

def change_basis(A: AInftyAlgebra, new_basis: Sequence[Vector], names: Sequence[str],
                 strict_unit: Optional[str] = None) -> AInftyAlgebra:
    """Transport the structure to a new homogeneous basis (given in old coordinates)."""
    F = A.field
    n = A.dim
    if len(new_basis) != n or len(names) != n:
        raise ValueError("new basis must have the same size as the old one")
    degs = []
    for v in new_basis:
        ds = {A.A.degrees[i] for i in v}
        if len(ds) != 1:
            raise ValueError("basis vectors must be nonzero and homogeneous")
        degs.append(ds.pop())
    P = SparseMatrix.from_columns(n, list(new_basis), F)
    inv_cols = []
    for i in range(n):
        x = solve(P, {i: F(1)})
        if x is None:
            raise ValueError("new basis is not invertible")
        inv_cols.append(x)
    Pinv = SparseMatrix.from_columns(n, inv_cols, F)
    A2 = GradedSpace(tuple(names), tuple(degs), A.A.grading)
    W2 = A2.shift(1)
    ops = {}
    for k, b in A.ops.items():
        ent = {}
        for key in words(n, k):
            acc: Vector = {}
            for combo in itertools.product(*(new_basis[j].items() for j in key)):
                coeff = F(1)
                for _, c in combo:
                    coeff = F.reduce(coeff * c)
                vec = b.entries.get(tuple(i for i, _ in combo))
                if vec:
                    vec_axpy(F, acc, coeff, vec)
            out = Pinv.apply(acc) if acc else {}
            if out:
                ent[key] = out
        ops[k] = MultilinearMap(W2, W2, k, 1, ent, F)
    return AInftyAlgebra(A2, ops, F, strict_unit=strict_unit, name=A.name)


def find_strict_unit(A: AInftyAlgebra) -> Optional[Vector]:
    """A degree-0 vector ``u`` with ``m_2(u, x) = x = m_2(x, u)`` and ``u`` killed by every other ``m_n``."""
    F = A.field
    cand = [i for i in range(A.dim) if A.A.degrees[i] == 0]
    if not cand:
        return None
    pos = {i: j for j, i in enumerate(cand)}
    rows: Dict[Tuple, Dict[int, object]] = {}
    rhs: Dict[Tuple, object] = {}
    m2 = A.m(2)
    for v in range(A.dim):
        for side in ("L", "R"):
            rhs[(side, v, v)] = F(1)
    for key, vec in m2.entries.items():
        for side, slot, other in (("L", 0, key[1]), ("R", 1, key[0])):
            if key[slot] in pos:
                for o, c in vec.items():
                    row = rows.setdefault((side, other, o), {})
                    row[pos[key[slot]]] = F.reduce(row.get(pos[key[slot]], 0) + c)
    for n, b in A.ops.items():
        if n == 2:
            continue
        for key, vec in b.entries.items():
            for p, i in enumerate(key):
                if i in pos:
                    for o, c in vec.items():
                        row = rows.setdefault((n, p, key[:p] + key[p + 1:], o), {})
                        row[pos[i]] = F.reduce(row.get(pos[i], 0) + c)
    labels = sorted(set(rows) | set(rhs), key=repr)
    M = SparseMatrix(len(labels), len(cand),
                     {(r, c): v for r, lab in enumerate(labels) for c, v in rows.get(lab, {}).items() if v}, F)
    x = solve(M, {r: rhs[lab] for r, lab in enumerate(labels) if lab in rhs})
    if x is None:
        return None
    return {cand[j]: c for j, c in x.items() if c}


def unital_rebase(A: AInftyAlgebra, unit_name: str = "1") -> Optional[AInftyAlgebra]:
    """``A`` in a basis containing its strict unit (named ``unit_name``), or ``None``."""
    if A.strict_unit is not None and check_strict_unit(A):
        return A
    u = find_strict_unit(A)
    if u is None:
        return None
    j = max(u)
    basis = [({i: A.field(1)} if i != j else u) for i in range(A.dim)]
    name = unit_name
    while name in A.names:
        name += "'"
    names = [A.names[i] if i != j else name for i in range(A.dim)]
    B = change_basis(A, basis, names, strict_unit=name)
    if not check_strict_unit(B):
        raise AssertionError("rebased unit failed the strict-unit check")
    return B


def induced_map_report(f: AInftyMorphism, window: Tuple[int, int]) -> Dict[str, Dict[str, object]]:
    """Per degree ``d`` in the window: ``dim H^d`` of source and target and the rank of ``H^d(f_1)``."""
    A, B = f.source, f.target
    F = A.field
    dA, dB = _m_matrix(A), _m_matrix(B)
    f1 = f.component(1)
    out = {}
    for d in range(window[0], window[1] + 1):
        ia = [i for i in range(A.dim) if A.A.degrees[i] == d]
        ib = [i for i in range(B.dim) if B.A.degrees[i] == d]
        za = _cocycles(dA, ia, F)
        zb = _cocycles(dB, ib, F)
        bdy_b = [dB.apply({j: F(1)}) for j in range(B.dim) if B.A.degrees[j] == d - 1]
        bdy_a = [dA.apply({j: F(1)}) for j in range(A.dim) if A.A.degrees[j] == d - 1]
        hA = len(za) - rank(SparseMatrix.from_columns(A.dim, bdy_a, F))
        hB = len(zb) - rank(SparseMatrix.from_columns(B.dim, bdy_b, F))
        images = []
        for z in za:
            acc: Vector = {}
            for i, c in z.items():
                vec_axpy(F, acc, c, f1(i))
            images.append(acc)
        rb = rank(SparseMatrix.from_columns(B.dim, bdy_b, F))
        r = rank(SparseMatrix.from_columns(B.dim, bdy_b + images, F)) - rb
        out[str(d)] = {"dim_source": hA, "dim_target": hB, "rank": r, "iso": hA == hB == r}
    return out


def _cocycles(d: SparseMatrix, idx: List[int], F: Field) -> List[Vector]:
    sub = SparseMatrix.from_columns(d.rows, [d.apply({j: F(1)}) for j in idx], F)
    _, rows = rref(sub)
    return [{idx[k]: c for k, c in z.items()} for z in kernel_from_rref(len(idx), rows, F)]
