"""A∞-modules and bimodules, derived tensor products, Hom complexes and ``E♯``.

A bimodule over ``(A, B)`` is stored in shifted form on ``V = M[1]``: maps
``c_{n1,n2}: W_A^{n1} ⊗ V ⊗ W_B^{n2} -> V`` of degree +1.  All checks run on
the combined space ``S = W_A ⊕ V ⊕ W_B``: the algebra operations and the
``c``'s together form one family of degree-1 maps on ``S``, and the module
axioms are exactly the vanishing of its square on words with one ``V``
letter.  A left module has ``right=None``, a right module ``left=None``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .ainfinity import AInftyAlgebra
from .coalgebra import taylor_of_square_by_composition, apply_coderivation
from .complexes import ComplexSlice, assemble
from .exactlinalg import Field, Vector, vec_axpy
from .graded import GradedSpace, MultilinearMap, decalage_sign, rotation_sign, words

Key = Tuple[Tuple[int, ...], int, Tuple[int, ...]]   # (left word, module letter, right word)


class AlgebraMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AInftyBimodule:
    left: Optional[AInftyAlgebra]
    right: Optional[AInftyAlgebra]
    V: GradedSpace
    ops: Dict[Key, Vector]
    field: Field
    name: str = "M"

    def __post_init__(self):
        for (lw, v, rw), vec in self.ops.items():
            if (lw and self.left is None) or (rw and self.right is None):
                raise ValueError(f"action on a missing side: {(lw, v, rw)}")
            want = self._word_degree(lw, v, rw) + 1
            for o in vec:
                if self.V.norm_degree(self.V.degrees[o] - want) != 0:
                    raise ValueError(f"action {(lw, v, rw)} -> {o} is not of degree +1")

    def _word_degree(self, lw, v, rw) -> int:
        d = self.V.degrees[v]
        if lw:
            d += sum(self.left.W.degrees[i] for i in lw)
        if rw:
            d += sum(self.right.W.degrees[i] for i in rw)
        return d

    def act(self, lw: Sequence[int], v: int, rw: Sequence[int]) -> Vector:
        return self.ops.get((tuple(lw), v, tuple(rw)), {})

    @property
    def n_left(self) -> int:
        return self.left.dim if self.left else 0

    @property
    def n_right(self) -> int:
        return self.right.dim if self.right else 0

    # ------------------------------------------------------------ combined space
    def combined(self) -> Tuple[GradedSpace, Dict[int, MultilinearMap]]:
        """``S = W_A ⊕ V ⊕ W_B`` with the joint family of degree-1 operations."""
        pieces, ops = [], {}
        a0, v0 = 0, self.n_left
        b0 = v0 + self.V.dim
        grading = self.V.grading
        if self.left:
            pieces.append(GradedSpace(tuple("L:" + x for x in self.left.names), self.left.W.degrees, grading))
        pieces.append(GradedSpace(tuple("M:" + x for x in self.V.names), self.V.degrees, grading))
        if self.right:
            pieces.append(GradedSpace(tuple("R:" + x for x in self.right.names), self.right.W.degrees, grading))
        S = pieces[0]
        for p in pieces[1:]:
            S = S.direct_sum(p)
        ent: Dict[int, Dict] = {}

        def put(key, vec, shift):
            tab = ent.setdefault(len(key), {})
            acc = tab.setdefault(key, {})
            vec_axpy(self.field, acc, 1, {o + shift: c for o, c in vec.items()})

        for alg, off in ((self.left, a0), (self.right, b0)):
            if alg is None:
                continue
            for n, b in alg.ops.items():
                for k, vec in b.entries.items():
                    put(tuple(i + off for i in k), vec, off)
        for (lw, v, rw), vec in self.ops.items():
            key = tuple(i + a0 for i in lw) + (v + v0,) + tuple(i + b0 for i in rw)
            put(key, vec, v0)
        for n, tab in ent.items():
            ops[n] = MultilinearMap(S, S, n, 1, tab, self.field)
        return S, ops

    def to_word(self, lw, v, rw) -> Tuple[int, ...]:
        v0 = self.n_left
        b0 = v0 + self.V.dim
        return tuple(lw) + (v + v0,) + tuple(i + b0 for i in rw)

    def from_word(self, w: Tuple[int, ...]) -> Key:
        v0 = self.n_left
        b0 = v0 + self.V.dim
        p = next(i for i, x in enumerate(w) if v0 <= x < b0)
        return tuple(w[:p]), w[p] - v0, tuple(x - b0 for x in w[p + 1:])


@dataclass
class ModuleReport:
    passed: bool
    L: int
    witness: Optional[Tuple[str, ...]] = None

    def as_dict(self) -> dict:
        return {"pass": self.passed, "L": self.L, "witness": list(self.witness) if self.witness else None}


def check_bimodule(M: AInftyBimodule, L: int = 6) -> ModuleReport:
    """The joint coderivation squares to zero on words ``A^{n1} V B^{n2}`` of length ``<= L``."""
    S, ops = M.combined()
    if not ops:
        return ModuleReport(True, L)
    sq = taylor_of_square_by_composition(ops, L)
    v0, v1 = M.n_left, M.n_left + M.V.dim
    for n in sorted(sq):
        bad = sorted(k for k in sq[n].entries if any(v0 <= x < v1 for x in k))
        if bad:
            return ModuleReport(False, L, tuple(S.names[i] for i in bad[0]))
    return ModuleReport(True, L)


check_module = check_bimodule


# --------------------------------------------------------------- constructors

def bimodule_from_m(left: Optional[AInftyAlgebra], right: Optional[AInftyAlgebra], M: GradedSpace,
                    tables: Dict[Tuple[Tuple[str, ...], str, Tuple[str, ...]], Dict[str, object]],
                    F: Field, name: str = "M") -> AInftyBimodule:
    """From classical actions ``m(a_1..a_p, m, b_1..b_q)`` on the unshifted ``M``."""
    V = M.shift(1)
    ops = {}
    for (lnames, v, rnames), vec in tables.items():
        lw = tuple(left.A.index(x) for x in lnames)
        rw = tuple(right.A.index(x) for x in rnames)
        vi = M.index(v)
        degs = ([left.W.degrees[i] for i in lw] + [V.degrees[vi]] + [right.W.degrees[i] for i in rw])
        sign = decalage_sign(degs)
        out = {M.index(o): F.reduce(sign * F(c)) for o, c in vec.items() if F(c)}
        if out:
            ops[(lw, vi, rw)] = out
    return AInftyBimodule(left, right, V, ops, F, name)


def diagonal_bimodule(A: AInftyAlgebra) -> AInftyBimodule:
    """``c_{n1,n2} = b_{n1+n2+1}`` with the module letter at position ``n1``."""
    ops: Dict[Key, Vector] = {}
    for n, b in A.ops.items():
        for key, vec in b.entries.items():
            for p in range(n):
                ops[(key[:p], key[p], key[p + 1:])] = dict(vec)
    return AInftyBimodule(A, A, A.W, ops, A.field, f"diag({A.name})")


def regular_module(A: AInftyAlgebra, side: str = "left") -> AInftyBimodule:
    ops: Dict[Key, Vector] = {}
    for n, b in A.ops.items():
        for key, vec in b.entries.items():
            if side == "left":
                ops[(key[:-1], key[-1], ())] = dict(vec)
            else:
                ops[((), key[0], key[1:])] = dict(vec)
    if side == "left":
        return AInftyBimodule(A, None, A.W, ops, A.field, f"{A.name}_left")
    return AInftyBimodule(None, A, A.W, ops, A.field, f"{A.name}_right")


def character_module(A: AInftyAlgebra, chi: Dict[str, object], side: str = "left") -> AInftyBimodule:
    """One-dimensional module ``k`` (degree 0) on which ``a`` acts by ``chi(a)`` through ``m_2``."""
    F = A.field
    M = GradedSpace(("k",), (0,), A.A.grading)
    tables = {}
    for a, c in chi.items():
        if A.A.degrees[A.A.index(a)] != 0:
            raise ValueError("a character is supported in degree 0")
        key = ((a,), "k", ()) if side == "left" else ((), "k", (a,))
        tables[key] = {"k": c}
    if side == "left":
        return bimodule_from_m(A, None, M, tables, F, "k")
    return bimodule_from_m(None, A, M, tables, F, "k")


def tensor_bimodule(A1: AInftyAlgebra, A2: AInftyAlgebra) -> AInftyBimodule:
    """``A1 ⊗ A2`` as an ``A1``-``A2`` bimodule (dg-algebras only: ``m_n = 0`` for ``n > 2``)."""
    for A in (A1, A2):
        if A.n_max > 2:
            raise ValueError("tensor bimodule needs dg-algebras")
    F = A1.field
    names, degs = [], []
    for i in range(A1.dim):
        for j in range(A2.dim):
            names.append(f"{A1.names[i]}|{A2.names[j]}")
            degs.append(A1.A.degrees[i] + A2.A.degrees[j])
    M = GradedSpace(tuple(names), tuple(degs), A1.A.grading)
    n2 = A2.dim
    m1a, m1b, m2a, m2b = A1.m(1), A2.m(1), A1.m(2), A2.m(2)
    ent: Dict[Tuple[Tuple[int, ...], int, Tuple[int, ...]], Vector] = {}

    def add(key, vec):
        acc = ent.setdefault(key, {})
        vec_axpy(F, acc, 1, vec)

    for i in range(A1.dim):
        for j in range(n2):
            v = i * n2 + j
            sgn = -1 if A1.A.degrees[i] % 2 else 1
            add(((), v, ()), {o * n2 + j: c for o, c in m1a(i).items()})
            add(((), v, ()), {i * n2 + o: F.reduce(sgn * c) for o, c in m1b(j).items()})
            for x in range(A1.dim):
                add(((x,), v, ()), {o * n2 + j: c for o, c in m2a(x, i).items()})
            for y in range(n2):
                add(((), v, (y,)), {i * n2 + o: c for o, c in m2b(j, y).items()})
    # shifted form
    V = M.shift(1)
    ops = {}
    for (lw, v, rw), vec in ent.items():
        vec = {o: c for o, c in vec.items() if c}
        if not vec:
            continue
        degs_ = [A1.W.degrees[i] for i in lw] + [V.degrees[v]] + [A2.W.degrees[i] for i in rw]
        s = decalage_sign(degs_)
        ops[(lw, v, rw)] = {o: F.reduce(s * c) for o, c in vec.items()}
    return AInftyBimodule(A1, A2, V, ops, F, f"{A1.name}⊗{A2.name}")


# --------------------------------------------------------------- complexes

def _letter_words(dim: int, L: int):
    for n in range(L + 1):
        yield from words(dim, n)


def derived_tensor(M: AInftyBimodule, N: AInftyBimodule, L: int = 6) -> ComplexSlice:
    """Bar model ``M ⊗ T(A[1]) ⊗ N`` of ``M ⊗^L_A N`` for a right module ``M`` and left module ``N``.

    Words have length ``<= L`` in the middle; degrees are unshifted
    (``deg m + Σ deg a_i - n + deg n``).
    """
    A = M.right
    if A is None or N.left is None or A.ops != N.left.ops or A.A != N.left.A:
        raise AlgebraMismatchError("derived tensor needs M right and N left over the same algebra")
    F = A.field
    nM, nA = M.V.dim, A.dim
    S = GradedSpace(tuple("M:" + x for x in M.V.names) + tuple("A:" + x for x in A.names)
                    + tuple("N:" + x for x in N.V.names), M.V.degrees + A.W.degrees + N.V.degrees, A.A.grading)
    ent: Dict[int, Dict] = {}

    def put(key, vec, shift):
        acc = ent.setdefault(len(key), {}).setdefault(key, {})
        vec_axpy(F, acc, 1, {o + shift: c for o, c in vec.items()})

    for n, b in A.ops.items():
        for k, vec in b.entries.items():
            put(tuple(i + nM for i in k), vec, nM)
    for (lw, v, rw), vec in M.ops.items():
        put((v,) + tuple(i + nM for i in rw), vec, 0)
    for (lw, v, rw), vec in N.ops.items():
        put(tuple(i + nM for i in lw) + (v + nM + nA,), vec, nM + nA)
    taylor = {n: MultilinearMap(S, S, n, 1, t, F) for n, t in ent.items()}
    keys = [(m,) + tuple(i + nM for i in w) + (q + nM + nA,)
            for w in _letter_words(nA, L) for m in range(nM) for q in range(N.V.dim)]
    keys.sort(key=lambda k: (len(k), k))
    return assemble(keys, lambda k: sum(S.degrees[i] for i in k) + 2,
                    lambda k: apply_coderivation(taylor, 1, S, k, F), F,
                    tag_of=lambda k: len(k) - 2, L=L, name="derived_tensor")


def sharp_complex(E: AInftyBimodule, L: int = 6) -> ComplexSlice:
    """``E♯ = ⊕_n E ⊗ A[1]^{⊗n}``: the module letter sits at the marked position 0
    and operations may wrap around it cyclically."""
    A = E.left
    if A is None or E.right is None or A.ops != E.right.ops or A.A != E.right.A:
        raise AlgebraMismatchError("E♯ needs an A-A bimodule")
    F = A.field
    Wd, Vd = A.W.degrees, E.V.degrees
    keys = [(v,) + w for n in range(L + 1) for v in range(E.V.dim) for w in words(A.dim, n)]
    ops_by_len: Dict[int, List] = {}
    for (lw, v, rw), vec in E.ops.items():
        ops_by_len.setdefault((len(lw), len(rw)), []).append((lw, v, rw, vec))

    def apply(key):
        v, a = key[0], key[1:]
        n = len(a)
        out: Dict = {}
        # operations inside the algebra letters
        parity = Vd[v]
        for r in range(n):
            for s, b in A.ops.items():
                if r + s > n:
                    continue
                vec = b.entries.get(a[r:r + s])
                if vec:
                    sign = -1 if parity % 2 else 1
                    for o, c in vec.items():
                        vec_axpy(F, out, sign * c, {(v,) + a[:r] + (o,) + a[r + s:]: 1})
            parity += Wd[a[r]]
        # operations through the module letter, wrapping the tail to the front
        for n1 in range(n + 1):
            for n2 in range(n - n1 + 1):
                tail, rest = a[n - n1:], a[:n - n1]
                lw, rw = tail, rest[:n2]
                vec = E.ops.get((lw, v, rw))
                if not vec:
                    continue
                sign = rotation_sign([Wd[i] for i in tail], [Vd[v]] + [Wd[i] for i in rest])
                for o, c in vec.items():
                    vec_axpy(F, out, sign * c, {(o,) + rest[n2:]: 1})
        return out

    return assemble(keys, lambda k: Vd[k[0]] + sum(Wd[i] for i in k[1:]) + 1, apply, F,
                    tag_of=lambda k: len(k) - 1, L=L, name="sharp")


# --------------------------------------------------------------- Hom complexes

HomKey = Tuple[Key, int]


def _input_keys(M: AInftyBimodule, L: int) -> List[Key]:
    out = []
    for n in range(L + 1):
        for n1 in range(n + 1):
            n2 = n - n1
            if (n1 and M.left is None) or (n2 and M.right is None):
                continue
            for lw in words(M.n_left, n1):
                for rw in words(M.n_right, n2):
                    for v in range(M.V.dim):
                        out.append((lw, v, rw))
    return out


class HomComplex:
    """``Hom(M, N) = Π_n Hom(A^{n1} ⊗ V_M ⊗ B^{n2}, V_N)`` modulo arities ``> L``.

    An element is a dict ``{((lw, v, rw), v'): coeff}``.
    """

    def __init__(self, M: AInftyBimodule, N: AInftyBimodule, L: int = 2):
        for a, b in ((M.left, N.left), (M.right, N.right)):
            if (a is None) != (b is None) or (a is not None and (a.A != b.A or a.ops != b.ops)):
                raise AlgebraMismatchError("Hom needs modules over the same algebras")
        self.M, self.N, self.L, self.F = M, N, L, M.field
        self.inputs = _input_keys(M, L)
        self.keys: List[HomKey] = [(x, o) for x in self.inputs for o in range(N.V.dim)]
        self._S, self._ops = M.combined()

    def degree(self, k: HomKey) -> int:
        (lw, v, rw), o = k
        return self.N.V.degrees[o] - self.M._word_degree(lw, v, rw)

    def element_degree(self, phi: Dict[HomKey, object]) -> int:
        degs = {self.degree(k) for k, c in phi.items() if c}
        if len(degs) > 1:
            raise ValueError("inhomogeneous element")
        return degs.pop() if degs else 0

    @staticmethod
    def _apply(phi_by_input, x: Key) -> Vector:
        return phi_by_input.get(x, {})

    @staticmethod
    def _by_input(phi):
        out: Dict[Key, Vector] = {}
        for (x, o), c in phi.items():
            if c:
                out.setdefault(x, {})[o] = c
        return out

    def _wdeg(self, alg, w) -> int:
        return sum(alg.W.degrees[i] for i in w) if w else 0

    def _outer(self, P: AInftyBimodule, phi_in, deg_phi: int, x: Key, outer) -> Vector:
        """``Σ ± outer(α, φ(β), γ)`` over splittings of ``x`` with ``β`` holding the module letter."""
        F = self.F
        lw, v, rw = x
        out: Vector = {}
        for i in range(len(lw) + 1):
            alpha, beta_l = lw[:i], lw[i:]
            sign = -1 if (deg_phi * self._wdeg(P.left, alpha)) % 2 else 1
            for j in range(len(rw) + 1):
                beta_r, gamma = rw[:j], rw[j:]
                inner = phi_in.get((beta_l, v, beta_r))
                if not inner:
                    continue
                for o, c in inner.items():
                    vec_axpy(F, out, sign * c, outer(alpha, o, gamma))
        return out

    def differential(self, phi: Dict[HomKey, object]) -> Dict[HomKey, object]:
        F = self.F
        d = self.element_degree(phi)
        phi_in = self._by_input(phi)
        out: Dict[HomKey, object] = {}
        sgn = -1 if d % 2 == 0 else 1     # -(-1)^{|φ|}
        for x in self.inputs:
            vec = self._outer(self.N, phi_in, d, x, lambda a, o, g: self.N.act(a, o, g))
            w = self.M.to_word(*x)
            for y, c in apply_coderivation(self._ops, 1, self._S, w, F).items():
                inner = phi_in.get(self.M.from_word(y))
                if inner:
                    vec_axpy(F, vec, sgn * c, inner)
            for o, c in vec.items():
                out[(x, o)] = c
        return out

    def slice(self) -> ComplexSlice:
        return assemble(self.keys, self.degree, lambda k: self.differential({k: self.F(1)}), self.F,
                        tag_of=lambda k: len(k[0][0]) + len(k[0][2]), L=self.L, name="hom")


def compose_hom(H2: HomComplex, H1: HomComplex, psi, phi) -> Dict[HomKey, object]:
    """``(ψ ∘ φ)(x) = Σ ± ψ(α, φ(β), γ)`` for ``φ ∈ Hom(M, N)``, ``ψ ∈ Hom(N, P)``."""
    if H1.N is not H2.M and (H1.N.V != H2.M.V or H1.N.ops != H2.M.ops):
        raise AlgebraMismatchError("composable Hom spaces needed")
    d = H1.element_degree(phi)
    phi_in, psi_in = H1._by_input(phi), H2._by_input(psi)
    out = {}
    for x in H1.inputs:
        vec = H1._outer(H1.N, phi_in, d, x, lambda a, o, g: psi_in.get((a, o, g), {}))
        for o, c in vec.items():
            out[(x, o)] = c
    return out


def sharp_matches_chains(A: AInftyAlgebra, L: int = 6) -> bool:
    """``E♯`` of the diagonal bimodule equals the Hochschild chain slice: same basis, degrees and matrix."""
    from .hochschild import chain_complex
    s, c = sharp_complex(diagonal_bimodule(A), L), chain_complex(A, L)
    return s.keys == c.keys and s.degrees == c.degrees and s.d.entries == c.d.entries
