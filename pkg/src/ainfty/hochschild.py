"""Hochschild chains and cochains, Connes' operator, the modified (non-unital)
mixed complex, negative cyclic homology over ``k[u]/(u^n)`` and the probes built
on them.

Chains are words ``(x_0; x_1, ..., x_n)`` of basis indices of ``W = A[1]``
(``x_0`` is the ``A`` slot, stored shifted like the rest); the cohomological
degree of a chain is ``Σ|x_i| + 1`` in shifted degrees, so for a degree-0
algebra a chain with ``n`` bar letters sits in degree ``-n``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .ainfinity import AInftyAlgebra, unital_rebase
from .coalgebra import apply_coderivation
from .complexes import ComplexSlice, assemble, flag_exact, persistence
from .exactlinalg import (Echelon, Field, SparseMatrix, Vector, kernel_from_rref, nilpotent_module_structure, rank,
                          rref, solve)
from .graded import rotation_sign, words

Word = Tuple[int, ...]


class MissingUnitError(ValueError):
    pass


class WrongFieldError(ValueError):
    pass


def _acc(F: Field, out: Dict, key, c) -> None:
    v = F.reduce(out.get(key, 0) + c)
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def rotate(A: AInftyAlgebra, word: Word, k: int) -> Tuple[int, Word]:
    """Move the last ``k`` letters to the front; returns (Koszul sign, word)."""
    if k == 0:
        return 1, word
    Wd = A.W.degrees
    head, tail = word[:-k], word[-k:]
    return rotation_sign([Wd[i] for i in head], [Wd[i] for i in tail]), tail + head


def chain_degree(A: AInftyAlgebra, word: Word) -> int:
    return A.A.norm_degree(sum(A.W.degrees[i] for i in word) + 1)


def chain_b(A: AInftyAlgebra, word: Word) -> Dict[Word, object]:
    """Hochschild differential: operations on the bar letters, plus operations on
    every cyclic block through ``x_0`` (the block is rotated to the front first)."""
    F, Wd = A.field, A.W.degrees
    n = len(word)
    out: Dict[Word, object] = {}
    parity = Wd[word[0]]
    for r in range(1, n):
        for s, b in A.ops.items():
            if r + s > n:
                continue
            vec = b.entries.get(word[r:r + s])
            if vec:
                sign = -1 if parity % 2 else 1
                for o, c in vec.items():
                    _acc(F, out, word[:r] + (o,) + word[r + s:], sign * c)
        parity += Wd[word[r]]
    for k in range(n):
        sign, rot = rotate(A, word, k)
        for l, b in A.ops.items():
            if l < k + 1 or l > n:
                continue
            vec = b.entries.get(rot[:l])
            if vec:
                for o, c in vec.items():
                    _acc(F, out, (o,) + rot[l:], sign * c)
    return out


def _unit_index(A: AInftyAlgebra) -> int:
    if A.strict_unit is None:
        raise MissingUnitError(f"{A.name} has no strict unit")
    return A.A.index(A.strict_unit)


def is_degenerate(word: Word, u: int) -> bool:
    return u in word[1:]


def connes_B(A: AInftyAlgebra, word: Word, reduced: bool = True) -> Dict[Word, object]:
    """``B(x_0; x_1..x_n) = Σ_i ±(1; t^i(x_0..x_n))`` with Koszul rotation signs."""
    F = A.field
    u = _unit_index(A)
    out: Dict[Word, object] = {}
    if reduced and is_degenerate(word, u):
        return out
    for k in range(len(word)):
        sign, rot = rotate(A, word, k)
        key = (u,) + rot
        if reduced and is_degenerate(key, u):
            continue
        _acc(F, out, key, sign)
    return out


def chain_words(A: AInftyAlgebra, L: int, reduced: bool = False) -> List[Word]:
    u = _unit_index(A) if reduced else None
    out = []
    for n in range(L + 1):
        for w in words(A.dim, n + 1):
            if reduced and is_degenerate(w, u):
                continue
            out.append(w)
    return out


def _reach(letter_degrees: Sequence[int], min_letters: int, target: int, offset: int, grading: str,
           u_shifts: Sequence[int] = (0,)) -> bool:
    """Could a word with ``>= min_letters`` letters (plus any of ``u_shifts``) have degree ``target``?"""
    if not letter_degrees:
        return False
    if grading == "Z2":
        return True
    lo, hi = min(letter_degrees), max(letter_degrees)
    if lo < 0 < hi:
        return True
    if lo == 0 or hi == 0:
        # degrees of long words fill a half line (or a point) starting at m * lo or m * hi
        for shift in u_shifts:
            a, b = min_letters * lo + offset + shift, min_letters * hi + offset + shift
            if (hi == 0 and target <= b and (lo < 0 or target == b)) or (lo == 0 and target >= a):
                return True
        return False
    for shift in u_shifts:
        n = min_letters
        while True:
            a, b = n * lo + offset + shift, n * hi + offset + shift
            if a <= target <= b:
                return True
            if (hi < 0 and b < target) or (lo > 0 and a > target):
                break
            n += 1
    return False


def chain_complex(A: AInftyAlgebra, L: int = 6, reduced: bool = False) -> ComplexSlice:
    """Length-``<= L`` Hochschild chains (a subcomplex; ``reduced`` passes to the
    normalized quotient by chains with a unit among ``x_1..x_n``)."""
    F = A.field
    keys = chain_words(A, L, reduced)
    if reduced:
        u = _unit_index(A)
        apply = lambda w: {k: c for k, c in chain_b(A, w).items() if not is_degenerate(k, u)}
    else:
        apply = lambda w: chain_b(A, w)
    sl = assemble(keys, lambda w: chain_degree(A, w), apply, F, tag_of=lambda w: len(w) - 1, L=L,
                  name="reduced chains" if reduced else "chains")
    return flag_exact(sl, lambda k: _reach(A.W.degrees, L + 2, k, 1, A.A.grading))


def reduced_B_matrix(A: AInftyAlgebra, sl: ComplexSlice) -> SparseMatrix:
    """Connes' operator on a reduced chain slice; terms leaving the slice are dropped."""
    ent = {}
    for j, w in enumerate(sl.keys):
        for k, c in connes_B(A, w).items():
            i = sl.index.get(k)
            if i is not None:
                ent[(i, j)] = c
    return SparseMatrix(sl.dim, sl.dim, ent, A.field)


# --- modified mixed complex -------------------------------------------------
#
# X holds chains (x_0; x_1..x_n) (dual to cyclic 1-forms), Y holds non-empty
# words y_1..y_m (dual to functions modulo constants), in degree Σ|y_i|.
# b(x, y) = (b x + (1 - t) y, -Q y) and B(x, y) = (0, N x), where t moves the last
# letter to the front and N is the Koszul-signed sum of all rotations.

def modified_keys(A: AInftyAlgebra, L: int) -> List[Tuple[str, Word]]:
    ws = [w for m in range(1, L + 1) for w in words(A.dim, m)]
    return [("X", w) for w in ws] + [("Y", w) for w in ws]


def modified_degree(A: AInftyAlgebra, key) -> int:
    return A.A.norm_degree(chain_degree(A, key[1]) - (1 if key[0] == "Y" else 0))


def modified_b(A: AInftyAlgebra, key) -> Dict:
    F = A.field
    part, w = key
    out: Dict = {}
    if part == "X":
        for k, c in chain_b(A, w).items():
            _acc(F, out, ("X", k), c)
        return out
    _acc(F, out, ("X", w), 1)
    sign, r = rotate(A, w, 1)
    _acc(F, out, ("X", r), -sign)
    for k, c in apply_coderivation(A.ops, 1, A.W, w, F).items():
        if k:
            _acc(F, out, ("Y", k), -c)
    return out


def modified_B(A: AInftyAlgebra, key) -> Dict:
    F = A.field
    part, w = key
    out: Dict = {}
    if part == "X":
        for k in range(len(w)):
            sign, r = rotate(A, w, k)
            _acc(F, out, ("Y", r), sign)
    return out


@dataclass
class MixedSlice:
    """A truncated mixed complex ``(C, b, B)`` with ``B`` of degree -1."""
    b: ComplexSlice
    B: SparseMatrix
    letters: List[int]                 # letter count of each basis element
    B_exact: bool = True               # False when B was truncated by projection

    def check(self) -> Dict[str, bool]:
        b, B = self.b.d, self.B
        return {"b2": (b @ b).is_zero(), "B2": (B @ B).is_zero(), "bB+Bb": (b @ B + B @ b).is_zero()}


def modified_complex(A: AInftyAlgebra, L: int = 6) -> MixedSlice:
    """Words of at most ``L`` letters in both summands: a sub mixed complex."""
    F = A.field
    keys = modified_keys(A, L)
    sl = assemble(keys, lambda k: modified_degree(A, k), lambda k: modified_b(A, k), F,
                  tag_of=lambda k: len(k[1]), L=L, name="modified")
    flag_exact(sl, lambda k: _reach(A.W.degrees, L + 1, k, 1, A.A.grading)
               or _reach(A.W.degrees, L + 1, k, 0, A.A.grading))
    Bm = assemble(keys, lambda k: 0, lambda k: modified_B(A, k), F).d
    return MixedSlice(sl, Bm, [len(k[1]) for k in keys])


def reduced_mixed_complex(A: AInftyAlgebra, L: int = 6) -> MixedSlice:
    sl = chain_complex(A, L, reduced=True)
    return MixedSlice(sl, reduced_B_matrix(A, sl), [len(w) for w in sl.keys], B_exact=False)


def hh_slice(A: AInftyAlgebra, L: int = 6, mode: str = "plain", kind: str = "chains") -> ComplexSlice:
    if kind == "cochains":
        return cochain_complex(A, L)
    if kind != "chains":
        raise ValueError(f"unknown kind {kind!r}")
    if mode == "modified":
        return modified_complex(A, L).b
    if mode in ("plain", "reduced"):
        return chain_complex(A, L, reduced=(mode == "reduced"))
    raise ValueError(f"unknown mode {mode!r}")


def hh_homology(A: AInftyAlgebra, L: int = 6, mode: str = "plain", kind: str = "chains",
                window: Optional[Tuple[int, int]] = None) -> dict:
    """Hochschild (co)homology dims per degree with an exact/truncated flag and a
    ``stable`` flag comparing with the ``L + 1`` slice.

    ``mode`` (chains only) is ``plain``, ``reduced`` (strict unit in the basis)
    or ``modified``; ``kind`` is ``chains`` or ``cochains``.
    """
    a = hh_slice(A, L, mode, kind)
    b = hh_slice(A, L + 1, mode, kind)
    degs = list(range(window[0], window[1] + 1)) if window else a.degree_set()
    da, db = a.homology_dims(degs), b.homology_dims(degs)
    return {str(k): {"dim": da[k], "status": "exact" if a.exact.get(k, k not in a.degree_set() and b.exact.get(k, False))
                     else "truncated", "stable": da[k] == db[k]} for k in degs}


# --- negative cyclic homology over k[u]/(u^n) -------------------------------

def resolve_mode(A: AInftyAlgebra, mode: str) -> Tuple[AInftyAlgebra, str]:
    """``auto`` picks the reduced complex (after moving a strict unit into the
    basis) when one exists, else the modified complex."""
    if mode != "auto":
        return A, mode
    B = unital_rebase(A)
    return (B, "reduced") if B is not None else (A, "modified")


def _mixed_for(A: AInftyAlgebra, L: int, mode: str, n: int) -> Tuple[MixedSlice, int, int]:
    """Returns (mixed slice, weight shift per power of u, weight bound)."""
    # Bounding ``letters - k`` gives a subcomplex: b never adds letters and uB
    # raises k by one while adding at most one letter.
    if mode == "modified":
        return modified_complex(A, L + n - 1), 1, L
    if mode == "reduced":
        return reduced_mixed_complex(A, L + n - 1), 1, L + 1
    raise ValueError(f"unknown mode {mode!r}")


def negative_cyclic_complex(A: AInftyAlgebra, n: int, L: int = 6, mode: str = "auto") -> ComplexSlice:
    """``(C[u]/(u^n), b + uB)`` with ``|u| = 2``, truncated by ``letters - k``."""
    if n < 1:
        raise ValueError("n must be positive")
    A, mode = resolve_mode(A, mode)
    F = A.field
    mix, shift, bound = _mixed_for(A, L, mode, n)
    base = mix.b
    keys = [(k, key) for k in range(n) for i, key in enumerate(base.keys) if mix.letters[i] - shift * k <= bound]
    index = {k: i for i, k in enumerate(keys)}
    bcols, Bcols = base.d.col_dicts(), mix.B.col_dicts()
    ent = {}
    for j, (k, key) in enumerate(keys):
        c0 = base.index[key]
        for r, c in bcols[c0].items():
            ent[(index[(k, base.keys[r])], j)] = c
        if k + 1 < n:
            for r, c in Bcols[c0].items():
                i = index.get((k + 1, base.keys[r]))
                if i is not None:
                    ent[(i, j)] = c
    degrees = [A.A.norm_degree(base.degrees[base.index[key]] + 2 * k) for k, key in keys]
    sl = ComplexSlice(keys, degrees, SparseMatrix(len(keys), len(keys), ent, F), F, L,
                      [mix.letters[base.index[key]] for _, key in keys], name=f"negative cyclic n={n}")
    Wd, gr = A.W.degrees, A.A.grading

    def missing(d):
        for k in range(n):
            m = bound + shift * k + 1
            if _reach(Wd, m, d, 1 + 2 * k, gr) or (mode == "modified" and _reach(Wd, m, d, 2 * k, gr)):
                return True
        return False

    flag_exact(sl, missing)
    sl.missing = missing
    return sl


def u_matrix(sl: ComplexSlice, n: int) -> SparseMatrix:
    ent = {}
    for j, (k, key) in enumerate(sl.keys):
        if k + 1 < n:
            i = sl.index.get((k + 1, key))
            if i is not None:
                ent[(i, j)] = sl.field(1)
    return SparseMatrix(sl.dim, sl.dim, ent, sl.field)


def _homology_coords(sl: ComplexSlice, deg: int):
    reps, bnd = sl.homology_basis(deg)
    M = SparseMatrix.from_columns(sl.dim, reps + bnd, sl.field)

    def coords(z: Vector) -> Dict[int, object]:
        x = solve(M, z)
        if x is None:
            raise ValueError("not a cycle of this slice")
        return {i: c for i, c in x.items() if i < len(reps)}

    return reps, coords


@dataclass
class NegativeCyclicReport:
    n: int
    L: int
    mode: str
    dims: Dict[int, int]
    exact: Dict[int, bool]
    window: Tuple[int, int]                      # exact degrees used for the module analysis
    flat: Optional[bool]                         # None when no degree could be decided
    checked_degrees: List[int]
    obstructions: List[int]                      # degrees where ker u != im u^(n-1)
    module: Optional[object] = None              # UModuleReport over the exact window

    def as_dict(self) -> dict:
        return {"n": self.n, "L": self.L, "mode": self.mode,
                "homology": {str(k): {"dim": v, "status": "exact" if self.exact.get(k) else "truncated"}
                             for k, v in sorted(self.dims.items())},
                "window": list(self.window), "flat": self.flat, "checked_degrees": self.checked_degrees,
                "obstructions": self.obstructions,
                "u_module": self.module.as_dict() if self.module is not None else None}


def negative_cyclic(A: AInftyAlgebra, n: int, L: int = 6, mode: str = "auto") -> NegativeCyclicReport:
    """Negative cyclic homology truncated at ``u^n`` and its ``k[u]/(u^n)``-module structure.

    Freeness is tested degreewise: ``ker(u | H^d) = u^(n-1) H^(d-2(n-1))``,
    decided only where every degree involved is exact.
    """
    A, mode = resolve_mode(A, mode)
    sl = negative_cyclic_complex(A, n, L, mode)
    F = sl.field
    degs = sl.degree_set()
    dims = sl.homology_dims(degs)
    exact = {d: sl.exact.get(d, False) for d in degs}
    # a letter of positive degree puts omitted words in every high degree
    if A.A.grading == "Z2" or not degs or max(A.W.degrees) > 0:
        return NegativeCyclicReport(n, L, mode, dims, {d: False for d in degs}, (0, -1), None, [], [])
    # degrees above the slice are exactly zero unless an omitted element lands there
    hi = max(degs) + 2
    while sl.missing(hi) or sl.missing(hi - 1):
        hi += 1
    lo = hi
    while lo - 1 >= min(degs) and not (sl.missing(lo - 1) or sl.missing(lo - 2)):
        lo -= 1
    if lo > max(degs):
        return NegativeCyclicReport(n, L, mode, dims, exact, (0, -1), None, [], [])
    hi = max(degs)
    U = u_matrix(sl, n)
    basis, coords, offset = {}, {}, {}
    total = 0
    for d in range(lo, hi + 1):
        reps, co = _homology_coords(sl, d)
        basis[d], coords[d], offset[d] = reps, co, total
        total += len(reps)
    ent, umap = {}, {}
    for d in range(lo, hi + 1):
        cols = []
        for j, z in enumerate(basis[d]):
            img = U.apply(z)
            c = coords[d + 2](img) if d + 2 <= hi else {}  # nothing above hi
            cols.append(c)
            for i, v in c.items():
                ent[(offset[d + 2] + i, offset[d] + j)] = v
        umap[d] = cols
    module = nilpotent_module_structure(SparseMatrix(total, total, ent, F), n) if total else None

    def mat(d):  # u : H^d -> H^{d+2}
        return SparseMatrix.from_columns(len(basis.get(d + 2, [])), umap[d], F)

    checked, bad = [], []
    for d in range(lo + 2 * (n - 1), hi + 1):
        ker = len(basis[d]) - rank(mat(d)) if basis[d] else 0
        if n == 1:
            im = len(basis[d])
        else:
            P = mat(d - 2 * (n - 1))
            for e in range(d - 2 * (n - 1) + 2, d, 2):
                P = mat(e) @ P
            im = rank(P)
        checked.append(d)
        if ker != im:
            bad.append(d)
    flat = (not bad) if checked else None
    return NegativeCyclicReport(n, L, mode, dims, exact, (lo, hi), flat, checked, bad, module)


# --- cochains ---------------------------------------------------------------
#
# A cochain basis element ``(w, o)`` is the map sending the bar word ``w`` to the
# basis vector ``o`` and every other word to 0.  Its shifted degree is
# ``|o| - Σ|w_i|`` (as a map into ``W``); its cochain degree is one more.

Cochain = Dict[Tuple[Word, int], object]


def cochain_shifted_degree(A: AInftyAlgebra, key) -> int:
    w, o = key
    Wd = A.W.degrees
    return Wd[o] - sum(Wd[i] for i in w)


def cochain_degree(A: AInftyAlgebra, key) -> int:
    return A.A.norm_degree(cochain_shifted_degree(A, key) + 1)


def _bracket_basis(A: AInftyAlgebra, ops: Dict, key, L: Optional[int]) -> Cochain:
    """``[Q, φ]`` for a basis cochain, keeping arities ``<= L``."""
    F, Wd = A.field, A.W.degrees
    w, o = key
    delta = cochain_shifted_degree(A, key)
    out: Cochain = {}
    # Q ∘ φ: feed φ's output into one slot of b_k
    for k, b in ops.items():
        if L is not None and len(w) + k - 1 > L:
            continue
        for ins, vec in b.entries.items():
            for p in range(k):
                if ins[p] != o:
                    continue
                sign = -1 if (delta * sum(Wd[i] for i in ins[:p])) % 2 else 1
                nk = ins[:p] + w + ins[p + 1:]
                for r, c in vec.items():
                    _acc(F, out, (nk, r), sign * c)
    # φ ∘ Q: one letter of w is produced by b_s
    eps = 1 if delta % 2 else -1          # -(-1)^delta
    for r in range(len(w)):
        pre = sum(Wd[i] for i in w[:r])
        for s, b in ops.items():
            if L is not None and len(w) + s - 1 > L:
                continue
            for ins, vec in b.entries.items():
                c = vec.get(w[r])
                if c:
                    sign = eps * (-1 if pre % 2 else 1)
                    _acc(F, out, (w[:r] + ins + w[r + 1:], o), sign * c)
    return out


def cochain_bracket_Q(A: AInftyAlgebra, phi: Cochain, L: Optional[int] = None) -> Cochain:
    """Graded commutator ``[Q, φ]`` of a homogeneous cochain with the structure."""
    F = A.field
    out: Cochain = {}
    for key, c in phi.items():
        for k2, c2 in _bracket_basis(A, A.ops, key, L).items():
            _acc(F, out, k2, c * c2)
    return out


def cochain_differential(A: AInftyAlgebra, phi: Cochain, L: Optional[int] = None) -> Cochain:
    return cochain_bracket_Q(A, phi, L)


def structure_cochain(A: AInftyAlgebra) -> Cochain:
    """The operations ``b_n`` themselves as a cochain of shifted degree 1."""
    return {(ins, o): c for b in A.ops.values() for ins, vec in b.entries.items() for o, c in vec.items()}


def relations_defect(A: AInftyAlgebra, L: Optional[int] = None) -> Cochain:
    """``[Q, Q] = 2 Q^2`` as a cochain; zero exactly when the relations hold (char != 2)."""
    return cochain_bracket_Q(A, structure_cochain(A), L)


def cochain_keys(A: AInftyAlgebra, L: int) -> List[Tuple[Word, int]]:
    return [(w, o) for n in range(L + 1) for w in words(A.dim, n) for o in range(A.dim)]


def cochain_complex(A: AInftyAlgebra, L: int = 4) -> ComplexSlice:
    """Arity-``<= L`` quotient of the cochain complex (higher arities dropped)."""
    keys = cochain_keys(A, L)
    sl = assemble(keys, lambda k: cochain_degree(A, k), lambda k: _bracket_basis(A, A.ops, k, L), A.field,
                  tag_of=lambda k: len(k[0]), L=L, name="cochains")
    # quotient by the arity > L subcomplex S: H^k is exact when S^k = S^(k+1) = 0
    Wd, gr = A.W.degrees, A.A.grading
    neg = [-d for d in Wd]

    def omitted(k):
        return any(_reach(neg, L + 1, k, 1 + Wd[o], gr) for o in range(A.dim))

    for k in sl.degree_set():
        sl.exact[k] = not (omitted(k) or omitted(k + 1))
    return sl


def cup_product(A: AInftyAlgebra, phi: Cochain, psi: Cochain, L: Optional[int] = None) -> Cochain:
    """``φ ∪ ψ``: both cochains fed into ``b_2`` (higher ``b_k`` enter through the
    remaining slots), with the décalage sign turning it into an ``m_2``-type product."""
    F, Wd = A.field, A.W.degrees
    out: Cochain = {}
    for (w1, o1), c1 in phi.items():
        d1 = cochain_shifted_degree(A, (w1, o1))
        for (w2, o2), c2 in psi.items():
            d2 = cochain_shifted_degree(A, (w2, o2))
            for k, b in A.ops.items():
                if k < 2 or (L is not None and len(w1) + len(w2) + k - 2 > L):
                    continue
                for ins, vec in b.entries.items():
                    for p in range(k):
                        if ins[p] != o1:
                            continue
                        for q in range(p + 1, k):
                            if ins[q] != o2:
                                continue
                            pre1 = sum(Wd[i] for i in ins[:p])
                            pre2 = pre1 + sum(Wd[i] for i in w1) + sum(Wd[i] for i in ins[p + 1:q])
                            e = d1 * pre1 + d2 * pre2 + d1      # Koszul, then décalage
                            nk = ins[:p] + w1 + ins[p + 1:q] + w2 + ins[q + 1:]
                            for r, c in vec.items():
                                _acc(F, out, (nk, r), (-1 if e % 2 else 1) * c1 * c2 * c)
    return out


# --- degeneration, acyclicity, mod-p probe ----------------------------------

def degeneration_report(A: AInftyAlgebra, n_max: int = 4, L: int = 6, mode: str = "auto",
                        threads: int = 1) -> dict:
    """Flatness of negative cyclic homology over ``k[u]/(u^n)`` for ``n = 1..n_max``.

    Verdicts are relative to the truncation: ``flat`` is ``None`` when no degree
    could be decided, otherwise it covers the listed ``checked_degrees``.
    The ``n`` are independent; ``threads > 1`` farms them out (results keep their order).
    """
    B, used = resolve_mode(A, mode)
    ns = range(1, n_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = [r.as_dict() for r in pool.map(lambda n: negative_cyclic(B, n, L, used), ns)]
    else:
        rows = [negative_cyclic(B, n, L, used).as_dict() for n in ns]
    verdicts = [r["flat"] for r in rows]
    overall = None if any(v is None for v in verdicts) else all(verdicts)
    return {"algebra": A.name, "L": L, "mode": used, "n_max": n_max, "rows": rows, "flat": overall,
            "relative_to": "window and truncation"}


def ox_complex(A: AInftyAlgebra, L: int = 6) -> ComplexSlice:
    """``(⊕_{m<=L} W^m, Q)``, the predual of functions on the formal space, empty word included."""
    F = A.field
    keys = [w for m in range(L + 1) for w in words(A.dim, m)]
    sl = assemble(keys, lambda w: A.A.norm_degree(sum(A.W.degrees[i] for i in w)),
                  lambda w: apply_coderivation(A.ops, 1, A.W, w, F) if w else {}, F,
                  tag_of=len, L=L, name="O(X) predual")
    return flag_exact(sl, lambda k: _reach(A.W.degrees, L + 1, k, 0, A.A.grading))


def ox_acyclicity(A: AInftyAlgebra, L: int = 6, window: Optional[Tuple[int, int]] = None) -> dict:
    """Homology should be ``k`` in degree 0 and vanish elsewhere (weakly unital ``A``).

    A degree is decided when it is exact, or failing that when the inclusion of
    the ``L`` slice into the ``L + 1`` slice is an isomorphism there (``stable``).
    ``acyclic`` is ``None`` when degree 0 is undecided.
    """
    sl, nxt = ox_complex(A, L), ox_complex(A, L + 1)
    degs = list(range(window[0], window[1] + 1)) if window else sorted(set(sl.degree_set()) | {0})
    per = persistence(sl, nxt, degs)
    Wd, gr = A.W.degrees, A.A.grading
    hom, decided = {}, {}
    for k in degs:
        ex = not (_reach(Wd, L + 1, k, 0, gr) or _reach(Wd, L + 1, k - 1, 0, gr))
        status = "exact" if ex else ("stable" if per[k]["stable"] else "truncated")
        hom[str(k)] = {"dim": per[k]["dim"], "status": status}
        decided[k] = status != "truncated"
    bad = [k for k in degs if decided[k] and per[k]["dim"] != (1 if k == 0 else 0)]
    verdict = None if not decided.get(0, False) else not bad
    return {"algebra": A.name, "L": L, "homology": hom, "acyclic": verdict, "violations": bad}


def _approx_folded(M: SparseMatrix, letters: List[int], degrees: List[int], cyc_max: int,
                   bnd_max: int) -> Tuple[int, int]:
    """Z/2 dims of (cycles on <= cyc_max letters) / (boundaries of chains on <= bnd_max letters)."""
    F = M.field
    cols = M.col_dicts()
    out = []
    for par in (0, 1):
        zc = [j for j, m in enumerate(letters) if m <= cyc_max and degrees[j] % 2 == par]
        ent = {(i, k): v for k, j in enumerate(zc) for i, v in cols[j].items()}
        _, rows = rref(SparseMatrix(len(letters), len(zc), ent, F))
        cycles = [{zc[j]: c for j, c in z.items()} for z in kernel_from_rref(len(zc), rows, F)]
        ech = Echelon(F)
        for j, m in enumerate(letters):
            if m <= bnd_max and degrees[j] % 2 != par and cols[j]:
                ech.add(cols[j])
        base = ech.rank
        for z in cycles:
            ech.add(z)
        out.append(ech.rank - base)
    return out[0], out[1]


def mod_p_probe(A: AInftyAlgebra, L: int = 4, margin: int = 2, mode: str = "modified") -> dict:
    """Z/2-graded dims of ``H(C, b)`` and ``H(C, b + B)`` over ``GF(p)``.

    ``C`` is the modified complex by default (``mode="auto"`` takes the reduced
    one when a strict unit exists).  The value at ``L`` counts cycles on at most
    ``L`` bar letters modulo boundaries of chains with ``L + margin`` letters;
    both truncations ``L`` and ``L + 1`` are reported with a ``stable`` flag.
    ``b`` alone is Z-graded, so its exactly known degrees are also reported
    (``exact_part``); those must agree between the truncations.
    Experimental: equality of the two pairs is recorded, never enforced.
    """
    F = A.field
    if F.characteristic == 0:
        raise WrongFieldError("mod_p_probe needs a prime field GF(p)")
    B, used = resolve_mode(A, mode)
    extra = 1 if used == "reduced" else 0          # the A slot counts as a letter
    out = {"algebra": A.name, "field": str(F), "mode": used, "margin": margin, "truncations": {},
           "status": "experimental"}
    pairs, parts = {}, {}
    for LL in (L, L + 1):
        mix = reduced_mixed_complex(B, LL + margin) if used == "reduced" else modified_complex(B, LL + margin)
        b = mix.b
        args = (mix.letters, b.degrees, LL + extra, LL + margin + extra - (1 if used == "reduced" else 0))
        pb = _approx_folded(b.d, *args)
        pbB = _approx_folded(b.d + mix.B, *args)
        pairs[LL] = (pb, pbB)
        sl = hh_slice(B, LL, used)
        ex = [d for d in sl.degree_set() if sl.exact.get(d, False)]
        parts[LL] = sl.homology_dims(ex)
        folded = [sum(v for d, v in parts[LL].items() if d % 2 == par) for par in (0, 1)]
        out["truncations"][str(LL)] = {"b": list(pb), "b+B": list(pbB), "equal": pb == pbB,
                                       "exact_part": {"degrees": ex, "b": folded}}
    common = set(parts[L]) & set(parts[L + 1])
    out["exact_part_stable"] = all(parts[L][d] == parts[L + 1][d] for d in common)
    out["stable"] = pairs[L] == pairs[L + 1]
    out["equal"] = all(v["equal"] for v in out["truncations"].values())
    return out


chain_differential_b = chain_b
oX_acyclicity = ox_acyclicity
