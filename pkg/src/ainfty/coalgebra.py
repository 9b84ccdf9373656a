"""Truncated tensor coalgebras, coderivations, quiver coalgebras and the
finite subcoalgebra generated by an element.

A coalgebra element is a dict ``{basis_key: coeff}``.  For tensor coalgebras
the keys are tuples of basis indices of ``W`` (the empty tuple is the counit
word ``1``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Optional, Tuple

from .exactlinalg import QQ, Echelon, Field, SparseMatrix, Vector, solve, vec_axpy
from .graded import GradedSpace, MultilinearMap, compose_at, words

Word = Tuple[int, ...]
Chain = Dict[Word, object]


class MarkedPointError(ValueError):
    """A coderivation of a pointed coalgebra may not have an arity-0 part."""


class CompositionError(ValueError):
    pass


def chain_axpy(F: Field, acc: Chain, a, x: Chain) -> None:
    vec_axpy(F, acc, a, x)


@dataclass(frozen=True)
class TruncatedTensorCoalgebra:
    """``T_{<=L}(W)`` with the deconcatenation coproduct."""

    W: GradedSpace
    L: int = 6
    counital: bool = True

    def basis(self) -> List[Word]:
        start = 0 if self.counital else 1
        return [w for n in range(start, self.L + 1) for w in words(self.W.dim, n)]

    def coproduct(self, w: Word) -> List[Tuple[Word, Word]]:
        if self.counital:
            return [(w[:i], w[i:]) for i in range(len(w) + 1)]
        return [(w[:i], w[i:]) for i in range(1, len(w))]

    def coproduct_of(self, x: Dict[Word, object], F: Field = QQ) -> Dict[Tuple[Word, Word], object]:
        out: Dict[Tuple[Word, Word], object] = {}
        for w, c in x.items():
            for pair in self.coproduct(w):
                vec_axpy(F, out, c, {pair: 1})
        return out

    def is_coassociative(self) -> bool:
        for w in self.basis():
            left = sorted((a1, a2, b) for a, b in self.coproduct(w) for a1, a2 in self.coproduct(a))
            right = sorted((a, b1, b2) for a, b in self.coproduct(w) for b1, b2 in self.coproduct(b))
            if left != right:
                return False
        return True

    def counit(self, w: Word) -> int:
        return 1 if (self.counital and w == ()) else 0


def apply_coderivation(taylor: Dict[int, MultilinearMap], degree: int, W: GradedSpace,
                       word: Word, F: Field) -> Chain:
    """``Q(w_1..w_N) = Σ ± w_1..w_r b_s(w_{r+1}..w_{r+s}) w_{r+s+1}..w_N``."""
    out: Chain = {}
    N = len(word)
    odd = degree % 2
    prefix_parity = 0
    for r in range(N):
        for s, b in taylor.items():
            if r + s > N:
                continue
            vec = b.entries.get(word[r:r + s])
            if not vec:
                continue
            sign = -1 if odd and prefix_parity else 1
            head, tail = word[:r], word[r + s:]
            for o, c in vec.items():
                key = head + (o,) + tail
                v = F.reduce(out.get(key, 0) + sign * c)
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        prefix_parity = (prefix_parity + W.degrees[word[r]]) % 2
    return out


def apply_linear(fn: Callable[[Word], Chain], x: Chain, F: Field) -> Chain:
    out: Chain = {}
    for w, c in x.items():
        vec_axpy(F, out, c, fn(w))
    return out


@dataclass(frozen=True)
class Coderivation:
    """Coderivation of ``T_{<=L}(W)`` given by its Taylor coefficients."""

    W: GradedSpace
    taylor: Dict[int, MultilinearMap]
    degree: int
    L: int = 6
    field: Field = QQ

    def apply(self, word: Word) -> Chain:
        return apply_coderivation(self.taylor, self.degree, self.W, word, self.field)

    def apply_chain(self, x: Chain) -> Chain:
        return apply_linear(self.apply, x, self.field)

    def basis(self, counital: bool = False) -> List[Word]:
        return TruncatedTensorCoalgebra(self.W, self.L, counital).basis()

    def matrix(self, counital: bool = False) -> Tuple[List[Word], SparseMatrix]:
        basis = self.basis(counital)
        index = {w: i for i, w in enumerate(basis)}
        cols = []
        for w in basis:
            cols.append({index[k]: v for k, v in self.apply(w).items()})
        return basis, SparseMatrix.from_columns(len(basis), cols, self.field)

    def satisfies_coleibniz(self) -> bool:
        """Check ``Δ∘Q = (Q⊗1 + 1⊗Q)∘Δ`` on every word of length ``<= L``."""
        F = self.field
        T = TruncatedTensorCoalgebra(self.W, self.L, counital=True)
        odd = self.degree % 2
        for w in T.basis():
            lhs: Dict = {}
            for k, c in self.apply(w).items():
                for pair in T.coproduct(k):
                    vec_axpy(F, lhs, c, {pair: 1})
            rhs: Dict = {}
            for a, b in T.coproduct(w):
                for k, c in self.apply(a).items():
                    vec_axpy(F, rhs, c, {(k, b): 1})
                sign = -1 if odd and self.W.word_degree(a) % 2 else 1
                for k, c in self.apply(b).items():
                    vec_axpy(F, rhs, sign * c, {(a, k): 1})
            if lhs != rhs:
                return False
        return True


def extend_coderivation(taylor: Dict[int, MultilinearMap], L: int = 6,
                        degree: Optional[int] = None) -> Coderivation:
    if not taylor:
        raise ValueError("need at least the space; pass {1: zero map}")
    if 0 in taylor:
        raise MarkedPointError("arity-0 Taylor coefficient: the coderivation must vanish at the marked point")
    first = next(iter(taylor.values()))
    W, F = first.source, first.field
    degs = {b.degree for b in taylor.values() if not b.is_zero()}
    if degree is None:
        degree = degs.pop() if len(degs) == 1 else 1
    elif degs - {degree}:
        raise ValueError(f"Taylor coefficients have degrees {sorted(degs)}, expected {degree}")
    clean = {n: b for n, b in sorted(taylor.items()) if not b.is_zero()}
    for n, b in clean.items():
        if b.source != W or b.target != W or b.arity != n:
            raise ValueError(f"Taylor coefficient {n} has the wrong shape")
    return Coderivation(W, clean, degree, L, F)


def taylor_of_square_by_words(Q: Coderivation) -> Dict[int, MultilinearMap]:
    """Taylor coefficients of ``Q∘Q`` read off by applying ``Q`` twice to every word."""
    F, W = Q.field, Q.W
    out: Dict[int, MultilinearMap] = {}
    for n in range(1, Q.L + 1):
        ent: Dict[Word, Vector] = {}
        for w in words(W.dim, n):
            acc: Chain = {}
            for k, c in Q.apply(w).items():
                vec_axpy(F, acc, c, Q.apply(k))
            vec = {k[0]: v for k, v in acc.items() if len(k) == 1}
            if vec:
                ent[w] = vec
        out[n] = MultilinearMap(W, W, n, 2 * Q.degree, ent, F)
    return out


def taylor_of_square_by_composition(taylor: Dict[int, MultilinearMap], L: int) -> Dict[int, MultilinearMap]:
    """``Σ_{r+s+t=n} b_{r+1+t} ∘ (1^r ⊗ b_s ⊗ 1^t)`` for each ``n <= L``."""
    first = next(iter(taylor.values()))
    W, F = first.source, first.field
    deg = 2 * first.degree
    out: Dict[int, MultilinearMap] = {}
    for n in range(1, L + 1):
        total = MultilinearMap.zero(W, W, n, deg, F)
        for k, outer in taylor.items():
            s = n - k + 1
            if s < 1 or s not in taylor:
                continue
            for r in range(k):
                total = total + compose_at(outer, r, taylor[s])
        out[n] = total
    return out


def coderivation_square(Q: Coderivation) -> Coderivation:
    """``Q∘Q`` as a coderivation (nonzero exactly when the A∞ relations fail)."""
    sq = taylor_of_square_by_words(Q)
    return Coderivation(Q.W, {n: m for n, m in sq.items() if not m.is_zero()}, 2 * Q.degree, Q.L, Q.field)


# --------------------------------------------------------------- quivers

@dataclass(frozen=True)
class QuiverCoalgebra:
    """Path coalgebra of a quiver.  Paths are tuples of arrow names; the trivial
    path at vertex ``i`` is ``("1", i)`` written as the key ``(i,)`` with a
    leading marker handled by :meth:`trivial`."""

    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[str, str, str, int], ...]  # (name, source, target, degree)
    L: int = 6

    def arrow(self, name: str) -> Tuple[str, str, str, int]:
        for a in self.arrows:
            if a[0] == name:
                return a
        raise KeyError(name)

    @staticmethod
    def trivial(v: str) -> Tuple[str, ...]:
        return ("1_" + v,)

    def is_trivial(self, path) -> bool:
        return len(path) == 1 and path[0].startswith("1_") and path[0][2:] in self.vertices

    def endpoints(self, path) -> Tuple[str, str]:
        if self.is_trivial(path):
            v = path[0][2:]
            return v, v
        first, last = self.arrow(path[0]), self.arrow(path[-1])
        return first[1], last[2]

    def check_composable(self, path) -> None:
        if self.is_trivial(path):
            return
        if not path:
            raise CompositionError("empty path")
        for a, b in zip(path, path[1:]):
            if self.arrow(a)[2] != self.arrow(b)[1]:
                raise CompositionError(f"{a} then {b} is not composable")

    def basis(self) -> List[Tuple[str, ...]]:
        out = [self.trivial(v) for v in self.vertices]
        layer = [(a[0],) for a in self.arrows]
        n = 1
        while layer and n <= self.L:
            out.extend(layer)
            layer = [p + (a[0],) for p in layer for a in self.arrows if self.arrow(p[-1])[2] == a[1]]
            n += 1
        return out

    def coproduct(self, path) -> List[Tuple[Tuple[str, ...], Tuple[str, ...], int]]:
        self.check_composable(path)
        if self.is_trivial(path):
            return [(path, path, 1)]
        src, tgt = self.endpoints(path)
        n = len(path)
        out = []
        for m in range(n + 1):
            left = path[:m] if m > 0 else self.trivial(src)
            right = path[m:] if m < n else self.trivial(tgt)
            out.append((left, right, 1))
        return out

    def counit(self, path) -> int:
        return 1 if self.is_trivial(path) else 0

    def coproduct_of(self, x: Dict, F: Field = QQ) -> Dict:
        out: Dict = {}
        for p, c in x.items():
            for l, r, k in self.coproduct(p):
                vec_axpy(F, out, c * k, {(l, r): 1})
        return out


def quiver_coproduct(Qv: QuiverCoalgebra, path) -> List[Tuple[Tuple[str, ...], Tuple[str, ...], int]]:
    return Qv.coproduct(path)


# --------------------------------------------------------------- subcoalgebras

def _vec(x: Dict, index: Dict) -> Vector:
    return {index[k]: v for k, v in x.items() if v}


def _factor(F: Field, pairs: Dict[Tuple[Hashable, Hashable], object]):
    """Write ``Σ c_{kl} k ⊗ l`` as ``Σ_i a_i ⊗ b_i`` with independent ``a_i`` and ``b_i``."""
    lefts = sorted({k for k, _ in pairs}, key=repr)
    rights = sorted({l for _, l in pairs}, key=repr)
    li = {k: i for i, k in enumerate(lefts)}
    ri = {l: j for j, l in enumerate(rights)}
    rows = [dict() for _ in lefts]
    for (k, l), c in pairs.items():
        if c:
            rows[li[k]][ri[l]] = c
    # rows of the coefficient matrix C (lefts x rights); C = U V with V = echelon rows
    ech = Echelon(F)
    for r in rows:
        if r:
            ech.add(r)
    piv = sorted(ech.pivots)
    b_vecs = [{rights[j]: v for j, v in ech.pivots[p].items()} for p in piv]
    a_vecs = []
    for p in piv:
        col = {}
        for i, r in enumerate(rows):
            if r.get(p):
                col[lefts[i]] = r[p]
        a_vecs.append(col)
    return a_vecs, b_vecs


def subcoalgebra_closure(x: Dict, coproduct: Callable[[Dict], Dict], F: Field = QQ) -> List[Dict]:
    """Finite-dimensional subcoalgebra containing ``x``.

    ``Δx = Σ a_i ⊗ b_i`` with independent families; then ``Δa_i = Σ_j a_j ⊗ c_ij``
    and the span of ``x, a_i, b_i, c_ij`` is closed under the coproduct.  The
    returned list is an echelon basis (keys ordered by ``repr``).
    """
    a_vecs, b_vecs = _factor(F, coproduct(x))
    c_vecs: List[Dict] = []
    if a_vecs:
        keys = sorted({k for a in a_vecs for k in a}, key=repr)
        ki = {k: i for i, k in enumerate(keys)}
        U = SparseMatrix.from_columns(len(keys), [_vec(a, ki) for a in a_vecs], F)
        for a in a_vecs:
            da = coproduct(a)
            by_right: Dict[Hashable, Dict] = {}
            for (k, l), c in da.items():
                by_right.setdefault(l, {})[k] = c
            coeffs: Dict[int, Dict] = {}
            for l, col in by_right.items():
                if any(k not in ki for k in col):
                    raise ValueError("coproduct oracle is not coassociative")
                sol = solve(U, _vec(col, ki))
                if sol is None:
                    raise ValueError("coproduct oracle is not coassociative")
                for j, v in sol.items():
                    coeffs.setdefault(j, {})[l] = v
            c_vecs.extend(coeffs[j] for j in sorted(coeffs))
    span = [x] + a_vecs + b_vecs + c_vecs
    keys = sorted({k for v in span for k in v}, key=repr)
    ki = {k: i for i, k in enumerate(keys)}
    ech = Echelon(F)
    for v in span:
        ech.add(_vec(v, ki))
    return [{keys[j]: c for j, c in sorted(ech.pivots[p].items())} for p in sorted(ech.pivots)]


def is_subcoalgebra(basis: List[Dict], coproduct: Callable[[Dict], Dict], F: Field = QQ) -> bool:
    """Membership test ``Δ(S) ⊆ S ⊗ S``."""
    keys = sorted({k for v in basis for k in v}, key=repr)
    ki = {k: i for i, k in enumerate(keys)}
    ech = Echelon(F)
    for v in basis:
        ech.add(_vec(v, ki))
    for v in basis:
        a_vecs, b_vecs = _factor(F, coproduct(v))
        for vec in a_vecs + b_vecs:
            if any(k not in ki for k in vec) or not ech.contains(_vec(vec, ki)):
                return False
    return True
