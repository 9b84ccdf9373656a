"""``Centr(f)``, the endomorphism algebra ``End(A)``, the left-action morphism
``f_A: A -> End(A)`` and the Yoneda morphism ``A^op -> Centr(f_A)``.

``Centr(f)`` for ``f: A -> B`` lives on ``Π_{n<=L} Hom(W_A^{⊗n}, W_B)`` (higher
arities quotiented away; every operation preserves-or-raises arity).  A basis
element ``(w, o)`` is the map sending the word ``w`` to the basis vector ``o``
and everything else to zero; its degree is ``deg o - deg w``.
"""
from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Tuple

from .ainfinity import AInftyAlgebra, AInftyMorphism, _coalgebra_map
from .coalgebra import apply_coderivation
from .exactlinalg import Vector, vec_axpy
from .graded import GradedSpace, MultilinearMap, words


class NotStrictlyUnitalError(ValueError):
    pass


def _odd(x: int) -> int:
    return -1 if x % 2 else 1


def endomorphism_algebra(A: AInftyAlgebra) -> AInftyAlgebra:
    """``End(A, m_1)`` as a dg-algebra: ``m_2 = ∘``, ``m_1 = [m_1, -]``.

    Basis ``E[x>y]`` sends ``x`` to ``y``.
    """
    F, n = A.field, A.dim
    degA = A.A.degrees
    names = tuple(f"E[{A.names[i]}>{A.names[j]}]" for i in range(n) for j in range(n))
    degs = tuple(A.A.norm_degree(degA[j] - degA[i]) for i in range(n) for j in range(n))
    E = GradedSpace(names, degs, A.A.grading)
    idx = lambda i, j: i * n + j
    m2 = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                m2[(idx(j, k), idx(i, j))] = {idx(i, k): F(1)}
    m1a = A.m(1)
    m1 = {}
    for i in range(n):
        for j in range(n):
            vec: Vector = {}
            deg = degs[idx(i, j)]
            for o, c in m1a(j).items():          # m_1 ∘ E
                vec_axpy(F, vec, c, {idx(i, o): 1})
            for x in range(n):                   # -(-1)^{|E|} E ∘ m_1
                c = m1a(x).get(i)
                if c:
                    vec_axpy(F, vec, -_odd(deg) * c, {idx(x, j): 1})
            if vec:
                m1[(idx(i, j),)] = vec
    m_ops = {2: MultilinearMap(E, E, 2, 0, m2, F)}
    if m1:
        m_ops[1] = MultilinearMap(E, E, 1, 1, m1, F)
    unit = None
    return AInftyAlgebra.from_m(E, m_ops, F, strict_unit=unit, name=f"End({A.name})")


def left_action_morphism(A: AInftyAlgebra, n_max: Optional[int] = None) -> AInftyMorphism:
    """``f_A``: ``f_n(w) = s L_w`` with ``L_w(x) = (-1)^{|w|} b_{n+1}(w, x)`` (shifted degrees)."""
    B = endomorphism_algebra(A)
    F, n = A.field, A.dim
    Wd = A.W.degrees
    taylor = {}
    for k, b in A.ops.items():
        if k < 2:
            continue
        ent: Dict[Tuple[int, ...], Vector] = {}
        for key, vec in b.entries.items():
            w, x = key[:-1], key[-1]
            sign = _odd(sum(Wd[i] for i in w))
            acc = ent.setdefault(w, {})
            for o, c in vec.items():
                vec_axpy(F, acc, sign * c, {x * n + o: 1})
        taylor[k - 1] = MultilinearMap(A.W, B.W, k - 1, 0, {w: v for w, v in ent.items() if v}, F)
    return AInftyMorphism(A, B, taylor)


def centr(f: AInftyMorphism, L: int = 3) -> AInftyAlgebra:
    """The truncated A∞-algebra ``Centr(f)``.

    ``b_n(φ_1..φ_n)(a)`` sums ``b^B_l`` over all ways of cutting ``a`` into
    consecutive groups where group ``i`` of the marked ones feeds ``φ_i`` (possibly
    empty) and unmarked groups (nonempty) feed Taylor coefficients of ``f``;
    ``b_1`` additionally carries ``-(-1)^{|φ|} φ ∘ Q_A``.
    """
    A, B = f.source, f.target
    F = A.field
    WA, WB = A.W, B.W
    in_words = [w for k in range(L + 1) for w in words(A.dim, k)]
    keys = [(w, o) for w in in_words for o in range(B.dim)]
    index = {k: i for i, k in enumerate(keys)}
    names = tuple(f"{WB.names[o]}@({','.join(WA.names[i] for i in w)})" for w, o in keys)
    degs = tuple(WA.norm_degree(WB.degrees[o] - sum(WA.degrees[i] for i in w)) for w, o in keys)
    C = GradedSpace(names, degs, A.A.grading)

    gap_words = {g: [w for w in words(A.dim, g)] for g in range(L + 1)}
    fmap_cache: Dict[Tuple[int, ...], Dict] = {}

    def fmap(g):
        if g not in fmap_cache:
            fmap_cache[g] = _coalgebra_map(f.taylor, g, F)
        return fmap_cache[g]

    ops: Dict[int, Dict] = {}
    n_top = B.n_max
    for n in range(1, n_top + 1):
        if not any(l >= n for l in B.ops):
            continue
        table: Dict[Tuple[int, ...], Vector] = {}
        for phis in itertools.product(range(len(keys)), repeat=n):
            used = sum(len(keys[p][0]) for p in phis)
            if used > L:
                continue
            acc: Vector = {}
            for gaps in _gap_lengths(n + 1, L - used):
                for gw in itertools.product(*[gap_words[g] for g in gaps]):
                    # assemble the input word and the Koszul sign
                    word: Tuple[int, ...] = ()
                    sign_par = 0
                    pre = 0
                    for i in range(n):
                        pre += sum(WA.degrees[x] for x in gw[i])
                        sign_par += degs[phis[i]] * pre
                        w_i = keys[phis[i]][0]
                        pre += sum(WA.degrees[x] for x in w_i)
                        word += gw[i] + w_i
                    word += gw[n]
                    pieces = [fmap(gw[0])]
                    ok = bool(pieces[0])
                    for i in range(n):
                        pieces.append({(keys[phis[i]][1],): 1})
                        fm = fmap(gw[i + 1])
                        ok = ok and bool(fm)
                        pieces.append(fm)
                    if not ok:
                        continue
                    for combo in itertools.product(*[list(p.items()) for p in pieces]):
                        bw: Tuple[int, ...] = ()
                        coef = 1
                        for u, c in combo:
                            bw += u
                            coef *= c
                        bl = B.ops.get(len(bw))
                        if bl is None:
                            continue
                        out = bl.entries.get(bw)
                        if out:
                            for o, c in out.items():
                                vec_axpy(F, acc, _odd(sign_par) * coef * c, {index[(word, o)]: 1})
            if acc:
                table[phis] = acc
        ops[n] = table
    # the term -(-1)^{|φ|} φ ∘ Q_A
    QA = dict(A.ops)
    if QA:
        t1 = ops.setdefault(1, {})
        for a in in_words:
            if not a:
                continue
            for y, c in apply_coderivation(QA, 1, WA, a, F).items():
                for o in range(B.dim):
                    p = index[(y, o)]
                    acc = t1.setdefault((p,), {})
                    vec_axpy(F, acc, -_odd(degs[p]) * c, {index[(a, o)]: 1})
    maps = {n: MultilinearMap(C, C, n, 1, {k: v for k, v in t.items() if v}, F) for n, t in ops.items()}
    return AInftyAlgebra(C.shift(-1), maps, F, name=f"Centr({A.name}->{B.name})")


def _gap_lengths(k: int, budget: int):
    """Tuples of ``k`` nonnegative lengths with sum ``<= budget``."""
    if k == 0:
        yield ()
        return
    for g in range(budget + 1):
        for rest in _gap_lengths(k - 1, budget - g):
            yield (g,) + rest


def centr_key(C: AInftyAlgebra, A: AInftyAlgebra, B: AInftyAlgebra, L: int):
    """Index of the basis element ``(w, o)`` of ``centr(f, L)`` for ``f: A -> B``."""
    keys = [(w, o) for k in range(L + 1) for w in words(A.dim, k) for o in range(B.dim)]
    return {k: i for i, k in enumerate(keys)}


# --------------------------------------------------------------- explicit formulas for Centr(f_A)

def _map_degree(Wd, u, o) -> int:
    return Wd[o] - sum(Wd[i] for i in u)


def explicit_product(A: AInftyAlgebra, phi, psi, L: int) -> Dict:
    """``(φ·ψ)(a_1..a_N) = ±φ(a_1..a_{p-1}, ψ(a_p..a_N))`` on maps ``W^{k} -> W``.

    Maps are basis pairs ``(u, o)``; the sign is ``(-1)^{|ψ|·(a_1+..+a_{p-1}) + |φ|}``
    with ``|·|`` the map degree.
    """
    (u, o), (w, o2) = phi, psi
    if u[-1] != o2 or len(u) - 1 + len(w) > L + 1:
        return {}
    Wd = A.W.degrees
    pre = sum(Wd[i] for i in u[:-1])
    e = _map_degree(Wd, w, o2) * pre + _map_degree(Wd, u, o)
    return {(u[:-1] + w, o): _odd(e)}


def explicit_differential(A: AInftyAlgebra, phi, L: int) -> Dict:
    """``Σ ± m_i(a_1..a_{s-1}, φ(a_s..a_N)) + Σ ± φ(.., m_i(..), ..)``."""
    F, Wd = A.field, A.W.degrees
    u, o = phi
    d = _map_degree(Wd, u, o)
    out: Dict = {}
    for i, b in A.ops.items():
        for key, vec in b.entries.items():
            if key[-1] != o or len(key) - 1 + len(u) > L + 1:
                continue
            pre = sum(Wd[j] for j in key[:-1])
            s = _odd(d * pre)
            for oo, c in vec.items():
                vec_axpy(F, out, s * c, {(key[:-1] + u, oo): 1})
    # φ with an operation inserted: a = u[:r] + block + u[r+1:], block -> u[r]
    for r in range(len(u)):
        pre = sum(Wd[j] for j in u[:r])
        for i, b in A.ops.items():
            if len(u) - 1 + i > L + 1:
                continue
            for block, vec in b.entries.items():
                c = vec.get(u[r])
                if c:
                    s = _odd(1 + pre + d)
                    vec_axpy(F, out, s * c, {(u[:r] + block + u[r + 1:], o): 1})
    return out


def explicit_formula_discrepancies(A: AInftyAlgebra, L: int = 2) -> List[Tuple[str, ...]]:
    """Compare ``centr(f_A, L)`` with the explicit product/differential.

    ``Centr(f_A)`` is identified with ``Π_n Hom(W^{n+1}, W)`` by
    ``(w, E[x>o]) ↦ -(-1)^{|w|} (w x ↦ o)``; returns the inputs (as
    basis names) where the two sides differ.
    """
    F, n, Wd = A.field, A.dim, A.W.degrees
    C = centr(left_action_morphism(A), L)
    keys = [(w, e) for k in range(L + 1) for w in words(A.dim, k) for e in range(n * n)]

    def iota(k):
        w, e = k
        x, o = divmod(e, n)
        return (w + (x,), o), -_odd(sum(Wd[i] for i in w))

    def iv(vec):
        out: Dict = {}
        for i, c in vec.items():
            kk, s = iota(keys[i])
            vec_axpy(F, out, s * c, {kk: 1})
        return out

    bad = []
    b1, b2 = C.op(1), C.op(2)
    for i, k in enumerate(keys):
        kk, s = iota(k)
        rhs: Dict = {}
        vec_axpy(F, rhs, s, explicit_differential(A, kk, L))
        if iv(b1(i)) != rhs:
            bad.append(("d", C.names[i]))
    for i, k in enumerate(keys):
        p, s = iota(k)
        for j, k2 in enumerate(keys):
            q, t = iota(k2)
            rhs = {}
            vec_axpy(F, rhs, s * t, explicit_product(A, p, q, L))
            if iv(b2(i, j)) != rhs:
                bad.append(("·", C.names[i], C.names[j]))
    return bad


# --------------------------------------------------------------- Yoneda

def yoneda(A: AInftyAlgebra, L: int = 3) -> AInftyMorphism:
    """``Yo: A^op -> Centr(f_A)`` (truncated at arity ``L``).

    ``Yo_m(y_1..y_m)`` is the family ``w ↦ s(x ↦ κ b_{n+1+m}(w, x, y_m, .., y_1))``
    with ``κ = (-1)^{(|x|+1)·|y|}`` (``|y| = |y_1|+..+|y_m|``, shifted degrees).
    """
    from .ainfinity import opposite
    if A.strict_unit is None:
        raise NotStrictlyUnitalError("yoneda needs a strict unit; use adjoin_unit first")
    F, n, Wd = A.field, A.dim, A.W.degrees
    Aop = opposite(A)
    C = centr(left_action_morphism(A), L)
    idx = {(w, e): i for i, (w, e) in enumerate(
        (w, e) for k in range(L + 1) for w in words(A.dim, k) for e in range(n * n))}
    taylor: Dict[int, Dict] = {}
    for N, b in A.ops.items():
        for key, vec in b.entries.items():
            for m in range(1, N):
                k = N - 1 - m
                if k > L:
                    continue
                w, x, y = key[:k], key[k], key[k + 1:][::-1]
                dy = sum(Wd[i] for i in y)
                s = _odd((Wd[x] + 1) * dy)
                acc = taylor.setdefault(m, {}).setdefault(y, {})
                for o, c in vec.items():
                    vec_axpy(F, acc, s * c, {idx[(w, x * n + o)]: 1})
    maps = {m: MultilinearMap(Aop.W, C.W, m, 0, {y: v for y, v in t.items() if v}, F) for m, t in taylor.items()}
    return AInftyMorphism(Aop, C, maps)
