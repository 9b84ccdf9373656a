"""Independent oracles for the test-suite (written against classical formulas,
not against the library's shifted conventions)."""
from __future__ import annotations

import itertools
from typing import Dict, Tuple

import sympy


def stasheff_defects(A, L: int = 4) -> Dict[Tuple[int, ...], Dict[int, object]]:
    """Σ_{r+s+t=n} (-1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) on every basis word of length n <= L.

    Uses the classical ``m_n`` tables with ``|m_n| = 2 - n`` and the Koszul rule on elements.
    """
    F = A.field
    m = {n: A.m(n) for n in A.ops}
    deg = A.A.degrees
    out = {}
    for n in range(1, L + 1):
        for word in itertools.product(range(A.dim), repeat=n):
            acc: Dict[int, object] = {}
            for s in m:
                for r in range(0, n - s + 1):
                    t = n - r - s
                    u = r + 1 + t
                    if u not in m:
                        continue
                    sign = (-1) ** ((r + s * t) % 2)
                    sign *= (-1) ** (((2 - s) * sum(deg[i] for i in word[:r])) % 2)
                    for mid, c in m[s](*word[r:r + s]).items():
                        for o, c2 in m[u](*(word[:r] + (mid,) + word[r + s:])).items():
                            acc[o] = F.reduce(acc.get(o, 0) + sign * c * c2)
            acc = {o: c for o, c in acc.items() if c}
            if acc:
                out[word] = acc
    return out


def dense_hochschild_dims(table, dim: int, max_n: int):
    """Classical Hochschild homology of an ungraded associative algebra.

    ``table[(i, j)] = {k: c}`` is the product.  Returns ``{n: dim HH_n}`` for
    ``n < max_n`` from dense sympy ranks of ``b: A^{⊗(n+1)} -> A^{⊗n}``.
    """
    def basis(n):
        return list(itertools.product(range(dim), repeat=n + 1))

    def bmat(n):
        src, tgt = basis(n), basis(n - 1)
        idx = {w: k for k, w in enumerate(tgt)}
        M = sympy.zeros(len(tgt), len(src))
        for col, w in enumerate(src):
            for i in range(n):
                for k, c in table.get((w[i], w[i + 1]), {}).items():
                    M[idx[w[:i] + (k,) + w[i + 2:]], col] += (-1) ** i * c
            for k, c in table.get((w[n], w[0]), {}).items():
                M[idx[(k,) + w[1:n]], col] += (-1) ** n * c
        return M

    ranks = {n: bmat(n).rank() for n in range(1, max_n + 1)}
    ranks[0] = 0
    return {n: dim ** (n + 1) - ranks[n] - ranks[n + 1] for n in range(max_n)}


def perturb(A, rng, max_arity: int = 3):
    """Add one random degree-correct term to a classical operation table of ``A``."""
    from ainfty.ainfinity import AInftyAlgebra
    tables = A.tables("m")
    names, degs = A.names, A.A.degrees
    while True:
        n = rng.randint(1, max_arity)
        key = tuple(rng.randrange(A.dim) for _ in range(n))
        want = sum(degs[i] for i in key) + 2 - n
        outs = [o for o in range(A.dim) if degs[o] == want]
        if outs:
            break
    o = names[rng.choice(outs)]
    c = rng.choice([-2, -1, 1, 2, 3])
    t = {k: dict(v) for k, v in tables.get(n, {}).items()}
    kk = tuple(names[i] for i in key)
    vec = t.setdefault(kk, {})
    vec[o] = vec.get(o, 0) + c
    tables[n] = t
    return AInftyAlgebra.from_tables(list(zip(names, degs)), tables, A.field, name=A.name + "~")
