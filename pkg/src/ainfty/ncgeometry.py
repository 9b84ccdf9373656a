"""Non-commutative formal geometry on a graded formal space ``X``.

Functions are (truncated) series in free graded variables ``x_i``; forms are
words in the letters ``x_i`` and ``dx_i`` (``|dx_i| = |x_i| + 1``), all signs
being Koszul signs in this single grading.  Cyclic forms are words modulo graded
rotation.  A letter is a pair ``(i, 0)`` for ``x_i`` or ``(i, 1)`` for ``dx_i``;
a form is a dict ``word -> coefficient``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .ainfinity import AInftyAlgebra
from .exactlinalg import QQ, Field, SparseMatrix, rank, solve

Letter = Tuple[int, int]
NWord = Tuple[Letter, ...]
Form = Dict[NWord, object]


class DegenerateFormError(ValueError):
    pass


class NotClosedError(ValueError):
    pass


class FormDegreeError(ValueError):
    pass


def _acc(F: Field, out: Dict, key, c) -> None:
    v = F.reduce(out.get(key, 0) + c)
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def add(F: Field, *forms: Form) -> Form:
    out: Form = {}
    for f in forms:
        for k, c in f.items():
            _acc(F, out, k, c)
    return out


def scale(F: Field, a, f: Form) -> Form:
    a = F(a)
    return {k: F.reduce(a * c) for k, c in f.items() if F.reduce(a * c)} if a else {}


@dataclass(frozen=True)
class NCSpace:
    """Free graded variables ``x_0..x_{n-1}`` of the given degrees."""
    degrees: Tuple[int, ...]
    names: Optional[Tuple[str, ...]] = None
    field: Field = QQ

    @property
    def n(self) -> int:
        return len(self.degrees)

    def name(self, i: int) -> str:
        return self.names[i] if self.names else f"x{i}"

    # -- degrees and signs
    def ldeg(self, letter: Letter) -> int:
        return self.degrees[letter[0]] + letter[1]

    def wdeg(self, word: NWord) -> int:
        return sum(self.ldeg(l) for l in word)

    def form_degree(self, word: NWord) -> int:
        return sum(l[1] for l in word)

    # -- algebra
    def mul(self, f: Form, g: Form) -> Form:
        F = self.field
        out: Form = {}
        for u, a in f.items():
            for v, b in g.items():
                _acc(F, out, u + v, a * b)
        return out

    def commutator(self, f: Form, g: Form) -> Form:
        F = self.field
        out = self.mul(f, g)
        for v, b in g.items():
            for u, a in f.items():
                s = -1 if (self.wdeg(u) * self.wdeg(v)) % 2 else 1
                _acc(F, out, v + u, -s * a * b)
        return out

    def truncate(self, f: Form, N: Optional[int]) -> Form:
        return dict(f) if N is None else {k: c for k, c in f.items() if len(k) <= N}

    # -- cyclic words
    def rotate(self, word: NWord, k: int) -> Tuple[int, NWord]:
        """Move the last ``k`` letters to the front, with Koszul sign."""
        if k % max(len(word), 1) == 0:
            return 1, word
        head, tail = word[:-k], word[-k:]
        s = (self.wdeg(head) * self.wdeg(tail)) % 2
        return (-1 if s else 1), tail + head

    def cyclic_reduce_word(self, word: NWord) -> Tuple[int, NWord]:
        """Canonical rotation (lexicographically least) and sign; sign 0 if the class vanishes."""
        if not word:
            return 1, word
        best = None
        for k in range(len(word)):
            s, w = self.rotate(word, k)
            if best is None or w < best[1]:
                best = (s, w)
        # a word equal to one of its rotations with the opposite sign is zero
        for k in range(1, len(word)):
            s, w = self.rotate(best[1], k)
            if w == best[1] and s == -1:
                return 0, best[1]
        return best

    def cyclic(self, f: Form) -> Form:
        F = self.field
        out: Form = {}
        for w, c in f.items():
            s, rep = self.cyclic_reduce_word(w)
            if s:
                _acc(F, out, rep, s * c)
        return out

    # -- de Rham differential
    def d(self, f: Form) -> Form:
        F = self.field
        out: Form = {}
        for w, c in f.items():
            pre = 0
            for k, l in enumerate(w):
                if l[1] == 0:
                    s = -1 if pre % 2 else 1
                    _acc(F, out, w[:k] + ((l[0], 1),) + w[k + 1:], s * c)
                pre += self.ldeg(l)
        return out

    def d_cycl(self, f: Form) -> Form:
        """de Rham differential on cyclic forms of form degree <= 1."""
        if any(self.form_degree(w) > 1 for w in f):
            raise FormDegreeError("d_cycl is represented up to 2-forms; got a 2-form input")
        return self.cyclic(self.d(f))

    def is_closed(self, f: Form) -> bool:
        """Closedness of a cyclic form of any degree (the 3-form is expanded and discarded)."""
        return not self.cyclic(self.d(f))

    def phi(self, alpha: Form) -> Form:
        """``a db -> (-1)^|a| [a, b]`` on cyclic 1-forms, in functions modulo constants.

        The sign makes the map kill exact forms when odd letters are present."""
        F = self.field
        out: Form = {}
        for w, c in alpha.items():
            if self.form_degree(w) != 1:
                raise FormDegreeError("phi takes 1-forms")
            pos = next(k for k, l in enumerate(w) if l[1] == 1)
            s, r = self.rotate(w, len(w) - 1 - pos)       # bring dx to the end
            a, b = r[:-1], ((r[-1][0], 0),)
            da, db = self.wdeg(a), self.wdeg(b)
            if da % 2:
                s = -s
            for term, sg in ((a + b, 1), (b + a, -1 if (da * db) % 2 == 0 else 1)):
                if term:
                    _acc(F, out, term, s * sg * c)
        return out

    # -- vector fields
    def euler(self) -> "VectorField":
        return VectorField(self, {i: {((i, 0),): self.field(1)} for i in range(self.n)}, 0)

    def random_series(self, rng, min_len: int, max_len: int, nterms: int, degree: Optional[int] = None,
                      letters: Sequence[int] = (0,), coeffs=(-2, -1, 1, 2, 3)) -> Form:
        """Random sparse form with words of the given letter kinds (for tests and demos)."""
        F = self.field
        pool = [(i, k) for i in range(self.n) for k in letters]
        out: Form = {}
        tries = 0
        while len(out) < nterms and tries < 50 * nterms:
            tries += 1
            m = rng.randint(min_len, max_len)
            w = tuple(rng.choice(pool) for _ in range(m))
            if degree is not None and self.wdeg(w) != degree:
                continue
            _acc(F, out, w, rng.choice(coeffs))
        return out


@dataclass
class VectorField:
    """Derivation ``x_i -> comps[i]`` of degree ``degree``."""
    space: NCSpace
    comps: Dict[int, Form]
    degree: int

    def __post_init__(self):
        sp = self.space
        for i, f in self.comps.items():
            for w in f:
                if sp.form_degree(w):
                    raise ValueError("vector field components must be functions")
                if sp.wdeg(w) != sp.degrees[i] + self.degree:
                    raise ValueError(f"component {i} has the wrong degree")

    def vanishes_at_origin(self) -> bool:
        return all(() not in f for f in self.comps.values())

    def _apply(self, f: Form, on_x, on_dx, deg: int) -> Form:
        sp = self.space
        F = sp.field
        out: Form = {}
        for w, c in f.items():
            pre = 0
            for k, l in enumerate(w):
                img = on_x(l[0]) if l[1] == 0 else on_dx(l[0])
                if img:
                    s = -1 if (deg * pre) % 2 else 1
                    for v, a in img.items():
                        _acc(F, out, w[:k] + v + w[k + 1:], s * a * c)
                pre += sp.ldeg(l)
        return out

    def __call__(self, f: Form) -> Form:
        """Action on functions (and, through ``lie``, on forms)."""
        return self.lie(f)

    def contract(self, f: Form) -> Form:
        """``i_v``: derivation of degree ``|v| - 1`` with ``i_v(x) = 0`` and ``i_v(dx_i) = v_i``."""
        return self._apply(f, lambda i: {}, lambda i: self.comps.get(i, {}), self.degree - 1)

    def lie(self, f: Form) -> Form:
        """``Lie_v``: derivation of degree ``|v|``, ``x_i -> v_i``, ``dx_i -> (-1)^|v| d v_i``."""
        sp = self.space
        sgn = -1 if self.degree % 2 else 1
        return self._apply(f, lambda i: self.comps.get(i, {}),
                           lambda i: scale(sp.field, sgn, sp.d(self.comps.get(i, {}))), self.degree)

    def bracket(self, other: "VectorField") -> "VectorField":
        """``[v, w] = v w - (-1)^{|v||w|} w v`` as derivations."""
        sp = self.space
        F = sp.field
        s = -1 if (self.degree * other.degree) % 2 else 1
        comps = {}
        for i in range(sp.n):
            c = add(F, self.lie(other.comps.get(i, {})), scale(F, -s, other.lie(self.comps.get(i, {}))))
            if c:
                comps[i] = c
        return VectorField(sp, comps, self.degree + other.degree)

    def truncated(self, N: int) -> "VectorField":
        return VectorField(self.space, {i: self.space.truncate(f, N) for i, f in self.comps.items()}, self.degree)


def random_vector_field(sp: NCSpace, rng, degree: int = 0, min_len: int = 1, max_len: int = 3,
                        nterms: int = 2) -> VectorField:
    comps = {i: sp.random_series(rng, min_len, max_len, nterms, degree=sp.degrees[i] + degree)
             for i in range(sp.n)}
    return VectorField(sp, {i: f for i, f in comps.items() if f}, degree)


def graded_commutator(F: Field, P, dP: int, R, dR: int, f: Form) -> Form:
    """``[P, R] f = P R f - (-1)^{|P||R|} R P f``."""
    s = -1 if (dP * dR) % 2 else 1
    return add(F, P(R(f)), scale(F, -s, R(P(f))))


def cartan_identities(sp: NCSpace, v: VectorField, w: VectorField, f: Form) -> Dict[str, bool]:
    """The Cartan calculus identities on a (non-cyclic) form ``f``; also valid after cyclic reduction."""
    F = sp.field
    d = sp.d
    iv, iw, Lv, Lw = v.contract, w.contract, v.lie, w.lie
    vw = v.bracket(w)
    dv, dw = v.degree, w.degree
    zero = lambda g: not sp.cyclic(g) and not g
    res = {
        "[d,d]=0": zero(d(d(f))),
        "[i_v,i_w]=0": zero(graded_commutator(F, iv, dv - 1, iw, dw - 1, f)),
        "Lie_v=[i_v,d]": zero(add(F, Lv(f), scale(F, -1, graded_commutator(F, iv, dv - 1, d, 1, f)))),
        "[d,Lie_v]=0": zero(graded_commutator(F, d, 1, Lv, dv, f)),
        "[Lie_v,i_w]=i_[v,w]": zero(add(F, graded_commutator(F, Lv, dv, iw, dw - 1, f), scale(F, -1, vw.contract(f)))),
        "[Lie_v,Lie_w]=Lie_[v,w]": zero(add(F, graded_commutator(F, Lv, dv, Lw, dw, f), scale(F, -1, vw.lie(f)))),
    }
    fx = {k: c for k, c in f.items() if not sp.form_degree(k)}
    res["i_v(g)=0,i_v(dg)=v(g)"] = zero(iv(fx)) and zero(add(F, iv(d(fx)), scale(F, -1, v.lie(fx))))
    return res


def cyclic_cartan_identities(sp: NCSpace, v: VectorField, w: VectorField, f: Form) -> Dict[str, bool]:
    """Same identities read in the cyclic quotient; also checks that every operator
    is well defined there (images of a rotated representative agree)."""
    F = sp.field
    base = cartan_identities(sp, v, w, f)
    ok = True
    for word, c in f.items():
        if len(word) < 2:
            continue
        s, r = sp.rotate(word, 1)
        for op in (sp.d, v.contract, v.lie, w.contract):
            a = sp.cyclic(op({word: c}))
            b = sp.cyclic(op({r: F.reduce(s * c)}))
            if a != b:
                ok = False
    base["well-defined on cyclic classes"] = ok
    return base


# --- the homological vector field of an A∞-algebra -------------------------

def space_of(A: AInftyAlgebra) -> NCSpace:
    """Coordinates on ``X`` are dual to ``W = A[1]``: ``|x_i| = -|w_i|``."""
    return NCSpace(tuple(-d for d in A.W.degrees), tuple(A.names), A.field)


def lie_Q_from_algebra(A: AInftyAlgebra) -> VectorField:
    """``Q(x_o) = Σ c x_{w_1} ... x_{w_n}`` for each structure constant ``b_n(w)_o = c``
    (the transpose of the bar coderivation; a derivation with ``Q^2 = 0``)."""
    sp = space_of(A)
    F = A.field
    comps: Dict[int, Form] = {}
    for b in A.ops.values():
        for ins, vec in b.entries.items():
            for o, c in vec.items():
                _acc(F, comps.setdefault(o, {}), tuple((i, 0) for i in ins), c)
    return VectorField(sp, {i: f for i, f in comps.items() if f}, 1)


def chain_to_form(word: Tuple[int, ...]) -> NWord:
    """Chain ``(x_0; x_1..x_n)`` as the cyclic 1-form ``x_1 ... x_n dx_0``."""
    return tuple((i, 0) for i in word[1:]) + ((word[0], 1),)


def form_to_chain(sp: NCSpace, word: NWord) -> Tuple[int, Tuple[int, ...]]:
    s, r = sp.rotate(word, len(word) - 1 - next(k for k, l in enumerate(word) if l[1] == 1))
    return s, (r[-1][0],) + tuple(l[0] for l in r[:-1])


def chain_form_sign(A: AInftyAlgebra, word: Tuple[int, ...]) -> int:
    """Sign in the pairing of chains with cyclic 1-forms under which ``Lie_Q`` is the transpose of ``b``."""
    Wd = A.W.degrees
    e = Wd[word[0]] * (1 + sum(Wd[i] for i in word[1:]))
    return -1 if e % 2 else 1


def lie_Q_transpose_defects(A: AInftyAlgebra, max_letters: int = 3) -> List[Tuple]:
    """Entries where ``Lie_Q`` on cyclic 1-forms differs from the transpose of chain ``b``."""
    from .graded import words
    from .hochschild import chain_b
    Q = lie_Q_from_algebra(A)
    sp = Q.space
    ws = [w for m in range(1, max_letters + 1) for w in words(A.dim, m)]
    bad = []
    for w in ws:
        img = sp.cyclic(Q.lie({chain_to_form(w): A.field(chain_form_sign(A, w))}))
        for w2 in ws:
            if len(w2) <= len(w):
                continue
            s, rep = sp.cyclic_reduce_word(chain_to_form(w2))
            lhs = A.field.reduce(img.get(rep, 0) * s * chain_form_sign(A, w2))
            rhs = chain_b(A, w2).get(w, 0)
            if lhs != rhs:
                bad.append((w, w2, lhs, rhs))
    return bad


# --- symplectic forms and Darboux normalization -----------------------------

def constant_part(sp: NCSpace, omega: Form) -> Form:
    return {w: c for w, c in omega.items() if len(w) == 2 and sp.form_degree(w) == 2}


def constant_matrix(sp: NCSpace, omega: Form) -> SparseMatrix:
    """``M[i][j]`` = coefficient of ``dx_i dx_j`` once ``ω_0`` is written as ``Σ M_ij dx_i dx_j``
    with both orders of each pair present (related by the rotation sign)."""
    F = sp.field
    ent = {}
    for w, c in sp.cyclic(constant_part(sp, omega)).items():
        (i, _), (j, _) = w
        ent[(i, j)] = F.reduce(ent.get((i, j), 0) + c)
        if i != j:
            s, _ = sp.rotate(w, 1)
            ent[(j, i)] = F.reduce(ent.get((j, i), 0) + s * c)
    return SparseMatrix(sp.n, sp.n, {k: v for k, v in ent.items() if v}, F)


def symplectic_check(sp: NCSpace, omega: Form) -> dict:
    """Closedness and nondegeneracy of the constant part; the degree of ``ω``."""
    omega = sp.cyclic(omega)
    if any(sp.form_degree(w) != 2 for w in omega):
        raise FormDegreeError("expected a 2-form")
    degs = {sp.wdeg(w) for w in omega}
    M = constant_matrix(sp, omega)
    nondeg = sp.n > 0 and rank(M) == sp.n
    return {"closed": sp.is_closed(omega), "constant_part_nondegenerate": nondeg,
            "degree": degs.pop() if len(degs) == 1 else None, "homogeneous": len(degs) <= 1}


@dataclass
class Substitution:
    """``x_i -> x_i + s_i`` with every ``s_i`` of order ``>= 2`` (identity linear part)."""
    space: NCSpace
    higher: Dict[int, Form]
    N: int

    def __post_init__(self):
        for f in self.higher.values():
            if any(len(w) < 2 or self.space.form_degree(w) for w in f):
                raise ValueError("substitution corrections must be functions of order >= 2")

    @classmethod
    def identity(cls, sp: NCSpace, N: int) -> "Substitution":
        return cls(sp, {}, N)

    def image(self, i: int) -> Form:
        return add(self.space.field, {((i, 0),): self.space.field(1)}, self.higher.get(i, {}))

    def _images(self):
        cached = self.__dict__.get("_img")
        if cached is None:
            sp = self.space
            cached = {}
            for i in range(sp.n):
                img = self.image(i)
                for l, f in (((i, 0), img), ((i, 1), sp.d(img))):
                    cached[l] = sorted(((v, b, len(v)) for v, b in f.items()), key=lambda t: t[2])
            self.__dict__["_img"] = cached
        return cached

    def pullback(self, f: Form) -> Form:
        """Replace ``x_i`` by its image and ``dx_i`` by ``d`` of it, truncated at order ``N``."""
        F = self.space.field
        N = self.N
        imgs = self._images()
        out: Form = {}
        for w, c in f.items():
            if len(w) > N:
                continue
            partial: Form = {(): c}
            for pos, l in enumerate(w):
                # every later letter contributes at least one letter
                room = N - (len(w) - pos - 1)
                nxt: Form = {}
                for u, a in partial.items():
                    cap = room - len(u)
                    for v, b, lv in imgs[l]:
                        if lv > cap:
                            break
                        _acc(F, nxt, u + v, a * b)
                partial = nxt
            for u, a in partial.items():
                _acc(F, out, u, a)
        return out

    def then(self, other: "Substitution") -> "Substitution":
        """Apply ``self`` first, then ``other``: ``(self.then(other))^* = other^* self^*``."""
        sp = self.space
        F = sp.field
        higher = {}
        for i in range(sp.n):
            img = other.pullback(self.image(i))
            _acc(F, img, ((i, 0),), -1)
            img = {w: c for w, c in img.items() if len(w) <= self.N}
            if img:
                higher[i] = img
        return Substitution(sp, higher, min(self.N, other.N))

    def inverse(self) -> "Substitution":
        """Order-``N`` inverse by fixed-point iteration ``t_i = -s_i(x + t)``."""
        sp = self.space
        F = sp.field
        inv = Substitution(sp, {}, self.N)
        # each pass fixes one more order; corrections start at order 2
        for _ in range(max(self.N - 1, 0)):
            new = {}
            for i in range(sp.n):
                t = scale(F, -1, inv.pullback(self.higher.get(i, {})))
                if t:
                    new[i] = t
            inv = Substitution(sp, new, self.N)
        return inv

    def is_identity(self) -> bool:
        return not any(self.higher.values())


def euler_primitive(sp: NCSpace, eta: Form) -> Form:
    """``i_E η / w`` for a closed cyclic form of pure weight ``w >= 1``: ``d_cycl`` of it is ``η``."""
    F = sp.field
    ws = {len(w) for w in eta}
    if len(ws) > 1 or 0 in ws:
        raise ValueError("euler_primitive needs a form of pure positive weight")
    if not eta:
        return {}
    w = ws.pop()
    if F.characteristic and F.characteristic <= w:
        raise ValueError("the Euler primitive divides by the weight")
    return scale(F, F.inv(F(w)), sp.cyclic(sp.euler().contract(eta)))


def _solve_contraction(sp: NCSpace, omega0: Form, alpha: Form, length: int) -> VectorField:
    """Degree-0 vector field ``v`` with components of word length ``length`` and ``i_v ω_0 = α`` (cyclic)."""
    F = sp.field
    unknowns = [(i, w) for i in range(sp.n)
                for w in itertools.product([(j, 0) for j in range(sp.n)], repeat=length)
                if sp.wdeg(w) == sp.degrees[i]]
    cols, rows = [], {}
    for i, w in unknowns:
        v = VectorField(sp, {i: {w: F(1)}}, 0)
        img = sp.cyclic(v.contract(omega0))
        col = {}
        for k, c in img.items():
            col[rows.setdefault(k, len(rows))] = c
        cols.append(col)
    target = sp.cyclic(alpha)
    for k in target:
        rows.setdefault(k, len(rows))
    M = SparseMatrix.from_columns(len(rows), cols, F)
    x = solve(M, {rows[k]: c for k, c in target.items()})
    if x is None:
        raise DegenerateFormError("i_v ω_0 = α has no solution")
    comps: Dict[int, Form] = {}
    for j, c in x.items():
        i, w = unknowns[j]
        _acc(F, comps.setdefault(i, {}), w, c)
    return VectorField(sp, {i: f for i, f in comps.items() if f}, 0)


@dataclass
class DarbouxResult:
    substitution: Substitution
    inverse: Substitution
    omega0: Form
    steps: int
    verified: bool
    inverse_verified: bool


def darboux_normalize(sp: NCSpace, omega: Form, N: int = 6) -> DarbouxResult:
    """Coordinates in which a closed 2-form with nondegenerate constant part is constant, through order ``N``.

    At each weight the lowest non-constant piece ``ω_l`` is closed, ``α = i_E ω_l / l``
    is a primitive, ``i_v ω_0 = α`` is solved, and ``x -> x - v`` removes ``ω_l``.
    """
    F = sp.field
    omega = sp.cyclic(omega)
    chk = symplectic_check(sp, omega)
    if not chk["constant_part_nondegenerate"]:
        raise DegenerateFormError("constant part is degenerate")
    if not chk["closed"]:
        raise NotClosedError("form is not closed")
    omega0 = sp.cyclic(constant_part(sp, omega))
    total = Substitution.identity(sp, N)
    current = {w: c for w, c in omega.items() if len(w) <= N}
    steps = 0
    for weight in range(3, N + 1):
        piece = {w: c for w, c in current.items() if len(w) == weight}
        if not piece:
            continue
        alpha = euler_primitive(sp, piece)
        v = _solve_contraction(sp, omega0, alpha, weight - 1)
        step = Substitution(sp, {i: scale(F, -1, f) for i, f in v.comps.items()}, N)
        total = total.then(step)
        current = sp.cyclic(step.pullback(current))
        steps += 1
    final = sp.cyclic(total.pullback(omega))
    verified = final == omega0
    inv = total.inverse()
    ident = all(inv.then(total).image(i) == {((i, 0),): F(1)} and total.then(inv).image(i) == {((i, 0),): F(1)}
                for i in range(sp.n))
    return DarbouxResult(total, inv, omega0, steps, verified, ident)


# ---------------------------------------------------------------- scalar products

@dataclass
class ScalarProductReport:
    degree: int
    n_max: int
    degree_ok: bool
    symmetric: bool
    nondegenerate: bool
    cyclic: bool
    witnesses: List[dict]

    @property
    def passed(self) -> bool:
        return self.degree_ok and self.symmetric and self.nondegenerate and self.cyclic

    def as_dict(self) -> dict:
        return {"degree": self.degree, "n_max": self.n_max, "degree_ok": self.degree_ok,
                "symmetric": self.symmetric, "nondegenerate": self.nondegenerate,
                "cyclic": self.cyclic, "pass": self.passed, "witnesses": self.witnesses}


def scalar_product_check(A: AInftyAlgebra, pairing: Optional[Dict[Tuple[int, int], object]] = None,
                         N_deg: Optional[int] = None, n_max: Optional[int] = None,
                         max_witnesses: int = 10) -> ScalarProductReport:
    """Graded symmetry, nondegeneracy and cyclicity of ``(m_n(a_1..a_n), a_{n+1})``.

    Cyclicity is tested on ``W = A[1]`` with ``<sa, sb> = (-1)^{|a|} (a, b)``:
    ``<b_n(w_1..w_n), w_{n+1}>`` must be invariant under moving ``w_{n+1}`` to the
    front with its Koszul sign.  Defaults come from ``A.pairing``.
    """
    F = A.field
    if pairing is None:
        pairing = A.pairing or {}
    if N_deg is None:
        N_deg = A.pairing_degree or 0
    pairing = {k: F.reduce(F(v)) for k, v in pairing.items() if F(v)}
    n_max = A.n_max if n_max is None else n_max
    deg = A.A.deg
    wdeg = A.W.deg
    names = A.names
    wit: List[dict] = []

    def note(kind, key, lhs, rhs):
        if len(wit) < max_witnesses:
            wit.append({"kind": kind, "args": [names[i] for i in key], "lhs": str(lhs), "rhs": str(rhs)})

    degree_ok = True
    for (i, j), c in sorted(pairing.items()):
        if deg(i) + deg(j) != N_deg:
            degree_ok = False
            note("degree", (i, j), c, 0)
    symmetric = True
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = pairing.get((i, j), F(0))
            rhs = F.reduce((-1) ** ((deg(i) * deg(j)) % 2) * pairing.get((j, i), F(0)))
            if lhs != rhs:
                symmetric = False
                note("symmetry", (i, j), lhs, rhs)
    M = SparseMatrix(A.dim, A.dim, dict(pairing), F)
    nondegenerate = A.dim > 0 and rank(M) == A.dim

    def sh(v: Dict[int, object], w: int):
        return F.reduce(sum((-1) ** (deg(i) % 2) * c * pairing.get((i, w), 0) for i, c in v.items()))

    cyclic = True
    for n in range(1, n_max + 1):
        bn = A.op(n)
        if bn.is_zero():
            continue
        for word in itertools.product(range(A.dim), repeat=n + 1):
            lhs = sh(bn(*word[:n]), word[n])
            rot = (word[n],) + word[:n - 1]
            sign = (-1) ** ((wdeg(word[n]) * sum(wdeg(i) for i in word[:n])) % 2)
            rhs = F.reduce(sign * sh(bn(*rot), word[n - 1]))
            if lhs != rhs:
                cyclic = False
                note(f"cyclic_n{n}", word, lhs, rhs)
    return ScalarProductReport(N_deg, n_max, degree_ok, symmetric, nondegenerate, cyclic, wit)


# ---------------------------------------------------------------- representation spaces

RVar = Tuple[int, int, int, int]   # (generator, 0 for x / 1 for dx, row, column)
Mono = Tuple[RVar, ...]
CForm = Dict[Mono, object]


class RepSpace:
    """Functions and forms on ``n x n`` matrix representations of an :class:`NCSpace`.

    Coordinates ``x_i^{ab}`` (degree ``|x_i|``) and ``dx_i^{ab}`` are graded-commutative;
    a monomial is stored as a sorted tuple with its Koszul sign absorbed.
    """

    def __init__(self, sp: NCSpace, n: int):
        if n < 1:
            raise ValueError("matrix size must be >= 1")
        self.sp = sp
        self.n = n
        self.field = sp.field

    def vdeg(self, v: RVar) -> int:
        return self.sp.degrees[v[0]] + v[1]

    def normalize(self, vars_: Sequence[RVar]) -> Tuple[int, Optional[Mono]]:
        """Sort with Koszul signs; ``(0, None)`` when an odd variable repeats."""
        seq = list(vars_)
        sign = 1
        for i in range(1, len(seq)):
            j = i
            while j > 0 and seq[j - 1] > seq[j]:
                if self.vdeg(seq[j - 1]) % 2 and self.vdeg(seq[j]) % 2:
                    sign = -sign
                seq[j - 1], seq[j] = seq[j], seq[j - 1]
                j -= 1
        for a, b in zip(seq, seq[1:]):
            if a == b and self.vdeg(a) % 2:
                return 0, None
        return sign, tuple(seq)

    def _add_mono(self, out: CForm, vars_: Sequence[RVar], c) -> None:
        s, m = self.normalize(vars_)
        if m is not None:
            _acc(self.field, out, m, s * c)

    def matrix(self, f: Form) -> Dict[Tuple[int, int], CForm]:
        """Entries of ``f(X̂_1, ..., dX̂_1, ...)`` with ``X̂_i = Σ x_i^{ab} e_{ab}``."""
        n = self.n
        out: Dict[Tuple[int, int], CForm] = {}
        for w, c in f.items():
            if not w:
                for a in range(n):
                    _acc(self.field, out.setdefault((a, a), {}), (), c)
                continue
            for idx in itertools.product(range(n), repeat=len(w) + 1):
                vars_ = [(l[0], l[1], idx[k], idx[k + 1]) for k, l in enumerate(w)]
                self._add_mono(out.setdefault((idx[0], idx[-1]), {}), vars_, c)
        return {k: v for k, v in out.items() if v}

    def matmul(self, P: Dict[Tuple[int, int], CForm], R: Dict[Tuple[int, int], CForm]):
        out: Dict[Tuple[int, int], CForm] = {}
        for (a, b), p in P.items():
            for (b2, e), r in R.items():
                if b != b2:
                    continue
                tgt = out.setdefault((a, e), {})
                for m1, c1 in p.items():
                    for m2, c2 in r.items():
                        self._add_mono(tgt, m1 + m2, c1 * c2)
        return {k: {m: c for m, c in v.items() if c} for k, v in out.items() if any(v.values())}

    def trace(self, f: Form) -> CForm:
        """The transfer of ``f``: trace of its matrix.  Rotation-invariant by construction."""
        out: CForm = {}
        for (a, b), p in self.matrix(f).items():
            if a == b:
                for m, c in p.items():
                    _acc(self.field, out, m, c)
        return out

    def d(self, g: CForm) -> CForm:
        """Commutative de Rham differential, ``x^{ab} -> dx^{ab}``."""
        out: CForm = {}
        for m, c in g.items():
            sign = 1
            for k, v in enumerate(m):
                if v[1] == 0:
                    self._add_mono(out, m[:k] + ((v[0], 1, v[2], v[3]),) + m[k + 1:], sign * c)
                if self.vdeg(v) % 2:
                    sign = -sign
        return out

    def constant_matrix(self, g: CForm) -> Tuple[List[RVar], SparseMatrix]:
        """Coefficient matrix of the constant part of a 2-form, on all ``dx_i^{ab}``."""
        F = self.field
        sp, n = self.sp, self.n
        idx = [(i, 1, a, b) for i in range(sp.n) for a in range(n) for b in range(n)]
        pos = {v: k for k, v in enumerate(idx)}
        ent: Dict[Tuple[int, int], object] = {}
        for m, c in g.items():
            if len(m) != 2 or m[0][1] != 1 or m[1][1] != 1:
                continue
            u, v = pos[m[0]], pos[m[1]]
            if u == v:
                ent[(u, u)] = F.reduce(ent.get((u, u), 0) + 2 * c)
            else:
                s = (-1) ** ((self.vdeg(m[0]) * self.vdeg(m[1])) % 2)
                ent[(u, v)] = F.reduce(ent.get((u, v), 0) + c)
                ent[(v, u)] = F.reduce(ent.get((v, u), 0) + s * c)
        return idx, SparseMatrix(len(idx), len(idx), {k: x for k, x in ent.items() if x}, F)

    def is_nondegenerate(self, g: CForm) -> bool:
        idx, M = self.constant_matrix(g)
        return rank(M) == len(idx)

    def var_name(self, v: RVar) -> str:
        base = self.sp.names[v[0]] if self.sp.names else f"x{v[0]}"
        return f"{'d' if v[1] else ''}{base}^{v[2] + 1}{v[3] + 1}"

    def to_json(self, g: CForm) -> List:
        return [[[self.var_name(v) for v in m], str(c)] for m, c in sorted(g.items())]


@dataclass
class RepTransferReport:
    n: int
    form_degree: int
    terms: int
    closed: Optional[bool]
    nondegenerate: Optional[bool]
    value: CForm


def rep_space_transfer(sp: NCSpace, f: Form, n: int) -> RepTransferReport:
    """Trace transfer of a cyclic word or form to ``n x n`` representations.

    For 2-forms the result is checked for closedness and for nondegeneracy of its
    constant part.
    """
    R = RepSpace(sp, n)
    degs = {sp.form_degree(w) for w in f}
    if len(degs) > 1 or (degs and max(degs) > 2):
        raise FormDegreeError("expected a homogeneous form of degree <= 2")
    fd = degs.pop() if degs else 0
    val = R.trace(f)
    closed = nondeg = None
    if fd == 2:
        closed = not R.d(val)
        nondeg = R.is_nondegenerate(val)
    return RepTransferReport(n, fd, len(val), closed, nondeg, val)
