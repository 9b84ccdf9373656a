"""Graded vector spaces, Koszul signs and sparse multilinear maps.

Every sign in the package comes from the helpers here: an operator of degree
``k`` moved past arguments of total degree ``s`` contributes ``(-1)**(k*s)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from .exactlinalg import QQ, Field, Vector, vec_axpy


class SpaceMismatchError(ValueError):
    pass


class DegreeError(ValueError):
    pass


def koszul_sign(degrees_moved: Sequence[int], degrees_passed: Sequence[int]) -> int:
    """``(-1)**(sum(moved) * sum(passed))``."""
    return -1 if (sum(degrees_moved) * sum(degrees_passed)) % 2 else 1


def permutation_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Koszul sign of reordering graded symbols: output slot i holds input ``perm[i]``."""
    odd = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                odd += degrees[perm[i]] * degrees[perm[j]]
    return -1 if odd % 2 else 1


def rotation_sign(front: Sequence[int], back: Sequence[int]) -> int:
    """Sign of ``u v -> v u`` where ``u`` has degrees ``front``."""
    return koszul_sign(back, front)


def reversal_sign(degrees: Sequence[int]) -> int:
    n = len(degrees)
    return permutation_sign(degrees, list(range(n - 1, -1, -1)))


def decalage_sign(shifted_degrees: Sequence[int]) -> int:
    """Sign of ``(s^-1)^{⊗n}`` on ``x_1 ⊗ ... ⊗ x_n`` (each ``s^-1`` has degree +1)."""
    n = len(shifted_degrees)
    return -1 if sum((n - 1 - i) * d for i, d in enumerate(shifted_degrees)) % 2 else 1


@dataclass(frozen=True)
class GradedSpace:
    names: Tuple[str, ...]
    degrees: Tuple[int, ...]
    grading: str = "Z"

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names/degrees length mismatch")
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis names must be unique")
        if self.grading not in ("Z", "Z2"):
            raise ValueError(f"grading must be Z or Z2, got {self.grading!r}")
        if self.grading == "Z2" and any(d not in (0, 1) for d in self.degrees):
            raise ValueError("Z2 degrees must be 0 or 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, int]], grading: str = "Z") -> "GradedSpace":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(int(p[1]) for p in pairs), grading)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def deg(self, i: int) -> int:
        return self.degrees[i]

    def norm_degree(self, d: int) -> int:
        return d % 2 if self.grading == "Z2" else d

    def shift(self, k: int) -> "GradedSpace":
        """``V[k]``: same basis, degrees lowered by ``k``."""
        return GradedSpace(self.names, tuple(self.norm_degree(d - k) for d in self.degrees), self.grading)

    def basis_in_degree(self, d: int) -> List[int]:
        d = self.norm_degree(d)
        return [i for i, e in enumerate(self.degrees) if e == d]

    def direct_sum(self, other: "GradedSpace") -> "GradedSpace":
        if self.grading != other.grading:
            raise SpaceMismatchError("grading mismatch")
        return GradedSpace(self.names + other.names, self.degrees + other.degrees, self.grading)

    def word_degree(self, word: Sequence[int]) -> int:
        return self.norm_degree(sum(self.degrees[i] for i in word))


def words(dim: int, n: int) -> Iterable[Tuple[int, ...]]:
    """All index tuples of length ``n`` in lexicographic order."""
    if n == 0:
        yield ()
        return
    for w in words(dim, n - 1):
        for i in range(dim):
            yield w + (i,)


@dataclass(frozen=True)
class MultilinearMap:
    """A degree-homogeneous map ``source^{⊗arity} -> target`` stored sparsely."""

    source: GradedSpace
    target: GradedSpace
    arity: int
    degree: int
    entries: Dict[Tuple[int, ...], Vector] = field(default_factory=dict)
    field: Field = QQ

    def __post_init__(self):
        clean = {}
        for key, vec in self.entries.items():
            if len(key) != self.arity:
                raise ValueError(f"entry {key} has wrong arity for {self.arity}")
            vec = {k: v for k, v in vec.items() if v}
            if not vec:
                continue
            want = self.target.norm_degree(self.source.word_degree(key) + self.degree)
            for o in vec:
                if self.target.degrees[o] != want:
                    raise DegreeError(
                        f"entry {key}->{o}: degree {self.target.degrees[o]} != {want}")
            clean[key] = vec
        object.__setattr__(self, "entries", clean)

    def __call__(self, *args: int) -> Vector:
        return self.entries.get(tuple(args), {})

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, MultilinearMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.arity == other.arity and self.entries == other.entries
                and (self.degree == other.degree or self.is_zero()))

    def __hash__(self):
        return hash((self.source, self.target, self.arity, len(self.entries)))

    def __add__(self, other: "MultilinearMap") -> "MultilinearMap":
        if (self.source, self.target, self.arity) != (other.source, other.target, other.arity):
            raise SpaceMismatchError("cannot add maps with different shapes")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise DegreeError("cannot add maps of different degree")
        F = self.field
        ent = {k: dict(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            acc = ent.setdefault(k, {})
            vec_axpy(F, acc, 1, v)
        return MultilinearMap(self.source, self.target, self.arity, self.degree, ent, F)

    def scale(self, a) -> "MultilinearMap":
        F = self.field
        a = F(a)
        ent = {k: {o: F.reduce(a * c) for o, c in v.items()} for k, v in self.entries.items()} if a else {}
        return MultilinearMap(self.source, self.target, self.arity, self.degree, ent, F)

    @classmethod
    def identity(cls, V: GradedSpace, F: Field = QQ) -> "MultilinearMap":
        return cls(V, V, 1, 0, {(i,): {i: F(1)} for i in range(V.dim)}, F)

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, arity: int, degree: int,
             F: Field = QQ) -> "MultilinearMap":
        return cls(source, target, arity, degree, {}, F)


def compose_at(outer: MultilinearMap, r: int, inner: MultilinearMap) -> MultilinearMap:
    """``outer ∘ (id^{r} ⊗ inner ⊗ id^{rest})`` with the Koszul sign of moving
    ``inner`` past the first ``r`` inputs (``r`` is 0-based)."""
    if inner.target != outer.source or inner.source != outer.source:
        raise SpaceMismatchError("compose_at needs inner: V^n -> V and outer: V^m -> W")
    if not 0 <= r < outer.arity:
        raise ValueError(f"slot {r} outside arity {outer.arity}")
    F = outer.field
    if F != inner.field:
        raise SpaceMismatchError("field mismatch")
    V = outer.source
    n = inner.arity
    arity = outer.arity + n - 1
    by_slot: Dict[int, List[Tuple[Tuple[int, ...], Vector]]] = {}
    for key, vec in outer.entries.items():
        by_slot.setdefault(key[r], []).append((key, vec))
    ent: Dict[Tuple[int, ...], Vector] = {}
    odd_inner = inner.degree % 2
    for ikey, ivec in inner.entries.items():
        for mid, c in ivec.items():
            for okey, ovec in by_slot.get(mid, ()):
                prefix = okey[:r]
                new_key = prefix + ikey + okey[r + 1:]
                sign = -1 if odd_inner and V.word_degree(prefix) % 2 else 1
                acc = ent.setdefault(new_key, {})
                vec_axpy(F, acc, F.reduce(sign * c), ovec)
    return MultilinearMap(V, outer.target, arity, outer.degree + inner.degree, ent, F)
