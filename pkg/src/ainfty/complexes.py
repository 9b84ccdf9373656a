"""Finite slices of cochain complexes (differential of degree +1) and their homology."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

from .exactlinalg import Echelon, Field, SparseMatrix, Vector, kernel_from_rref, rank, rref


class SubcomplexError(ValueError):
    """The differential leaves the chosen basis."""


@dataclass
class ComplexSlice:
    keys: List[Hashable]
    degrees: List[int]
    d: SparseMatrix
    field: Field
    L: Optional[int] = None
    tags: Optional[List[int]] = None          # tensor length of each basis element
    exact: Dict[int, bool] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.index = {k: i for i, k in enumerate(self.keys)}

    @property
    def dim(self) -> int:
        return len(self.keys)

    def degree_set(self, fold: bool = False) -> List[int]:
        return sorted({self._deg(i, fold) for i in range(self.dim)})

    def _deg(self, i: int, fold: bool) -> int:
        return self.degrees[i] % 2 if fold else self.degrees[i]

    def squares_to_zero(self) -> bool:
        return (self.d @ self.d).is_zero()

    def columns_in_degree(self, deg: int, fold: bool = False) -> List[int]:
        return [i for i in range(self.dim) if self._deg(i, fold) == deg]

    def _block(self, cols: List[int]) -> SparseMatrix:
        dcols = self.d.col_dicts()
        ent = {(r, j): v for j, c in enumerate(cols) for r, v in dcols[c].items()}
        return SparseMatrix(self.dim, len(cols), ent, self.field)

    def _rank_from(self, deg: int, fold: bool) -> int:
        cols = self.columns_in_degree(deg, fold)
        return rank(self._block(cols)) if cols else 0

    def homology_dims(self, degrees: Optional[Iterable[int]] = None, fold: bool = False) -> Dict[int, int]:
        """``dim H^k`` for each requested degree (``fold`` reads degrees mod 2)."""
        if degrees is None:
            degrees = self.degree_set(fold)
        out = {}
        cache: Dict[int, int] = {}

        def rk(k):
            if k not in cache:
                cache[k] = self._rank_from(k, fold)
            return cache[k]

        for k in degrees:
            n = len(self.columns_in_degree(k, fold))
            prev = (k - 1) % 2 if fold else k - 1
            out[k] = n - rk(k) - rk(prev)
        return out

    def homology_basis(self, deg: int) -> Tuple[List[Vector], List[Vector]]:
        """Cycle representatives of ``H^deg`` and a basis of boundaries in that degree."""
        F = self.field
        cols = self.columns_in_degree(deg)
        piv, rows = rref(self._block(cols))
        cycles = [{cols[j]: c for j, c in z.items()} for z in kernel_from_rref(len(cols), rows, F)]
        prev = self.columns_in_degree(deg - 1)
        ech = Echelon(F)
        boundaries = []
        dcols = self.d.col_dicts()
        for j in prev:
            v = dcols[j]
            if v and ech.add(v):
                boundaries.append(v)
        reps = [z for z in cycles if ech.add(z)]
        return reps, boundaries

    def as_dict(self, window: Optional[Tuple[int, int]] = None) -> dict:
        degs = self.degree_set()
        if window:
            degs = list(range(window[0], window[1] + 1))
        dims = self.homology_dims(degs)
        return {str(k): {"dim": dims[k], "status": "exact" if self.exact.get(k, False) else "truncated"}
                for k in degs}


def assemble(keys: List[Hashable], degree_of: Callable[[Hashable], int],
             apply: Callable[[Hashable], Dict[Hashable, object]], F: Field, *,
             project: bool = False, tag_of: Optional[Callable[[Hashable], int]] = None,
             L: Optional[int] = None, name: str = "") -> ComplexSlice:
    """Matrix of ``apply`` on the basis ``keys``.

    Outputs outside the basis raise :class:`SubcomplexError` unless ``project``
    is set, in which case they are dropped (a quotient complex).
    """
    index = {k: i for i, k in enumerate(keys)}
    ent = {}
    for j, k in enumerate(keys):
        for out, c in apply(k).items():
            if not c:
                continue
            i = index.get(out)
            if i is None:
                if project:
                    continue
                raise SubcomplexError(f"{out!r} (from {k!r}) is outside the slice")
            ent[(i, j)] = c
    tags = [tag_of(k) for k in keys] if tag_of else None
    return ComplexSlice(list(keys), [degree_of(k) for k in keys], SparseMatrix(len(keys), len(keys), ent, F),
                        F, L, tags, name=name)


def flag_exact(slice_: ComplexSlice, reachable_longer: Callable[[int], bool]) -> ComplexSlice:
    """Mark degree ``k`` exact when no omitted basis element sits in degree ``k`` or ``k-1``."""
    for k in slice_.degree_set():
        slice_.exact[k] = not (reachable_longer(k) or reachable_longer(k - 1))
    return slice_


def stable_degrees(a: ComplexSlice, b: ComplexSlice, degrees: Iterable[int]) -> Dict[int, bool]:
    """Degrees where the homology of two truncations agrees."""
    da, db = a.homology_dims(degrees), b.homology_dims(degrees)
    return {k: da[k] == db[k] for k in da}


def inclusion_image_dims(small: ComplexSlice, big: ComplexSlice, degrees: Iterable[int],
                         fold: bool = False) -> Dict[int, int]:
    """``dim im(H^k(small) -> H^k(big))`` for a subcomplex ``small`` of ``big`` (matched by key)."""
    F = big.field
    emb = [big.index[k] for k in small.keys]
    scols, bcols = small.d.col_dicts(), big.d.col_dicts()
    out = {}
    for k in degrees:
        cols = small.columns_in_degree(k, fold)
        ent = {(r, j): v for j, c in enumerate(cols) for r, v in scols[c].items()}
        piv, rows = rref(SparseMatrix(small.dim, len(cols), ent, F))
        cycles = [{emb[cols[j]]: c for j, c in z.items()} for z in kernel_from_rref(len(cols), rows, F)]
        prev = (k - 1) % 2 if fold else k - 1
        ech = Echelon(F)
        for j in big.columns_in_degree(prev, fold):
            if bcols[j]:
                ech.add(bcols[j])
        base = ech.rank
        for z in cycles:
            ech.add(z)
        out[k] = ech.rank - base
    return out


def persistence(small: ComplexSlice, big: ComplexSlice, degrees: Iterable[int],
                fold: bool = False) -> Dict[int, dict]:
    """Per degree: dims of both homologies, the image of the inclusion, and whether it is an isomorphism."""
    degrees = list(degrees)
    ds, db = small.homology_dims(degrees, fold), big.homology_dims(degrees, fold)
    im = inclusion_image_dims(small, big, degrees, fold)
    return {k: {"dim": ds[k], "dim_next": db[k], "image": im[k], "stable": ds[k] == db[k] == im[k]}
            for k in degrees}
