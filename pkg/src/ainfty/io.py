"""Algebra JSON format.

::

    {"name": "D", "field": "QQ", "grading": "Z", "convention": "m",
     "basis": [["e", 0], ["eps", 0]],
     "ops": {"2": [[["e", "e"], {"e": "1"}], ...]},
     "unit": "e",
     "pairing": {"degree": 0, "entries": [["e", "eps", "1"], ...]}}

Forms on a formal space (``NCSpace``) use::

    {"field": "QQ", "generators": [["x", 0], ["y", 0]],
     "terms": [[[["dx", "x"], ["dx", "y"]], "1"], ...]}

where each letter is ``["x", name]`` or ``["dx", name]``.

Coefficients are exact strings (``"-3/7"``); ``convention`` is ``m`` (classical
operations on ``A``) or ``b`` (shifted operations on ``A[1]``).  Serialization
always writes the ``m`` convention with sorted keys.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .ainfinity import AInftyAlgebra, AInftyMorphism
from .graded import GradedSpace, MultilinearMap, decalage_sign
from .modules import AInftyBimodule, bimodule_from_m
from .exactlinalg import Field
from .ncgeometry import Form, NCSpace


class FormatError(ValueError):
    pass


def algebra_from_dict(d: dict) -> AInftyAlgebra:
    try:
        F = Field.parse(d.get("field", "QQ"))
        basis = [(str(n), int(k)) for n, k in d["basis"]]
        tables = {}
        for n, rows in d.get("ops", {}).items():
            t = tables.setdefault(int(n), {})
            for ins, out in rows:
                if len(ins) != int(n):
                    raise FormatError(f"op {n}: input {ins} has the wrong length")
                t[tuple(ins)] = {o: F(c) for o, c in out.items()}
        pairing = None
        if "pairing" in d:
            names = [b[0] for b in basis]
            pairing = {(names.index(a), names.index(b)): F(c)
                       for a, b, c in d["pairing"]["entries"] if F(c)}
        return AInftyAlgebra.from_tables(
            basis, tables, F, convention=d.get("convention", "m"), grading=d.get("grading", "Z"),
            strict_unit=d.get("unit"), name=d.get("name", "A"), pairing=pairing,
            pairing_degree=d["pairing"].get("degree", 0) if "pairing" in d else None)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed algebra: {exc}") from exc


def algebra_to_dict(A: AInftyAlgebra) -> dict:
    F = A.field
    ops = {}
    for n, table in sorted(A.tables("m").items()):
        ops[str(n)] = [[list(k), {o: F.to_str(c) for o, c in sorted(v.items())}]
                       for k, v in sorted(table.items())]
    d = {"name": A.name, "field": str(F),
         "grading": A.A.grading, "convention": "m",
         "basis": [[n, k] for n, k in zip(A.A.names, A.A.degrees)], "ops": ops}
    if A.strict_unit is not None:
        d["unit"] = A.strict_unit
    if A.pairing is not None:
        d["pairing"] = {"degree": A.pairing_degree or 0,
                        "entries": [[A.names[i], A.names[j], F.to_str(c)]
                                    for (i, j), c in sorted(A.pairing.items())]}
    return d


def load_algebra(path: Union[str, Path]) -> AInftyAlgebra:
    try:
        with open(path, encoding="utf-8") as fh:
            return algebra_from_dict(json.load(fh))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_algebra(A: AInftyAlgebra, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(algebra_to_dict(A)), encoding="utf-8")


def form_from_dict(d: dict):
    """Parse ``(space, form)``; repeated words are summed."""
    try:
        F = Field.parse(d.get("field", "QQ"))
        gens = [(str(n), int(k)) for n, k in d["generators"]]
        names = [g[0] for g in gens]
        sp = NCSpace(tuple(k for _, k in gens), tuple(names), F)
        form: Form = {}
        for word, c in d.get("terms", []):
            w = []
            for tag, name in word:
                if tag not in ("x", "dx"):
                    raise FormatError(f"letter tag must be x or dx, got {tag!r}")
                w.append((names.index(name), int(tag == "dx")))
            w = tuple(w)
            form[w] = F.reduce(form.get(w, F(0)) + F(c))
        return sp, {w: c for w, c in form.items() if c}
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed form: {exc}") from exc


def form_to_dict(sp: NCSpace, form: Form) -> dict:
    F = sp.field
    return {"field": str(F),
            "generators": [[sp.name(i), k] for i, k in enumerate(sp.degrees)],
            "terms": [[[["dx" if t else "x", sp.name(i)] for i, t in w], F.to_str(c)]
                      for w, c in sorted(form.items()) if c]}


def load_form(path: Union[str, Path]):
    try:
        with open(path, encoding="utf-8") as fh:
            return form_from_dict(json.load(fh))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _algebra_ref(ref, base: Path, cache: dict):
    """An algebra given inline, as a path relative to the referring file, or ``null``."""
    if ref is None:
        return None
    if isinstance(ref, dict):
        return algebra_from_dict(ref)
    path = (base / ref).resolve()
    if path not in cache:
        cache[path] = load_algebra(path)
    return cache[path]


def morphism_from_dict(d: dict, base: Path = Path(".")) -> AInftyMorphism:
    """``{"source": alg, "target": alg, "convention": "m", "components": {"1": [[["x"], {"y": "1"}]]}}``.

    In the ``m`` convention ``f_n`` has degree ``1 - n``; it is moved to ``A[1]`` with
    the décalage sign.
    """
    try:
        cache: dict = {}
        A = _algebra_ref(d["source"], base, cache)
        B = _algebra_ref(d["target"], base, cache)
        F = A.field
        conv = d.get("convention", "m")
        taylor = {}
        for n, rows in d.get("components", {}).items():
            n = int(n)
            ent = {}
            for ins, out in rows:
                key = tuple(A.A.index(x) for x in ins)
                if len(key) != n:
                    raise FormatError(f"f_{n}: input {ins} has the wrong length")
                sign = decalage_sign([A.W.degrees[i] for i in key]) if conv == "m" else 1
                vec = {B.A.index(o): F.reduce(sign * F(c)) for o, c in out.items() if F(c)}
                if vec:
                    ent[key] = vec
            taylor[n] = MultilinearMap(A.W, B.W, n, 0, ent, F)
        return AInftyMorphism(A, B, taylor)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed morphism: {exc}") from exc


def module_from_dict(d: dict, base: Path = Path(".")) -> AInftyBimodule:
    """``{"left": alg|null, "right": alg|null, "basis": [["m", 0]], "actions": [[["a"], "m", [], {"m": "1"}]]}``
    with classical (``m``-convention) actions."""
    try:
        cache: dict = {}
        left = _algebra_ref(d.get("left"), base, cache)
        right = _algebra_ref(d.get("right"), base, cache)
        if left is None and right is None:
            raise FormatError("a module needs at least one acting algebra")
        F = (left or right).field
        M = GradedSpace.from_pairs([(str(n), int(k)) for n, k in d["basis"]], (left or right).A.grading)
        tables = {}
        for lw, v, rw, out in d.get("actions", []):
            tables[(tuple(lw), v, tuple(rw))] = out
        return bimodule_from_m(left, right, M, tables, F, d.get("name", "M"))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed module: {exc}") from exc


def load_json(path: Union[str, Path]) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
