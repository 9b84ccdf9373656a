"""The fixture corpus as Python constructors.

The JSON files under ``fixtures/`` in the repository are generated from these
(``python -m ainfty.fixtures fixtures/``) and a test keeps the two in sync.
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Callable, Dict

from .ainfinity import AInftyAlgebra
from .exactlinalg import QQ, Field


def K(F: Field = QQ) -> AInftyAlgebra:
    """The ground field, ``m_2(1,1) = 1``."""
    return AInftyAlgebra.from_tables([("1", 0)], {2: {("1", "1"): {"1": 1}}}, F, strict_unit="1", name="K")


def line(F: Field = QQ) -> AInftyAlgebra:
    """One generator with ``m_2 = id`` and no declared unit (the dg-line)."""
    return AInftyAlgebra.from_tables([("x", 0)], {2: {("x", "x"): {"x": 1}}}, F, name="L")


def dual_numbers(F: Field = QQ, paired: bool = False) -> AInftyAlgebra:
    """``k[ε]/(ε²)`` with basis ``e`` (unit) and ``eps``."""
    m2 = {("e", "e"): {"e": 1}, ("e", "eps"): {"eps": 1}, ("eps", "e"): {"eps": 1}}
    kw = {}
    if paired:
        kw = dict(pairing={(0, 1): F(1), (1, 0): F(1)}, pairing_degree=0)
    return AInftyAlgebra.from_tables([("e", 0), ("eps", 0)], {2: m2}, F, strict_unit="e",
                                     name="D" + ("_frob" if paired else ""), **kw)


def exterior(F: Field = QQ, paired: bool = False) -> AInftyAlgebra:
    """``k⟨ξ⟩/(ξ²)`` with ``ξ`` odd (degree 1) and zero differential."""
    m2 = {("1", "1"): {"1": 1}, ("1", "xi"): {"xi": 1}, ("xi", "1"): {"xi": 1}}
    kw = {}
    if paired:
        kw = dict(pairing={(0, 1): F(1), (1, 0): F(1)}, pairing_degree=1)
    return AInftyAlgebra.from_tables([("1", 0), ("xi", 1)], {2: m2}, F, strict_unit="1",
                                     name="Lambda" + ("_frob" if paired else ""), **kw)


def contractible(F: Field = QQ) -> AInftyAlgebra:
    """``m_1(x) = y`` and nothing else."""
    return AInftyAlgebra.from_tables([("x", 0), ("y", 1)], {1: {("x",): {"y": 1}}}, F, name="CONTR")


def quiver_a2(F: Field = QQ) -> AInftyAlgebra:
    """Path algebra of ``1 --a--> 2``; paths compose left to right."""
    m2 = {("e1", "e1"): {"e1": 1}, ("e2", "e2"): {"e2": 1},
          ("e1", "a"): {"a": 1}, ("a", "e2"): {"a": 1}}
    return AInftyAlgebra.from_tables([("e1", 0), ("e2", 0), ("a", 0)], {2: m2}, F, name="QA2")


def broken(F: Field = QQ) -> AInftyAlgebra:
    """Non-associative: ``(aa)a = 0`` but ``a(aa) = a``."""
    m2 = {("a", "a"): {"b": 1}, ("a", "b"): {"a": 1}}
    return AInftyAlgebra.from_tables([("a", 0), ("b", 0)], {2: m2}, F, name="broken")


def massey(F: Field = QQ) -> AInftyAlgebra:
    """A dg-algebra with a nonvanishing triple Massey product ``⟨a, b, b⟩ = ±[c]``.

    ``d t = w``, ``a·b = w``, ``t·b = c``; cohomology is spanned by ``a, b, c``.
    """
    return AInftyAlgebra.from_tables(
        [("a", 1), ("b", 1), ("t", 1), ("w", 2), ("c", 2)],
        {1: {("t",): {"w": 1}}, 2: {("a", "b"): {"w": 1}, ("t", "b"): {"c": 1}}}, F, name="Massey")


CORPUS: Dict[str, Callable[[], AInftyAlgebra]] = {
    "K": K,
    "line": line,
    "dual_numbers": dual_numbers,
    "exterior": exterior,
    "contractible": contractible,
    "quiver_a2": quiver_a2,
    "broken": broken,
    "massey": massey,
    "dual_numbers_frobenius": lambda: dual_numbers(paired=True),
    "exterior_frobenius": lambda: exterior(paired=True),
}


def _forms() -> Dict[str, dict]:
    """Inputs for the forms/darboux/repspace commands."""
    import random
    from .io import form_to_dict
    from .ncgeometry import NCSpace, Substitution
    sp = NCSpace((0, 0), ("x", "y"))
    omega0 = {((0, 1), (1, 1)): QQ(1)}
    rng = random.Random(7)
    S = Substitution(sp, {i: sp.random_series(rng, 2, 3, 2) for i in range(2)}, 6)
    bent = sp.cyclic(S.pullback(omega0))
    odd = NCSpace((0, 1), ("x", "xi"))
    return {
        "form_omega_constant": form_to_dict(sp, omega0),
        "form_omega_bent": form_to_dict(sp, bent),
        "form_xy": form_to_dict(sp, {((0, 0), (1, 0)): QQ(1)}),
        "form_commutator": form_to_dict(sp, {((0, 0), (1, 0)): QQ(1), ((1, 0), (0, 0)): QQ(-1)}),
        "form_one_form": form_to_dict(odd, {((0, 0), (1, 1)): QQ(1), ((1, 0), (0, 0), (0, 1)): QQ(2)}),
    }


def _others() -> Dict[str, dict]:
    from .ainfinity import opposite
    from .io import algebra_to_dict
    return {
        # f_1 = -id is an isomorphism onto the opposite of the (commutative) dual numbers
        "morphism_dual_numbers_opposite": {
            "source": "dual_numbers.json",
            "target": algebra_to_dict(opposite(dual_numbers())),
            "convention": "m",
            "components": {"1": [[["e"], {"e": "-1"}], [["eps"], {"eps": "-1"}]]},
        },
        "morphism_dual_numbers_bad": {
            "source": "dual_numbers.json",
            "target": "dual_numbers.json",
            "convention": "m",
            "components": {"1": [[["e"], {"e": "2"}], [["eps"], {"eps": "1"}]]},
        },
        # k as a left D-module: e acts by 1, eps by 0
        "module_dual_numbers_character": {
            "name": "k", "left": "dual_numbers.json", "right": None,
            "basis": [["k", 0]], "actions": [[["e"], "k", [], {"k": "1"}]],
        },
        "module_dual_numbers_bad": {
            "name": "bad", "left": "dual_numbers.json", "right": None,
            "basis": [["k", 0]], "actions": [[["e"], "k", [], {"k": "1"}], [["eps"], "k", [], {"k": "1"}]],
        },
        "coalgebra_quiver_a2_path": {
            "quiver": {"vertices": ["1", "2", "3"], "arrows": [["a", "1", "2", 0], ["b", "2", "3", 0]]},
            "element": [[["a", "b"], "1"], [["a"], "2"]],
        },
        "coalgebra_tensor_word": {
            "tensor": {"basis": [["x", 0], ["y", 1]], "L": 4},
            "element": [[["x", "y", "x"], "1"], [["y", "y"], "-1"]],
        },
    }


def write_corpus(directory: Path) -> None:
    from .io import dumps, save_algebra
    directory.mkdir(parents=True, exist_ok=True)
    for name, make in CORPUS.items():
        save_algebra(make(), directory / f"{name}.json")
    for name, d in {**_forms(), **_others()}.items():
        (directory / f"{name}.json").write_text(dumps(d), encoding="utf-8")


if __name__ == "__main__":
    write_corpus(Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures"))
