"""JSON definition files for algebras, setups, and Lie-Rinehart bundles.

Rationals appear everywhere as strings ("2", "-3/7").  Omitted brackets and
products are zero.  A file may carry "certified": true, in which case the
structural invariants (Jacobi, action laws, the crossed-homomorphism
identity) are verified at load time and a failure raises InvariantError;
without the flag only shapes and name references are validated, leaving the
mathematical checks to the subcommands.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InvariantError, ParseError, ShapeError
from .liealg import (
    CrossedHom,
    FinLieAlgebra,
    LieAction,
    Setup,
    check_action,
    check_crossed_hom,
    check_lie_algebra,
)
from .linalg import Matrix, Vector, is_zero_vector
from .rinehart import AModuleStructure, LeibnizPair, LieRinehart
from .witt import FinCommAlgebra, LaurentPoly


def _parse_rational(text, where: str) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"{where}: expected a rational string, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: cannot parse rational {text!r}: {exc}") from None


def _name_index(names: list[str], name: str, where: str) -> int:
    try:
        return names.index(name)
    except ValueError:
        raise ParseError(f"{where}: unknown basis name {name!r}") from None


def _value_vector(value: dict, names: list[str], where: str) -> Vector:
    if not isinstance(value, dict):
        raise ParseError(f"{where}: 'value' must be an object mapping names to rationals")
    out = [Fraction(0)] * len(names)
    for name, coeff in value.items():
        out[_name_index(names, name, where)] = _parse_rational(coeff, where)
    return tuple(out)


def _matrix_from_rows(rows, expected: tuple[int, int], where: str) -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: expected a list of rows")
    got = (len(rows), len(rows[0]) if rows else 0)
    if any(len(r) != got[1] for r in rows):
        raise ShapeError(f"{where}: ragged matrix rows")
    if got != expected:
        raise ShapeError(f"{where}: matrix is {got[0]}x{got[1]}, expected {expected[0]}x{expected[1]}")
    return Matrix.from_rows(
        [[_parse_rational(e, where) for e in r] for r in rows]
    )


def _load_json(path: Path) -> dict:
    try:
        body = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(body, dict):
        raise ParseError(f"{path}: top level must be an object")
    return body


def algebra_from_dict(body: dict, where: str = "algebra") -> FinLieAlgebra:
    if body.get("kind") != "finite_lie":
        raise ParseError(f"{where}: expected kind 'finite_lie', got {body.get('kind')!r}")
    names = body.get("basis")
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ParseError(f"{where}: 'basis' must be a list of names")
    if len(set(names)) != len(names):
        raise ParseError(f"{where}: duplicate basis names")
    structure: dict[tuple[int, int], Vector] = {}
    for k, entry in enumerate(body.get("brackets", [])):
        wh = f"{where}.brackets[{k}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{wh}: expected an object")
        i = _name_index(names, entry.get("left", ""), wh)
        j = _name_index(names, entry.get("right", ""), wh)
        if i == j:
            raise ParseError(f"{wh}: bracket of a basis vector with itself must be omitted")
        vec = _value_vector(entry.get("value", {}), names, wh)
        if i > j:
            i, j = j, i
            vec = tuple(-c for c in vec)
        if (i, j) in structure:
            raise ParseError(f"{wh}: duplicate bracket for this pair")
        if not is_zero_vector(vec):
            structure[(i, j)] = vec
    alg = FinLieAlgebra(tuple(names), structure)
    if body.get("certified"):
        bad = check_lie_algebra(alg)
        if bad:
            raise InvariantError(f"{where}: certified algebra fails Jacobi: {bad[0]}")
    return alg


def algebra_to_dict(L: FinLieAlgebra) -> dict:
    brackets = []
    for (i, j), v in sorted(L.structure.items()):
        value = {
            L.basis_names[k]: str(c) for k, c in enumerate(v) if c
        }
        brackets.append(
            {"left": L.basis_names[i], "right": L.basis_names[j], "value": value}
        )
    return {"kind": "finite_lie", "basis": list(L.basis_names), "brackets": brackets}


def comm_algebra_from_dict(body: dict, where: str = "algebra") -> FinCommAlgebra:
    if body.get("kind") != "finite_comm":
        raise ParseError(f"{where}: expected kind 'finite_comm', got {body.get('kind')!r}")
    names = body.get("basis")
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ParseError(f"{where}: 'basis' must be a list of names")
    structure: dict[tuple[int, int], Vector] = {}
    for k, entry in enumerate(body.get("products", [])):
        wh = f"{where}.products[{k}]"
        i = _name_index(names, entry.get("left", ""), wh)
        j = _name_index(names, entry.get("right", ""), wh)
        if i > j:
            i, j = j, i
        vec = _value_vector(entry.get("value", {}), names, wh)
        if (i, j) in structure:
            raise ParseError(f"{wh}: duplicate product for this pair")
        if not is_zero_vector(vec):
            structure[(i, j)] = vec
    unit = None
    if "unit" in body:
        unit = _value_vector(body["unit"], names, f"{where}.unit")
    return FinCommAlgebra(tuple(names), structure, unit)


def comm_algebra_to_dict(A: FinCommAlgebra) -> dict:
    products = []
    for (i, j), v in sorted(A.structure.items()):
        value = {A.basis_names[k]: str(c) for k, c in enumerate(v) if c}
        products.append(
            {"left": A.basis_names[i], "right": A.basis_names[j], "value": value}
        )
    body = {"kind": "finite_comm", "basis": list(A.basis_names), "products": products}
    if A.unit is not None:
        body["unit"] = {A.basis_names[k]: str(c) for k, c in enumerate(A.unit) if c}
    return body


def _resolve(node, base: Path, loader, where: str):
    """A sub-object may be inlined or given as a relative path string."""
    if isinstance(node, str):
        return loader(_load_json(base / node), where)
    if isinstance(node, dict):
        return loader(node, where)
    raise ParseError(f"{where}: expected an inline object or a path string")


def setup_from_dict(body: dict, base: Path, where: str = "setup") -> Setup:
    if body.get("kind") != "setup":
        raise ParseError(f"{where}: expected kind 'setup', got {body.get('kind')!r}")
    g = _resolve(body.get("g"), base, algebra_from_dict, f"{where}.g")
    h = _resolve(body.get("h"), base, algebra_from_dict, f"{where}.h")
    action_tbl = body.get("action")
    if not isinstance(action_tbl, dict):
        raise ParseError(f"{where}: 'action' must map g-basis names to matrices")
    mats = []
    for i, name in enumerate(g.basis_names):
        if name not in action_tbl:
            raise ParseError(f"{where}.action: missing matrix for {name!r}")
        mats.append(
            _matrix_from_rows(action_tbl[name], (h.dim, h.dim), f"{where}.action[{name}]")
        )
    extra = set(action_tbl) - set(g.basis_names)
    if extra:
        raise ParseError(f"{where}.action: unknown basis name {sorted(extra)[0]!r}")
    rho = LieAction(g, h, tuple(mats))
    if "H" in body:
        H = CrossedHom(_matrix_from_rows(body["H"], (h.dim, g.dim), f"{where}.H"))
    else:
        H = CrossedHom(Matrix.zero(h.dim, g.dim))
    s = Setup(g, h, rho, H)
    if body.get("certified"):
        bad = check_lie_algebra(g) + check_lie_algebra(h) + check_action(rho)
        bad += check_crossed_hom(s)
        if bad:
            raise InvariantError(f"{where}: certified setup fails: {bad[0]}")
    return s


def setup_to_dict(s: Setup) -> dict:
    return {
        "kind": "setup",
        "g": algebra_to_dict(s.g),
        "h": algebra_to_dict(s.h),
        "action": {
            name: s.rho.matrices[i].render_rows()
            for i, name in enumerate(s.g.basis_names)
        },
        "H": s.H.matrix.render_rows(),
    }


def _matrix_table(body: dict, names: tuple[str, ...], shape: tuple[int, int], where: str):
    if not isinstance(body, dict):
        raise ParseError(f"{where}: expected an object mapping names to matrices")
    extra = set(body) - set(names)
    if extra:
        raise ParseError(f"{where}: unknown basis name {sorted(extra)[0]!r}")
    mats = []
    for name in names:
        if name not in body:
            raise ParseError(f"{where}: missing matrix for {name!r}")
        mats.append(_matrix_from_rows(body[name], shape, f"{where}[{name}]"))
    return tuple(mats)


def lie_rinehart_from_dict(body: dict, base: Path, where: str = "bundle") -> tuple[LieRinehart, dict]:
    """Returns the Lie-Rinehart algebra and any optional module block."""
    if body.get("kind") != "lie_rinehart":
        raise ParseError(f"{where}: expected kind 'lie_rinehart', got {body.get('kind')!r}")
    A = _resolve(body.get("A"), base, comm_algebra_from_dict, f"{where}.A")
    L = _resolve(body.get("L"), base, algebra_from_dict, f"{where}.L")
    a_action = _matrix_table(
        body.get("a_action", {}), A.basis_names, (L.dim, L.dim), f"{where}.a_action"
    )
    anchor = _matrix_table(
        body.get("anchor", {}), L.basis_names, (A.dim, A.dim), f"{where}.anchor"
    )
    lr = LieRinehart(A, L, a_action, anchor)
    module = body.get("module", {})
    if module and not isinstance(module, dict):
        raise ParseError(f"{where}.module: expected an object")
    return lr, module


def leibniz_pair_from_dict(body: dict, base: Path, where: str = "pair") -> LeibnizPair:
    if body.get("kind") != "leibniz_pair":
        raise ParseError(f"{where}: expected kind 'leibniz_pair', got {body.get('kind')!r}")
    A = _resolve(body.get("A"), base, comm_algebra_from_dict, f"{where}.A")
    S = _resolve(body.get("S"), base, algebra_from_dict, f"{where}.S")
    beta = _matrix_table(
        body.get("beta", {}), S.basis_names, (A.dim, A.dim), f"{where}.beta"
    )
    return LeibnizPair(A, S, beta)


def module_from_dict(
    A: FinCommAlgebra, lie_names: tuple[str, ...], body: dict, where: str
) -> tuple[AModuleStructure, tuple[Matrix, ...]]:
    """Optional module block: dimension, A-action, and representation matrices
    keyed by the Lie basis names."""
    dim = body.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{where}: 'dim' must be a positive integer")
    action = _matrix_table(
        body.get("action", {}), A.basis_names, (dim, dim), f"{where}.action"
    )
    mod = AModuleStructure(A, dim, action)
    rho = _matrix_table(body.get("rho", {}), lie_names, (dim, dim), f"{where}.rho")
    return mod, rho


def load_file(path_str: str):
    """Dispatch on the file's 'kind'; returns a typed object."""
    path = Path(path_str)
    if not path.exists():
        raise ParseError(f"{path}: no such file")
    body = _load_json(path)
    kind = body.get("kind")
    base = path.parent
    if kind == "finite_lie":
        return algebra_from_dict(body, str(path))
    if kind == "finite_comm":
        return comm_algebra_from_dict(body, str(path))
    if kind == "setup":
        return setup_from_dict(body, base, str(path))
    if kind == "lie_rinehart":
        return lie_rinehart_from_dict(body, base, str(path))
    if kind == "leibniz_pair":
        return leibniz_pair_from_dict(body, base, str(path))
    raise ParseError(f"{path}: unknown kind {kind!r}")


def twisting_polynomials_from_file(path_str: str, n: int) -> list[LaurentPoly]:
    """p-file: maps 1-based variable indices to {exponent: coefficient}."""
    path = Path(path_str)
    if not path.exists():
        raise ParseError(f"{path}: no such file")
    body = _load_json(path)
    polys = [LaurentPoly.zero(n) for _ in range(n)]
    for key, table in body.items():
        try:
            var = int(key)
        except ValueError:
            raise ParseError(f"{path}: variable index {key!r} is not an integer") from None
        if not 1 <= var <= n:
            raise ParseError(f"{path}: variable index {var} outside 1..{n}")
        if not isinstance(table, dict):
            raise ParseError(f"{path}: entry for variable {var} must be an object")
        poly = LaurentPoly.zero(n)
        for exp_str, coeff in table.items():
            try:
                e = int(exp_str)
            except ValueError:
                raise ParseError(f"{path}: exponent {exp_str!r} is not an integer") from None
            r = tuple(e if k == var - 1 else 0 for k in range(n))
            poly = poly + LaurentPoly.monomial(n, r, _parse_rational(coeff, str(path)))
        polys[var - 1] = poly
    return polys
