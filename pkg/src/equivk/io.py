"""JSON schemas and canonical serialization.

All on-disk values are JSON with two conventions: object keys are sorted
and integers that may not survive a 53-bit float round-trip are written as
decimal strings (loaders accept either form everywhere an integer is
expected).  store(load(f)) is byte-identical to the canonical formatting
of f.

Schema errors carry a JSON-pointer-style location so the CLI can report
exactly where a file went wrong.
"""

from __future__ import annotations

import json
import os
import re
from importlib import resources
from pathlib import Path
from typing import Any

from .catalog import FIXTURES
from .kinv import KInvariant, SixTermData
from .kunneth import KunnethResult
from .linalg import IntMatrix
from .rmod import FgRModule, GradedZpModule, NotDvrModule, PresentedAb, ZpModule
from .spaces import Atom, Cell, DisjointUnion, Product, SpaceExpr, SuspendR, SuspendV

SAFE_INT_BOUND = 2**53  # beyond this, JSON numbers lose exactness in doubles

_INT_STRING = re.compile(r"-?[0-9]+")


class SchemaError(ValueError):
    """A JSON value violating a schema, with its location."""

    def __init__(self, path: str, message: str):
        self.path = path or "/"
        self.message = message
        super().__init__(f"{self.path}: {message}")


# ---------------------------------------------------------------------------
# Canonical writing
# ---------------------------------------------------------------------------


def _stringify_big_ints(obj: Any) -> Any:
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= SAFE_INT_BOUND else obj
    if isinstance(obj, list):
        return [_stringify_big_ints(x) for x in obj]
    if isinstance(obj, tuple):
        return [_stringify_big_ints(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _stringify_big_ints(v) for k, v in obj.items()}
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"not JSON-serializable here: {type(obj).__name__}")


def canonical_dumps(obj: Any) -> str:
    return json.dumps(_stringify_big_ints(obj), sort_keys=True, indent=2) + "\n"


def store(path: str | Path, payload: Any) -> None:
    Path(path).write_text(canonical_dumps(payload), encoding="utf-8")


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError("/", f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"invalid JSON in {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Typed decoding with locations
# ---------------------------------------------------------------------------


def as_int(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise SchemaError(path, "expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and _INT_STRING.fullmatch(value):
        return int(value)
    raise SchemaError(path, f"expected an integer (or decimal string), got {value!r}")


def as_dict(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, f"expected an object, got {type(value).__name__}")
    return value


def as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected an array, got {type(value).__name__}")
    return value


def _get(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{path}/{key}", "missing required key")
    return obj[key]


def matrix_from_rows_json(value: Any, rows: int, cols: int, path: str) -> IntMatrix:
    """Decode a row-major matrix whose dimensions are fixed by context."""
    data = as_list(value, path)
    if len(data) != rows:
        raise SchemaError(path, f"expected {rows} rows, got {len(data)}")
    out = []
    for i, row in enumerate(data):
        row = as_list(row, f"{path}/{i}")
        if len(row) != cols:
            raise SchemaError(f"{path}/{i}", f"expected {cols} entries, got {len(row)}")
        out.append([as_int(x, f"{path}/{i}/{j}") for j, x in enumerate(row)])
    return IntMatrix.from_rows(out, cols=cols) if rows else IntMatrix.zeros(0, cols)


def matrix_to_rows_json(m: IntMatrix) -> list[list[int]]:
    return m.to_rows()


def columns_from_json(value: Any, gens: int, path: str) -> IntMatrix:
    """Decode a relation matrix given as a list of columns of length gens."""
    data = as_list(value, path)
    cols = []
    for j, col in enumerate(data):
        col = as_list(col, f"{path}/{j}")
        if len(col) != gens:
            raise SchemaError(f"{path}/{j}", f"expected column of length {gens}")
        cols.append([as_int(x, f"{path}/{j}/{i}") for i, x in enumerate(col)])
    return IntMatrix.from_cols(cols, rows=gens)


def columns_to_json(m: IntMatrix) -> list[list[int]]:
    return [list(m.col(j)) for j in range(m.cols)]


# --- FgRModule --------------------------------------------------------------


def fg_module_to_json(m: FgRModule) -> dict:
    return {
        "gens": m.gens,
        "rels": columns_to_json(m.rels),
        "t": matrix_to_rows_json(m.t_action),
    }


def fg_module_from_json(value: Any, path: str = "") -> FgRModule:
    obj = as_dict(value, path)
    gens = as_int(_get(obj, "gens", path), f"{path}/gens")
    if gens < 0:
        raise SchemaError(f"{path}/gens", "generator count must be nonnegative")
    rels = columns_from_json(_get(obj, "rels", path), gens, f"{path}/rels")
    t = matrix_from_rows_json(_get(obj, "t", path), gens, gens, f"{path}/t")
    return FgRModule(gens, rels, t)


# --- Presented abelian groups ------------------------------------------------


def presented_ab_to_json(g: PresentedAb) -> dict:
    return {"gens": g.gens, "rels": columns_to_json(g.rels)}


def presented_ab_from_json(value: Any, path: str = "") -> PresentedAb:
    obj = as_dict(value, path)
    gens = as_int(_get(obj, "gens", path), f"{path}/gens")
    if gens < 0:
        raise SchemaError(f"{path}/gens", "generator count must be nonnegative")
    rels = columns_from_json(_get(obj, "rels", path), gens, f"{path}/rels")
    return PresentedAb(gens, rels)


# --- KInvariant ---------------------------------------------------------------


def kinvariant_to_json(k: KInvariant) -> dict:
    return {
        "kG": {"0": fg_module_to_json(k.kg[0]), "1": fg_module_to_json(k.kg[1])},
        "kGminus": {
            "0": fg_module_to_json(k.kgminus[0]),
            "1": fg_module_to_json(k.kgminus[1]),
        },
        "phi": {
            "0": matrix_to_rows_json(k.phi[0]),
            "1": matrix_to_rows_json(k.phi[1]),
        },
        "psi": {
            "0": matrix_to_rows_json(k.psi[0]),
            "1": matrix_to_rows_json(k.psi[1]),
        },
    }


def kinvariant_from_json(value: Any, path: str = "") -> KInvariant:
    obj = as_dict(value, path)
    kg_obj = as_dict(_get(obj, "kG", path), f"{path}/kG")
    km_obj = as_dict(_get(obj, "kGminus", path), f"{path}/kGminus")
    kg = tuple(
        fg_module_from_json(_get(kg_obj, d, f"{path}/kG"), f"{path}/kG/{d}") for d in ("0", "1")
    )
    km = tuple(
        fg_module_from_json(_get(km_obj, d, f"{path}/kGminus"), f"{path}/kGminus/{d}")
        for d in ("0", "1")
    )
    phi_obj = as_dict(_get(obj, "phi", path), f"{path}/phi")
    psi_obj = as_dict(_get(obj, "psi", path), f"{path}/psi")
    phi = tuple(
        matrix_from_rows_json(
            _get(phi_obj, d, f"{path}/phi"), kg[int(d)].gens, km[int(d)].gens, f"{path}/phi/{d}"
        )
        for d in ("0", "1")
    )
    psi = tuple(
        matrix_from_rows_json(
            _get(psi_obj, d, f"{path}/psi"), km[int(d)].gens, kg[int(d)].gens, f"{path}/psi/{d}"
        )
        for d in ("0", "1")
    )
    try:
        return KInvariant(kg=kg, kgminus=km, phi=phi, psi=psi)  # type: ignore[arg-type]
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


# --- Six-term data -------------------------------------------------------------


def sixterm_to_json(d: SixTermData) -> dict:
    return {
        "kinvariant": kinvariant_to_json(d.kinv),
        "k": {
            "0": presented_ab_to_json(d.k[0]),
            "1": presented_ab_to_json(d.k[1]),
        },
        "forgetful": {
            "0": matrix_to_rows_json(d.forgetful[0]),
            "1": matrix_to_rows_json(d.forgetful[1]),
        },
        "boundary": {
            "0": matrix_to_rows_json(d.boundary[0]),
            "1": matrix_to_rows_json(d.boundary[1]),
        },
    }


def sixterm_from_json(value: Any, path: str = "") -> SixTermData:
    obj = as_dict(value, path)
    kinv = kinvariant_from_json(_get(obj, "kinvariant", path), f"{path}/kinvariant")
    k_obj = as_dict(_get(obj, "k", path), f"{path}/k")
    k = tuple(
        presented_ab_from_json(_get(k_obj, d, f"{path}/k"), f"{path}/k/{d}") for d in ("0", "1")
    )
    f_obj = as_dict(_get(obj, "forgetful", path), f"{path}/forgetful")
    b_obj = as_dict(_get(obj, "boundary", path), f"{path}/boundary")
    forgetful = tuple(
        matrix_from_rows_json(
            _get(f_obj, d, f"{path}/forgetful"),
            k[int(d)].gens,
            kinv.kg[int(d)].gens,
            f"{path}/forgetful/{d}",
        )
        for d in ("0", "1")
    )
    boundary = tuple(
        matrix_from_rows_json(
            _get(b_obj, d, f"{path}/boundary"),
            kinv.kgminus[1 - int(d)].gens,
            k[int(d)].gens,
            f"{path}/boundary/{d}",
        )
        for d in ("0", "1")
    )
    try:
        return SixTermData(kinv=kinv, k=k, forgetful=forgetful, boundary=boundary)  # type: ignore[arg-type]
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


# --- Localized modules ----------------------------------------------------------


def zp_module_to_json(m: ZpModule) -> dict:
    return {"p": m.p, "rank": m.rank, "torsion": list(m.torsion)}


def zp_module_from_json(value: Any, path: str = "") -> ZpModule:
    obj = as_dict(value, path)
    p = as_int(_get(obj, "p", path), f"{path}/p")
    rank = as_int(_get(obj, "rank", path), f"{path}/rank")
    torsion = [
        as_int(x, f"{path}/torsion/{i}")
        for i, x in enumerate(as_list(_get(obj, "torsion", path), f"{path}/torsion"))
    ]
    try:
        return ZpModule(p, rank, tuple(torsion))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def graded_to_json(g: GradedZpModule) -> dict:
    return {"even": zp_module_to_json(g.even), "odd": zp_module_to_json(g.odd)}


def graded_from_json(value: Any, path: str = "") -> GradedZpModule:
    obj = as_dict(value, path)
    even = zp_module_from_json(_get(obj, "even", path), f"{path}/even")
    odd = zp_module_from_json(_get(obj, "odd", path), f"{path}/odd")
    try:
        return GradedZpModule(even, odd)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def not_dvr_to_json(m: NotDvrModule) -> dict:
    return {
        "not_a_dvr_module": True,
        "p": m.p,
        "rank": m.rank,
        "torsion": list(m.torsion),
        "detail": m.detail,
    }


def kunneth_result_to_json(r: KunnethResult) -> dict:
    return {
        "prime": str(r.prime),
        "tensor": graded_to_json(r.tensor),
        "tor": graded_to_json(r.tor),
        "middle": graded_to_json(r.middle),
        "ambiguous": r.ambiguous,
        "checks": [
            {"id": c.id, "status": "pass" if c.passed else "fail", "detail": c.detail}
            for c in r.checks
        ],
    }


# --- Space expressions ------------------------------------------------------------


def space_to_json(e: SpaceExpr) -> dict:
    if isinstance(e, Atom):
        return {"atom": e.name}
    if isinstance(e, Cell):
        return {"freeCell": e.dim} if e.free else {"cell": e.dim}
    if isinstance(e, Product):
        return {"product": [space_to_json(e.left), space_to_json(e.right)]}
    if isinstance(e, DisjointUnion):
        return {"union": [space_to_json(p) for p in e.parts]}
    if isinstance(e, SuspendR):
        return {"suspendR": space_to_json(e.inner)}
    if isinstance(e, SuspendV):
        return {"suspendV": space_to_json(e.inner)}
    raise TypeError(f"not a space expression: {e!r}")


def space_from_json(value: Any, path: str = "") -> SpaceExpr:
    obj = as_dict(value, path)
    if len(obj) != 1:
        raise SchemaError(path, f"expected exactly one node key, got {sorted(obj)}")
    (key, payload), = obj.items()
    if key == "atom":
        if not isinstance(payload, str):
            raise SchemaError(f"{path}/atom", "atom name must be a string")
        try:
            return Atom(payload)
        except ValueError as exc:
            raise SchemaError(f"{path}/atom", str(exc)) from exc
    if key in ("cell", "freeCell"):
        dim = as_int(payload, f"{path}/{key}")
        try:
            return Cell(dim, free=(key == "freeCell"))
        except ValueError as exc:
            raise SchemaError(f"{path}/{key}", str(exc)) from exc
    if key == "product":
        items = as_list(payload, f"{path}/product")
        if len(items) != 2:
            raise SchemaError(f"{path}/product", "product takes exactly two factors")
        return Product(
            space_from_json(items[0], f"{path}/product/0"),
            space_from_json(items[1], f"{path}/product/1"),
        )
    if key == "union":
        items = as_list(payload, f"{path}/union")
        return DisjointUnion(
            tuple(space_from_json(x, f"{path}/union/{i}") for i, x in enumerate(items))
        )
    if key == "suspendR":
        return SuspendR(space_from_json(payload, f"{path}/suspendR"))
    if key == "suspendV":
        return SuspendV(space_from_json(payload, f"{path}/suspendV"))
    raise SchemaError(path, f"unknown node kind {key!r}")


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

SUITE_DIR_ENV = "KTHEORY_SUITE_DIR"


def fixture_text(name: str) -> str:
    """Read a named fixture, honoring the KTHEORY_SUITE_DIR override."""
    override = os.environ.get(SUITE_DIR_ENV)
    if override:
        path = Path(override) / f"{name}.json"
        if not path.is_file():
            raise SchemaError("/", f"fixture {name!r} not found under {override}")
        return path.read_text(encoding="utf-8")
    ref = resources.files("equivk").joinpath(f"fixtures/{name}.json")
    if not ref.is_file():
        raise SchemaError("/", f"no bundled fixture named {name!r}")
    return ref.read_text(encoding="utf-8")


def load_fixture(name: str) -> Any:
    try:
        return json.loads(fixture_text(name))
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"invalid JSON in fixture {name!r}: {exc}") from exc


def fixture_kinvariant(name: str) -> KInvariant:
    return kinvariant_from_json(load_fixture(f"kinvariant_{name}"), "")


def fixture_sixterm(name: str) -> SixTermData:
    return sixterm_from_json(load_fixture(f"sixterm_{name}"), "")


def catalog_fixture_names() -> list[str]:
    return sorted(FIXTURES)
