"""JSON instance files and machine-readable reports.

Tensors are written as sparse coordinate lists with 1-based indices; vectors
as arrays.  :func:`canonical_dumps` gives a byte-stable rendering (sorted keys,
sorted coordinates, floats with 17 significant digits) so that identical
inputs always produce identical files and reports.
"""
from __future__ import annotations

import hashlib
import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Union

import numpy as np

from .setvalued import (
    All,
    ConeMatch,
    NonnegOrthant,
    OmegaMap,
    Piece,
    PointMatch,
    SvtcpInstance,
    TensorFamily,
    VectorFamily,
)
from .tcp import TcpInstance
from .tensor import DenseTensor

SCHEMA_VERSION = 1

Instance = Union[DenseTensor, TcpInstance, SvtcpInstance]


class InstanceError(ValueError):
    """Invalid instance file; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# -- canonical JSON -------------------------------------------------------------


def _scalar(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _is_flat(seq) -> bool:
    return all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in seq)


def canonical_dumps(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {canonical_dumps(obj[k], indent + 1)}' for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if _is_flat(obj):
            return "[" + ", ".join(_scalar(x) for x in obj) + "]"
        items = [pad + "  " + canonical_dumps(x, indent + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _scalar(obj)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# -- encoding -------------------------------------------------------------------------


def tensor_to_dict(B: DenseTensor) -> dict:
    nz = np.argwhere(B.data != 0)
    entries = [{"idx": [int(i) + 1 for i in idx], "val": float(B.data[tuple(idx)])} for idx in nz]
    entries.sort(key=lambda e: e["idx"])
    return {"order": B.order, "dim": B.dim, "entries": entries}


def _predicate_to_dict(pred) -> dict:
    if isinstance(pred, PointMatch):
        return {"type": "point", "point": list(pred.point), "tol": pred.tol}
    if isinstance(pred, ConeMatch):
        return {"type": "cone", "direction": list(pred.direction), "angular_tol": pred.angular_tol}
    if isinstance(pred, NonnegOrthant):
        return {"type": "orthant"}
    return {"type": "all"}


def omega_map_to_dict(omap: OmegaMap) -> dict:
    return {
        "omega_dim": omap.omega_dim,
        "pieces": [
            {"predicate": _predicate_to_dict(pc.predicate), "omegas": [list(w) for w in pc.omegas]}
            for pc in omap.pieces
        ],
        "default": [list(w) for w in omap.default],
        "limit_set": "auto" if omap.limit_set is None else [list(w) for w in omap.limit_set],
    }


def instance_to_dict(inst: Instance) -> dict:
    if isinstance(inst, DenseTensor):
        return {"schema_version": SCHEMA_VERSION, "kind": "tensor", "tensor": tensor_to_dict(inst)}
    if isinstance(inst, TcpInstance):
        return {"schema_version": SCHEMA_VERSION, "kind": "tcp", "tensor": tensor_to_dict(inst.B), "p": inst.p.tolist()}
    if isinstance(inst, SvtcpInstance):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "svtcp",
            "family": {
                "base": tensor_to_dict(inst.family.base),
                "coeffs": [tensor_to_dict(c) for c in inst.family.coeffs],
            },
            "rhs": {"base": inst.rhs.base.tolist(), "coeffs": inst.rhs.coeffs.tolist()},
            "omega": omega_map_to_dict(inst.omega),
        }
    raise TypeError(f"not an instance: {type(inst).__name__}")


def dumps_instance(inst: Instance) -> str:
    return canonical_dumps(instance_to_dict(inst)) + "\n"


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps_instance(inst))


# -- decoding -------------------------------------------------------------------------


def _req(d: dict, key: str, path: str):
    if not isinstance(d, dict):
        raise InstanceError(path, "expected an object")
    if key not in d:
        raise InstanceError(f"{path}.{key}", "missing field")
    return d[key]


def _number(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InstanceError(path, f"expected a number, got {x!r}")
    if not math.isfinite(x):
        raise InstanceError(path, "non-finite number")
    return float(x)


def _vector(x, path: str, dim: int | None = None) -> np.ndarray:
    if not isinstance(x, list):
        raise InstanceError(path, "expected an array")
    v = np.array([_number(c, f"{path}[{i}]") for i, c in enumerate(x)])
    if dim is not None and len(v) != dim:
        raise InstanceError(path, f"expected {dim} components, got {len(v)}")
    return v


def _int(x, path: str, lo: int) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < lo:
        raise InstanceError(path, f"expected an integer >= {lo}, got {x!r}")
    return x


def tensor_from_dict(d: dict, path: str = "tensor") -> DenseTensor:
    m = _int(_req(d, "order", path), f"{path}.order", 2)
    n = _int(_req(d, "dim", path), f"{path}.dim", 1)
    entries = _req(d, "entries", path)
    if not isinstance(entries, list):
        raise InstanceError(f"{path}.entries", "expected an array")
    try:
        data = np.zeros((n,) * m)
    except (ValueError, MemoryError) as exc:
        raise InstanceError(path, str(exc)) from None
    seen = set()
    for k, e in enumerate(entries):
        epath = f"{path}.entries[{k}]"
        idx = _req(e, "idx", epath)
        if not isinstance(idx, list) or len(idx) != m:
            raise InstanceError(f"{epath}.idx", f"expected {m} indices")
        for i in idx:
            if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= n:
                raise InstanceError(f"{epath}.idx", f"index {i!r} out of range 1..{n}")
        key = tuple(i - 1 for i in idx)
        if key in seen:
            raise InstanceError(f"{epath}.idx", f"duplicate coordinate {idx}")
        seen.add(key)
        data[key] = _number(_req(e, "val", epath), f"{epath}.val")
    try:
        return DenseTensor(data)
    except ValueError as exc:
        raise InstanceError(path, str(exc)) from None


def _omegas(x, path: str, k: int) -> list[tuple]:
    if not isinstance(x, list):
        raise InstanceError(path, "expected an array of parameter vectors")
    return [tuple(_vector(w, f"{path}[{i}]", k)) for i, w in enumerate(x)]


def _predicate(d: dict, path: str, n: int):
    kind = _req(d, "type", path)
    if kind == "point":
        return PointMatch(tuple(_vector(_req(d, "point", path), f"{path}.point", n)),
                          _number(d.get("tol", 1e-9), f"{path}.tol"))
    if kind == "cone":
        direction = _vector(_req(d, "direction", path), f"{path}.direction", n)
        if not direction.any():
            raise InstanceError(f"{path}.direction", "zero direction")
        return ConeMatch(tuple(direction), _number(_req(d, "angular_tol", path), f"{path}.angular_tol"))
    if kind == "orthant":
        return NonnegOrthant()
    if kind == "all":
        return All()
    raise InstanceError(f"{path}.type", f"unknown predicate {kind!r}")


def omega_map_from_dict(d: dict, n: int, path: str = "omega") -> OmegaMap:
    k = _int(_req(d, "omega_dim", path), f"{path}.omega_dim", 1)
    pieces_raw = d.get("pieces", [])
    if not isinstance(pieces_raw, list):
        raise InstanceError(f"{path}.pieces", "expected an array")
    pieces = []
    for i, pc in enumerate(pieces_raw):
        ppath = f"{path}.pieces[{i}]"
        pred = _predicate(_req(pc, "predicate", ppath), f"{ppath}.predicate", n)
        pieces.append(Piece(pred, tuple(_omegas(_req(pc, "omegas", ppath), f"{ppath}.omegas", k))))
    default = _omegas(d.get("default", []), f"{path}.default", k)
    limit = d.get("limit_set", "auto")
    limit_set = None if limit == "auto" else tuple(_omegas(limit, f"{path}.limit_set", k))
    return OmegaMap(k, tuple(pieces), tuple(default), limit_set)


def instance_from_dict(d: dict) -> Instance:
    version = _req(d, "schema_version", "$")
    if version != SCHEMA_VERSION:
        raise InstanceError("$.schema_version", f"unsupported schema version {version!r}")
    kind = _req(d, "kind", "$")
    if kind == "tensor":
        return tensor_from_dict(_req(d, "tensor", "$"), "$.tensor")
    if kind == "tcp":
        B = tensor_from_dict(_req(d, "tensor", "$"), "$.tensor")
        return TcpInstance(B, _vector(_req(d, "p", "$"), "$.p", B.dim))
    if kind == "svtcp":
        fam = _req(d, "family", "$")
        base = tensor_from_dict(_req(fam, "base", "$.family"), "$.family.base")
        omap = omega_map_from_dict(_req(d, "omega", "$"), base.dim, "$.omega")
        k = omap.omega_dim
        coeffs_raw = _req(fam, "coeffs", "$.family")
        if not isinstance(coeffs_raw, list) or len(coeffs_raw) != k:
            raise InstanceError("$.family.coeffs", f"expected {k} coefficient tensors")
        coeffs = tuple(tensor_from_dict(c, f"$.family.coeffs[{i}]") for i, c in enumerate(coeffs_raw))
        for i, c in enumerate(coeffs):
            if c.data.shape != base.data.shape:
                raise InstanceError(f"$.family.coeffs[{i}]", "order/dimension differ from the base tensor")
        rhs = _req(d, "rhs", "$")
        p0 = _vector(_req(rhs, "base", "$.rhs"), "$.rhs.base", base.dim)
        P_raw = _req(rhs, "coeffs", "$.rhs")
        if not isinstance(P_raw, list) or len(P_raw) != base.dim:
            raise InstanceError("$.rhs.coeffs", f"expected {base.dim} rows")
        P = np.array([_vector(row, f"$.rhs.coeffs[{i}]", k) for i, row in enumerate(P_raw)])
        return SvtcpInstance(TensorFamily(base, coeffs), VectorFamily(p0, P), omap)
    raise InstanceError("$.kind", f"unknown kind {kind!r}")


def loads_instance(text: str) -> Instance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("$", f"parse error: {exc}") from None
    return instance_from_dict(d)


FIXTURE_PREFIX = "fixture:"


def fixture_names() -> list[str]:
    root = resources.files("svtcp") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_instance_text(source: str) -> str:
    """Text of an instance file, or of a bundled fixture given as ``fixture:NAME``."""
    if source.startswith(FIXTURE_PREFIX):
        name = source[len(FIXTURE_PREFIX):]
        res = resources.files("svtcp") / "fixtures" / f"{name}.json"
        if not res.is_file():
            raise FileNotFoundError(f"no bundled fixture {name!r}; available: {', '.join(fixture_names())}")
        return res.read_text()
    return Path(source).read_text()


def load_instance(source) -> Instance:
    return loads_instance(read_instance_text(str(source)))


# -- reports ------------------------------------------------------------------------------


def to_jsonable(x):
    """Convert numpy values, tuples and enums into plain JSON-ready values."""
    if isinstance(x, np.ndarray):
        return [to_jsonable(y) for y in x.tolist()]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(y) for y in x]
    if isinstance(x, np.generic):
        return x.item()
    if hasattr(x, "value") and not isinstance(x, (int, float, str)):
        return x.value
    return x


def make_report(command: str, instance_text: str | None, result: dict, tolerances: dict, seed: int,
                wall_time: float | None = None) -> dict:
    report = {
        "command": command,
        "instance_digest": digest(instance_text) if instance_text is not None else None,
        "result": to_jsonable(result),
        "tolerances": to_jsonable(tolerances),
        "seed": seed,
    }
    if wall_time is not None:
        report["wall_time"] = wall_time
    return report


def dumps_report(report: dict) -> str:
    return canonical_dumps(report) + "\n"
