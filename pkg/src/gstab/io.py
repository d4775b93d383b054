"""Versioned JSON/CSV files."""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from pathlib import Path

from .f2core import F2Subspace, SymplecticPoint, rank
from .state import StateVector

FORMAT = "gowers-stab/v1"


@contextmanager
def open_out(path: str | None, newline: str | None = None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline=newline) as fh:
            yield fh


def dumps(obj: dict) -> str:
    return json.dumps({"format": FORMAT, **obj}, indent=2) + "\n"


def write_json(obj: dict, path: str | None) -> None:
    with open_out(path) as fh:
        fh.write(dumps(obj))


def read_json(path: str) -> dict:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    fmt = data.get("format", FORMAT)
    if fmt != FORMAT:
        raise ValueError(f"{path}: unsupported format {fmt!r}")
    return data


def save_state(psi: StateVector, path: str | None, kind: str | None = None, params: dict | None = None,
               **extra) -> None:
    obj = {}
    if kind is not None:
        obj["kind"] = kind
    if params is not None:
        obj["params"] = params
    obj.update(extra)
    obj.update(psi.to_dict())
    write_json(obj, path)


def load_state(path: str) -> StateVector:
    data = read_json(path)
    try:
        return StateVector.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed state file ({exc})") from None


def parse_point(token: str, n: int | None = None) -> SymplecticPoint:
    """A bitstring ``v_1..v_n w_1..w_n`` or a Pauli label such as ``XIZ``."""
    token = token.strip()
    if token and set(token) <= {"0", "1"}:
        pt = SymplecticPoint.from_bitstring(token)
    else:
        pt = SymplecticPoint.from_label(token)
    if n is not None and pt.n != n:
        raise ValueError(f"point {token!r} does not act on {n} qubits")
    return pt


def load_subgroup(path: str) -> F2Subspace:
    data = read_json(path)
    n = int(data["n"])
    pts = [parse_point(tok, n).index for tok in data.get("basis", [])]
    if rank(pts) != len(pts):
        raise ValueError(f"{path}: basis is not independent")
    return F2Subspace(2 * n, tuple(pts))
