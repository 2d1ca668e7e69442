"""File formats: potential/matrix JSON in, CSV/JSON reports and run manifests out.

Complex numbers travel as two-element ``[re, im]`` arrays.  Floats written to
CSV use 17 significant digits so that identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io as _io
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import InvalidInputError, ParseError
from .spectral_singularity import ResonancePoint, SpectralSingularity
from .transfer_matrix import Delta, Potential, Segment

RESONANCE_COLUMNS = (
    "k", "re_T", "im_T", "re_Rl", "im_Rl", "abs2_T", "abs2_Rl", "deficit", "epsilon",
)
SINGULARITY_COLUMNS = ("k_star", "e_star", "residual")


def fmt(x: float | None) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x + 0.0, ".17g")  # + 0.0 folds -0 into 0


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(where, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ParseError(where, "must be finite")
    return float(value)


def _complex(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(_number(value, where))
    if not isinstance(value, list) or len(value) != 2:
        raise ParseError(where, f"expected [re, im], got {value!r}")
    return complex(_number(value[0], f"{where}[0]"), _number(value[1], f"{where}[1]"))


def _load_json(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), f"cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def potential_from_dict(data) -> Potential:
    if not isinstance(data, dict):
        raise ParseError("<root>", "expected an object with 'deltas' and/or 'segments'")
    unknown = set(data) - {"deltas", "segments"}
    if unknown:
        raise ParseError(sorted(unknown)[0], "unknown field")
    deltas, segments = [], []
    raw_deltas = data.get("deltas", [])
    if not isinstance(raw_deltas, list):
        raise ParseError("deltas", "expected a list")
    for i, d in enumerate(raw_deltas):
        where = f"deltas[{i}]"
        if not isinstance(d, dict):
            raise ParseError(where, "expected an object with 'x' and 'z'")
        for key in ("x", "z"):
            if key not in d:
                raise ParseError(f"{where}.{key}", "missing")
        deltas.append(Delta(_number(d["x"], f"{where}.x"), _complex(d["z"], f"{where}.z")))
    raw_segments = data.get("segments", [])
    if not isinstance(raw_segments, list):
        raise ParseError("segments", "expected a list")
    for i, s in enumerate(raw_segments):
        where = f"segments[{i}]"
        if not isinstance(s, dict):
            raise ParseError(where, "expected an object with 'a', 'b' and 'v'")
        for key in ("a", "b", "v"):
            if key not in s:
                raise ParseError(f"{where}.{key}", "missing")
        segments.append(
            Segment(
                _number(s["a"], f"{where}.a"),
                _number(s["b"], f"{where}.b"),
                _complex(s["v"], f"{where}.v"),
            )
        )
    try:
        return Potential(tuple(deltas), tuple(segments))
    except InvalidInputError as exc:
        raise ParseError("segments" if segments else "deltas", str(exc)) from exc


def load_potential(path) -> Potential:
    return potential_from_dict(_load_json(path))


def dump_potential(potential: Potential, path) -> None:
    Path(path).write_text(json.dumps(potential.to_dict(), indent=2) + "\n", encoding="utf-8")


def matrix_from_dict(data) -> np.ndarray:
    if not isinstance(data, dict):
        raise ParseError("<root>", "expected an object with 'n' and 'rows'")
    if "rows" not in data:
        raise ParseError("rows", "missing")
    rows = data["rows"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("rows", "expected a non-empty list of rows")
    n = data.get("n", len(rows))
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError("n", f"expected a positive integer, got {n!r}")
    if len(rows) != n:
        raise ParseError("rows", f"expected {n} rows, got {len(rows)}")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"rows[{i}]", f"expected {n} entries")
        for j, entry in enumerate(row):
            out[i, j] = _complex(entry, f"rows[{i}][{j}]")
    return out


def matrix_to_dict(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "n": int(m.shape[0]),
        "rows": [[[float(x.real), float(x.imag)] for x in row] for row in m],
    }


def load_matrix(path) -> np.ndarray:
    return matrix_from_dict(_load_json(path))


def resonance_rows(points: Iterable[ResonancePoint]) -> list[list[str]]:
    rows = []
    for p in points:
        if p.t is None:
            re_t = im_t = re_r = im_r = ""
        else:
            re_t, im_t = fmt(p.t.real), fmt(p.t.imag)
            re_r, im_r = fmt(p.r_left.real), fmt(p.r_left.imag)
        rows.append(
            [fmt(p.k), re_t, im_t, re_r, im_r, fmt(p.t_abs2), fmt(p.r_abs2),
             fmt(p.deficit), fmt(p.epsilon)]
        )
    return rows


def singularity_rows(found: Iterable[SpectralSingularity]) -> list[list[str]]:
    return [[fmt(s.k_star), fmt(s.e_star), fmt(s.residual)] for s in found]


def write_csv(path, header, rows) -> None:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_csv(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the manifest for reproducible builds
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        moment = _dt.datetime.now(tz=_dt.timezone.utc)
    return moment.replace(microsecond=0).isoformat()


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: str
    inputs: list[str]
    parameters: dict
    output: str
    version: str
    timestamp: str = field(default_factory=_timestamp)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": [{"path": p, "sha256": _sha256(p)} for p in self.inputs],
            "parameters": self.parameters,
            "output": self.output,
            "version": self.version,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def path_for(output) -> Path:
        output = Path(output)
        return output.with_name(output.name + ".manifest.json")

    def write(self) -> Path:
        target = self.path_for(self.output)
        write_json(target, self.to_dict())
        return target
