"""Instance files: JSON descriptions of a base algebra, a bialgebroid and probes.

Matrices are row-major integer lists reduced into the field at load time, so
one file can be read over several primes.  ``load`` reports JSON syntax
errors with line and column and semantic errors with a dotted field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .bialgebroid import RightBialgebroid
from .exactlin import QQ, Mat, is_prime
from .report import Check, Report
from .ringmod import Algebra, Bimodule, algebra_from_constants, check_algebra, check_bimodule

SCHEMA_VERSION = 1


class InstanceError(ValueError):
    """An input problem: unreadable file, bad JSON or inconsistent data."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass
class ProbeSpec:
    name: str
    dim: int
    left: list[Mat]
    right: list[Mat]

    def bimodule(self, unit: Bimodule) -> Bimodule:
        """The probe as an object of the category whose unit is ``unit``."""
        return Bimodule(self.name, self.dim, unit.left_alg, unit.right_alg, self.left, self.right)


@dataclass
class InstanceFile:
    name: str
    description: str
    p: int
    R: Algebra
    bialgebroid: RightBialgebroid | None
    probes: list[ProbeSpec] = field(default_factory=list)
    corruption: dict | None = None
    source: str = ""
    algebra_report: Report = field(default_factory=Report)

    @property
    def field_label(self) -> Any:
        return "rational" if self.p == QQ else self.p


def schema() -> dict:
    text = resources.files("skewmon").joinpath("schemas/instance.schema.json").read_text()
    return json.loads(text)


def _path(parts) -> str:
    out = ""
    for part in parts:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out


def _matrix(rows, p: int, shape: tuple[int, int], path: str) -> Mat:
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        got = f"{len(rows)}x{len(rows[0]) if rows else 0}"
        raise InstanceError(f"expected a {shape[0]}x{shape[1]} matrix, got {got}", path)
    return Mat.from_rows(rows, p, ncols=shape[1])


def _algebra(block: dict, p: int, path: str, default_name: str) -> Algebra:
    d = block["dim"]
    mult, unit = block["mult"], block["unit"]
    if len(mult) != d or any(len(row) != d or any(len(c) != d for c in row) for row in mult):
        raise InstanceError(f"structure constants must be a {d}x{d}x{d} array", f"{path}.mult")
    if len(unit) != d:
        raise InstanceError(f"unit must have {d} entries", f"{path}.unit")
    return algebra_from_constants(block.get("name", default_name), mult, unit, p)


def parse(data: Any, source: str = "") -> InstanceFile:
    """Validate decoded JSON and build the instance."""
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        raise InstanceError(err.message, _path(err.absolute_path) or "(root)")
    fld = data["field"]
    if fld == "rational":
        p = QQ
    else:
        if not is_prime(fld):
            raise InstanceError(f"{fld} is not prime", "field")
        p = fld
    R = _algebra(data["algebra"], p, "algebra", "R")
    rep = Report()
    bad = check_algebra(R)
    rep.add(Check("ALG.R", R.name, "fail" if bad else "pass", "; ".join(bad)))

    bgd = None
    if "bialgebroid" in data:
        blk = data["bialgebroid"]
        dh, dr = blk["H_dim"], R.dim
        H = _algebra({"dim": dh, "mult": blk["mult"], "unit": blk["unit"], "name": blk.get("H_name", "H")},
                     p, "bialgebroid", "H")
        s = _matrix(blk["s"], p, (dh, dr), "bialgebroid.s")
        t = _matrix(blk["t"], p, (dh, dr), "bialgebroid.t")
        delta = _matrix(blk["Delta"], p, (dh * dh, dh), "bialgebroid.Delta")
        counit = _matrix(blk["counit"], p, (dr, dh), "bialgebroid.counit")
        bgd = RightBialgebroid(data["name"], R, H, s, t, delta, counit)

    probes = []
    for i, pb in enumerate(data.get("probes", [])):
        path = f"probes[{i}]"
        d = pb["dim"]
        if len(pb["right"]) != R.dim:
            raise InstanceError(f"need one right action matrix per basis element ({R.dim})", f"{path}.right")
        right = [_matrix(m, p, (d, d), f"{path}.right[{j}]") for j, m in enumerate(pb["right"])]
        if len(pb["left"]) != R.dim:
            raise InstanceError(f"need one left action matrix per basis element ({R.dim})", f"{path}.left")
        left = [_matrix(m, p, (d, d), f"{path}.left[{j}]") for j, m in enumerate(pb["left"])]
        problems = check_bimodule(Bimodule(pb["name"], d, R, R, left, right))
        if problems:
            raise InstanceError(problems[0], path)
        probes.append(ProbeSpec(pb["name"], d, left, right))
    return InstanceFile(
        data["name"], data.get("description", ""), p, R, bgd, probes,
        data.get("corruption"), source, rep,
    )


def load(path: str | Path) -> InstanceFile:
    """Read and validate an instance file; bare names resolve to bundled instances."""
    path = Path(path)
    if not path.exists():
        bundled = resources.files("skewmon").joinpath(f"instances/{path.name}")
        if path.parent == Path(".") and bundled.is_file():
            text, source = bundled.read_text(), path.name
        else:
            raise InstanceError(f"no such file: {path}")
    else:
        text, source = path.read_text(), path.name
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse(data, source)


def bundled_names() -> list[str]:
    root = resources.files("skewmon").joinpath("instances")
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def dump(b: RightBialgebroid, name: str, description: str = "", extra: dict | None = None) -> dict:
    """The JSON form of a bialgebroid (used to generate the bundled corpus)."""

    def consts(a: Algebra):
        d = a.dim
        return [[[int(a.table.entry(r, i * d + j)) for r in range(d)] for j in range(d)] for i in range(d)]

    out = {
        "schema_version": SCHEMA_VERSION,
        "name": name,
        "description": description,
        "field": "rational" if b.p == QQ else b.p,
        "algebra": {"name": b.R.name, "dim": b.R.dim, "mult": consts(b.R), "unit": [row[0] for row in b.R.unit.tolist()]},
        "bialgebroid": {
            "H_name": b.H.name,
            "H_dim": b.H.dim,
            "mult": consts(b.H),
            "unit": [row[0] for row in b.H.unit.tolist()],
            "s": b.s.tolist(),
            "t": b.t.tolist(),
            "Delta": b.delta.tolist(),
            "counit": b.counit.tolist(),
        },
    }
    out.update(extra or {})
    return out
