"""Regenerate the bundled instance corpus from the Python constructors.

Run from the repository root: python3 scripts/gen_instances.py
"""

import copy
import json
from pathlib import Path

from skewmon.bialgebroid import b1, b2, b3, b4
from skewmon.instance import dump
from skewmon.ringmod import free_bimodule

OUT = Path(__file__).resolve().parent.parent / "src" / "skewmon" / "instances"

# (file, base, field path, index, expected failing check ids)
CORRUPTIONS = [
    ("corrupt_algebra.json", "b2_kc2_f3.json", "algebra.mult", (0, 0, 0), ["ALG.R", "BGD.ring"]),
    ("corrupt_ring.json", "b2_kc2_f3.json", "bialgebroid.mult", (0, 1, 1), ["BGD.ring"]),
    ("corrupt_source.json", "b4_renv.json", "bialgebroid.s", (1, 0), ["BGD.source"]),
    ("corrupt_target.json", "b4_renv.json", "bialgebroid.t", (1, 0), ["BGD.target"]),
    ("corrupt_coassoc.json", "b2_kc2_f3.json", "bialgebroid.Delta", (0, 1), ["BGD.coassoc"]),
    ("corrupt_counit.json", "b2_kc2_f3.json", "bialgebroid.counit", (0, 1), ["BGD.counit"]),
    ("corrupt_multiplicative.json", "b3_monoid.json", "bialgebroid.Delta", (0, 0), ["BGD.multiplicative"]),
]


def _probe(m):
    return {
        "name": m.name,
        "dim": m.dim,
        "left": [x.tolist() for x in m.left],
        "right": [x.tolist() for x in m.right],
    }


def _write(name: str, data: dict) -> None:
    (OUT / name).write_text(json.dumps(data, indent=1) + "\n")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    base = {
        "b1.json": dump(b1(), "B1", "trivial bialgebra k over F_3"),
        "b2_kc2_f3.json": dump(b2(), "B2", "group bialgebra of C2 over F_3"),
        "b3_monoid.json": dump(b3(), "B3", "monoid bialgebra of {1, x}, x^2 = x, over F_3; not Hopf"),
        "b4_renv.json": dump(
            b4(), "B4", "enveloping bialgebroid of R = F_2 x F_2",
            {"probes": [_probe(free_bimodule(b4().R))]},
        ),
    }
    for name, data in base.items():
        _write(name, data)
    for name, src, path, index, expect in CORRUPTIONS:
        data = copy.deepcopy(base[src])
        data["name"] = data["name"] + "/" + name.removesuffix(".json")
        target = data
        for key in path.split("."):
            target = target[key]
        for i in index[:-1]:
            target = target[i]
        target[index[-1]] += 1
        entry = path + "".join(f"[{i}]" for i in index)
        data["description"] = f"{src} with {entry} increased by one"
        data["corruption"] = {"family": name.removeprefix("corrupt_").removesuffix(".json"), "entry": entry, "expect": expect}
        _write(name, data)


if __name__ == "__main__":
    main()
