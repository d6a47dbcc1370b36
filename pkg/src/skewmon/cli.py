"""Command-line driver: one command per verification suite.

Exit codes: 0 when every selected check passes, 1 on a check failure, 2 on an
input error.  Reports are deterministic: records are sorted by check id and
subject, and nothing time- or host-dependent is written unless ``--timing``
is given.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .bialgebroid import check_bialgebroid, induced_skewmon, is_hopf, standard_probes
from .exactlin import QQ, ShapeError
from .instance import InstanceError, InstanceFile, load, parse
from .report import FAIL, NOT_VERIFIED, PASS, Check, Report
from .ringmod import free_bimodule
from .skewcat import ProbeSet, check_all, coherence_failure_witness

REPORT_VERSION = 1
COMMANDS = (
    "check-bialgebroid", "build-skewmon", "check-axioms", "galois",
    "representability", "laxcomonad", "modcomod", "report",
)
BUILTIN_PROBES = ("R", "R2", "H", "F")


class InputError(Exception):
    pass


def thread_cap() -> int:
    raw = os.environ.get("SKEWMON_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"SKEWMON_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"SKEWMON_THREADS must be a positive integer, got {raw!r}")
    return n


# ---------------------------------------------------------------------------
# context shared by the suites of one run


@dataclass
class Context:
    inst: InstanceFile
    probe_names: list[str] | None
    nmax: int
    _s: object = None
    _catalog: dict = field(default_factory=dict)
    _maps: list = field(default_factory=list)

    @property
    def b(self):
        if self.inst.bialgebroid is None:
            raise InputError("instance has no bialgebroid block")
        return self.inst.bialgebroid

    @property
    def s(self):
        if self._s is None:
            self._s = induced_skewmon(self.b, bimodule_unit=True)
            std = standard_probes(self.b, self._s)
            unit = self._s.unit
            self._catalog = {o.name: o for o in std.objects}
            self._catalog["F"] = free_bimodule(self.b.R).renamed("F")
            for pb in self.inst.probes:
                self._catalog[pb.name] = pb.bimodule(unit)
            self._catalog["R"] = unit
            self._maps = std.maps
        return self._s

    def probes(self, default: tuple[str, ...] = ("R", "R2", "H")) -> ProbeSet:
        self.s
        names = self.probe_names or list(default)
        unknown = [n for n in names if n not in self._catalog]
        if unknown:
            raise InputError(f"unknown probe {unknown[0]!r}; available: {', '.join(sorted(self._catalog))}")
        objs = [self._catalog[n] for n in names]
        ids = {id(o) for o in objs}
        maps = [f for f in self._maps if id(f.source) in ids and id(f.target) in ids]
        return ProbeSet(objs, maps)


@dataclass
class SuiteResult:
    report: Report
    results: dict = field(default_factory=dict)
    text: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# suites


def suite_check_bialgebroid(ctx: Context) -> SuiteResult:
    rep = Report(ctx.inst.algebra_report.checks)
    if ctx.inst.bialgebroid is not None:
        rep.extend(check_bialgebroid(ctx.inst.bialgebroid))
    return SuiteResult(rep)


def suite_build_skewmon(ctx: Context) -> SuiteResult:
    s, probes = ctx.s, ctx.probes()
    dims = {}
    objs = probes.objects
    for m in objs:
        s.eta(m), s.eps(m)
        for n in objs:
            dims[f"{m.name}*{n.name}"] = s.prod(m, n).dim
            for l in objs:
                s.gamma(m, n, l)
    rep = Report(s.welldefined.checks)
    return SuiteResult(rep, {"product_dims": dims}, [f"dim {k} = {v}" for k, v in dims.items()])


def suite_check_axioms(ctx: Context) -> SuiteResult:
    s, probes = ctx.s, ctx.probes()
    rep = check_all(s, probes)
    rep.extend(s.welldefined)
    out = {}
    try:
        w = coherence_failure_witness(s)
        out["coherence_witness"] = {"differs": w.ok, "delta_mu": w.witness["lhs"].tolist(),
                                    "gamma_RRR": w.witness["rhs"].tolist()}
    except ShapeError as exc:
        out["coherence_witness"] = {"error": str(exc)}
    line = "delta_R.mu_R " + ("differs from" if out["coherence_witness"].get("differs") else "equals") + " gamma_RRR"
    return SuiteResult(rep, out, [line])


def suite_galois(ctx: Context) -> SuiteResult:
    v = is_hopf(ctx.b, ctx.s)
    rows, cols = v.size
    text = [f"galois rank {v.rank}/{max(rows, cols)}, hopf={'true' if v.hopf else 'false'}"]
    return SuiteResult(v.report, v.as_dict(), text)


def suite_representability(ctx: Context) -> SuiteResult:
    from .represent import bialgebroid_representability

    probes = ctx.probes() if ctx.probe_names else None
    v = bialgebroid_representability(ctx.b, probes)
    cert = v.as_dict()
    text = [f"verdict: {v.status}"] + [f"stage {k}: {st}" for k, st in v.stages.items()]
    return SuiteResult(v.report, {"certificate": cert}, text)


def suite_laxcomonad(ctx: Context) -> SuiteResult:
    from .ebimod import free_qcomodule
    from .laxq import (LaxComonad, check_decompose, check_degenerate, check_lax_monoidal, check_laxcomodule,
                       check_simplicial, monoidal_Qn, phi_hat)

    s = ctx.s
    default = ("R", "F") if ctx.b.R.dim > 1 else ("R",)
    objs = ctx.probes(default).objects
    n = ctx.nmax
    lq = LaxComonad(s, n)
    rep = Report()
    rep.extend(check_decompose(n))
    rep.extend(check_degenerate(lq, objs))
    rep.extend(check_simplicial(lq, objs))
    rep.extend(check_lax_monoidal(lq, objs))
    for m in objs:
        lifted, sub = phi_hat(lq, free_qcomodule(s, m))
        rep.extend(sub)
        if sub.ok:
            rep.extend(check_laxcomodule(lq, lifted))
    rep.extend(lq.report)
    nq = min(n, 2)
    _, sub = monoidal_Qn(ctx.b, nq, objs, s)
    rep.extend(sub)
    dims = {f"Q_{k}({m.name})": lq.Q(m, k).dim for m in objs for k in range(n + 1)}
    return SuiteResult(rep, {"nmax": n, "dims": dims}, [f"dim {k} = {v}" for k, v in dims.items()])


def suite_modcomod(ctx: Context) -> SuiteResult:
    from . import ebimod as E
    from .skewcat import check_skewmon_functor, check_smc

    s, probes = ctx.s, ctx.probes()
    rep = Report()
    rep.extend(E.check_lambda_rho_table(s, probes))
    for m in probes.objects:
        tm, qc = E.free_tmodule(s, m), E.free_qcomodule(s, m)
        rep.extend(E.check_tmodule(s, tm, m.name))
        rep.extend(E.check_qcomodule(s, qc, m.name))
        rep.extend(E.check_comodule_split(s, qc, m.name))
        rep.extend(E.factorize_action(s, tm)[1])
        rep.extend(E.factorize_coaction(s, qc)[1])
    rep.extend(E.check_entwined(s, E.basic_entwined(s)))
    sq = E.quotient_structure(s)
    rep.extend(check_smc(sq, probes))
    rep.extend(check_skewmon_functor(E.quotient_functor(sq), probes))
    rep.extend(E.kappa(sq, probes)[1])
    rep.extend(E.tq_as_tensor(sq, ctx.b, probes))
    rep.extend(sq.factor)
    sz = E.center_structure(s)
    # R2 = R + R adds nothing to the pentagons by additivity, and they are slow here
    base = [o for o in probes.objects if o.name != "R2"] or probes.objects
    rep.extend(check_smc(sz, probes, list(itertools.product(base, repeat=4))))
    rep.extend(E.zeta(sz, probes)[1])
    rep.extend(sz.factor)
    dims = {"E": E.e_algebra(s).dim, "T_q(R)": sq.T(s.unit).dim, "Q_z(R)": sz.Q(s.unit).dim}
    return SuiteResult(rep, {"dims": dims}, [f"dim {k} = {v}" for k, v in dims.items()])


SUITES: dict[str, Callable[[Context], SuiteResult]] = {
    "check-bialgebroid": suite_check_bialgebroid,
    "build-skewmon": suite_build_skewmon,
    "check-axioms": suite_check_axioms,
    "galois": suite_galois,
    "representability": suite_representability,
    "laxcomonad": suite_laxcomonad,
    "modcomod": suite_modcomod,
}


# ---------------------------------------------------------------------------
# mutation gate


def _entries(data: dict) -> list[tuple[str, tuple[int, ...]]]:
    """Every integer entry of the structure data, as (field path, index)."""
    out = []

    def walk(x, path, idx):
        if isinstance(x, list):
            for i, y in enumerate(x):
                walk(y, path, idx + (i,))
        else:
            out.append((path, idx))

    walk(data["algebra"]["mult"], "algebra.mult", ())
    walk(data["algebra"]["unit"], "algebra.unit", ())
    if "bialgebroid" in data:
        for key in ("mult", "unit", "s", "t", "Delta", "counit"):
            walk(data["bialgebroid"][key], f"bialgebroid.{key}", ())
    return out


def corrupt(data: dict, path: str, idx: tuple[int, ...], delta: int) -> dict:
    out = json.loads(json.dumps(data))
    x = out
    for key in path.split("."):
        x = x[key]
    for i in idx[:-1]:
        x = x[i]
    x[idx[-1]] += delta
    return out


def _subject(path: str, idx: tuple[int, ...], delta: int) -> str:
    return path + "".join(f"[{i}]" for i in idx) + f"+={delta}"


def _one_mutation(data: dict, path: str, idx: tuple[int, ...], delta: int) -> Check:
    subject = _subject(path, idx, delta)
    try:
        inst = parse(corrupt(data, path, idx, delta))
        rep = suite_check_bialgebroid(Context(inst, None, 0)).report
    except (InstanceError, ShapeError) as exc:
        return Check("MUTATION.coverage", subject, PASS, f"rejected at load: {exc}")
    named = sorted(rep.failed_ids())
    if named:
        return Check("MUTATION.coverage", subject, PASS, "caught by " + ", ".join(named))
    return Check("MUTATION.coverage", subject, FAIL, "no named failure")


def is_equivalent(base: InstanceFile, data: dict, path: str, idx: tuple[int, ...], delta: int) -> bool:
    """Delta is stored as a lift to H (x)_k H; a change in the kernel of the
    projection to H (x)_R H describes the same bialgebroid."""
    if path != "bialgebroid.Delta" or base.bialgebroid is None:
        return False
    try:
        other = parse(corrupt(data, path, idx, delta)).bialgebroid
        return other.delta_q == base.bialgebroid.delta_q
    except (InstanceError, ShapeError):
        return False


def mutation_gate(data: dict, base: InstanceFile, k: int, seed: int, threads: int) -> tuple[Report, dict]:
    """k random single-entry corruptions that change the described structure."""
    rng = random.Random(seed)
    p = base.p
    jobs, skipped = [], []
    for path, idx in rng.sample(_entries(data), len(_entries(data))):
        if len(jobs) == k:
            break
        delta = 1 if p == QQ else rng.randrange(1, p)
        if is_equivalent(base, data, path, idx, delta):
            skipped.append(_subject(path, idx, delta))
            continue
        jobs.append((path, idx, delta))
    if len(jobs) < k:
        raise InputError(f"--seed-mutations {k}: only {len(jobs)} non-equivalent single-entry corruptions exist")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        checks = list(pool.map(lambda j: _one_mutation(data, *j), jobs))
    return Report(checks), {"requested": k, "run": len(jobs), "equivalent_skipped": skipped}


# ---------------------------------------------------------------------------
# output


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def render_text(doc: dict) -> str:
    lines = [
        f"skewmon {doc['command']}: {doc['instance']['name']} ({doc['instance']['source']}, field {doc['instance']['field']})",
    ]
    for suite in doc["suites"]:
        lines.append(f"[{suite['suite']}] {suite['summary']}")
        lines.extend("  " + t for t in suite["text"])
    for c in doc["checks"]:
        line = f"{c['status'].upper():13} {c['check']} {c['subject']}  ({c['anchor']})"
        if c.get("detail"):
            line += f": {c['detail']}"
        lines.append(line)
    lines.append(f"status: {doc['status']} ({doc['summary']['passed']}/{doc['summary']['checks']} checks pass)")
    return "\n".join(lines) + "\n"


def run(args: argparse.Namespace) -> tuple[dict, int]:
    threads = thread_cap()
    inst = load(args.instance)
    if args.nmax < 0:
        raise InputError("--nmax must be non-negative")
    if args.seed_mutations < 0:
        raise InputError("--seed-mutations must be non-negative")
    names = [x for x in args.probes.split(",") if x] if args.probes else None
    ctx = Context(inst, names, args.nmax)
    order = list(SUITES) if args.command == "report" else [args.command]
    total = Report()
    suites = []
    reports: dict[str, Report] = {}
    for name in order:
        if name != "check-bialgebroid" and inst.bialgebroid is None:
            raise InputError(f"{name} needs a bialgebroid block")
        t0 = time.perf_counter()
        try:
            res = SUITES[name](ctx)
        except (ShapeError, ArithmeticError, ValueError, KeyError) as exc:
            if isinstance(exc, (InstanceError, InputError)):
                raise
            detail = f"{type(exc).__name__}: {exc}"
            res = SuiteResult(Report([Check("SUITE.error", name, NOT_VERIFIED, detail)]))
        rec = {"suite": name, "summary": res.report.summary(), "results": res.results, "text": res.text}
        if args.timing:
            rec["seconds"] = round(time.perf_counter() - t0, 3)
        suites.append(rec)
        reports[name] = res.report
        total.extend(res.report)
    if args.command == "report":
        total.extend(discrepancy(reports))
    if args.seed_mutations:
        raw = _raw_data(args.instance)
        gate, info = mutation_gate(raw, inst, args.seed_mutations, args.seed, threads)
        text = [f"{info['run']} corruptions run, {len(info['equivalent_skipped'])} equivalent ones skipped"]
        suites.append({"suite": "mutations", "summary": gate.summary(), "results": info, "text": text})
        total.extend(gate)
    checks = [c.as_dict() for c in total.sorted()]
    failed = sum(1 for c in checks if c["status"] != PASS)
    doc = {
        "report_version": REPORT_VERSION,
        "command": args.command,
        "instance": {"name": inst.name, "source": inst.source, "field": inst.field_label},
        "flags": {"probes": names, "nmax": args.nmax, "seed_mutations": args.seed_mutations, "seed": args.seed},
        "status": PASS if failed == 0 else FAIL,
        "summary": {"checks": len(checks), "passed": len(checks) - failed, "failed": failed},
        "suites": suites,
        "checks": checks,
    }
    return doc, 0 if failed == 0 else 1


def _raw_data(path: str) -> dict:
    from importlib import resources
    from pathlib import Path

    p = Path(path)
    if p.exists():
        return json.loads(p.read_text())
    return json.loads(resources.files("skewmon").joinpath(f"instances/{p.name}").read_text())


def discrepancy(reports: dict[str, Report]) -> Report:
    """Flag a bialgebroid that fails its axiom list while its induced structure passes."""
    smc = [c for c in reports["check-axioms"] if c.check_id[:3] == "SMC" and c.check_id[3:] in "12345"]
    if reports["check-bialgebroid"].ok or not smc or not all(c.ok for c in smc):
        return Report()
    return Report([Check("BGD.discrepancy", "report", NOT_VERIFIED,
                         "bialgebroid axioms fail but the induced structure passes SMC1-SMC5")])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewmon", description="Exact verification of right-monoidal structures.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("instance", help="instance JSON file, or the name of a bundled instance")
    ap.add_argument("--probes", help=f"comma-separated probe names (built in: {', '.join(BUILTIN_PROBES)})")
    ap.add_argument("--nmax", type=int, default=3, help="largest n for the lax comonad (default 3)")
    ap.add_argument("--format", choices=("json", "text"), default="text")
    ap.add_argument("--seed-mutations", type=int, default=0, metavar="K",
                    help="run K single-entry corruptions; each must produce a named failure")
    ap.add_argument("--seed", type=int, default=0, help="seed for choosing mutations")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--timing", action="store_true", help="include per-suite seconds (breaks byte-identity)")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = run(args)
    except (InstanceError, InputError) as exc:
        doc = {"report_version": REPORT_VERSION, "command": args.command, "status": "input-error", "error": str(exc)}
        sys.stderr.write(f"skewmon: input error: {exc}\n")
        code = 2
        if args.format == "json":
            _emit(render_json(doc), args.out)
        return code
    _emit(render_json(doc) if args.format == "json" else render_text(doc), args.out)
    return code


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    sys.exit(main())
