import copy
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from skewmon import cli
from skewmon.exactlin import QQ
from skewmon.instance import InstanceError, bundled_names, dump, load, parse


def raw(name):
    return json.loads(resources.files("skewmon").joinpath(f"instances/{name}").read_text())


def report_schema():
    return json.loads(resources.files("skewmon").joinpath("schemas/report.schema.json").read_text())


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# instance files


def test_bundled_corpus():
    names = bundled_names()
    assert {"b1.json", "b2_kc2_f3.json", "b3_monoid.json", "b4_renv.json"} <= set(names)
    assert sum(n.startswith("corrupt_") for n in names) == 7
    for n in names:
        inst = load(n)
        assert inst.bialgebroid is not None


def test_dump_roundtrip(bgds):
    for b in bgds.values():
        again = parse(dump(b, b.name)).bialgebroid
        assert again.delta == b.delta and again.s == b.s and again.H.table == b.H.table


def test_entries_reduced_mod_p():
    data = raw("b2_kc2_f3.json")
    data["bialgebroid"]["counit"] = [[4, -2]]
    assert load_data(data).bialgebroid.counit.tolist() == [[1, 1]]


def load_data(data):
    return parse(data, "test")


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d["bialgebroid"].__setitem__("Delta", [[1, 0], [0, 1]]), "bialgebroid.Delta: expected a 4x2 matrix, got 2x2"),
    (lambda d: d.__setitem__("field", 4), "field: 4 is not prime"),
    (lambda d: d["bialgebroid"].__setitem__("s", "x"), "bialgebroid.s: 'x' is not of type 'array'"),
    (lambda d: d.__setitem__("schema_version", 2), "schema_version"),
    (lambda d: d.__setitem__("extra", 1), "Additional properties"),
])
def test_semantic_errors_name_the_field(mutate, message):
    data = raw("b2_kc2_f3.json")
    mutate(data)
    with pytest.raises(InstanceError) as exc:
        parse(data)
    assert message in str(exc.value)


def test_json_syntax_error_has_position(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{\n  "name": 1,\n}\n')
    with pytest.raises(InstanceError, match=r"parse error at line 3, column 1"):
        load(f)
    with pytest.raises(InstanceError, match="no such file"):
        load(tmp_path / "missing.json")


def test_probe_must_be_a_bimodule():
    data = raw("b4_renv.json")
    probe = copy.deepcopy(data["probes"][0])
    probe["right"][0], probe["right"][1] = probe["right"][1], probe["left"][0]
    data["probes"] = [probe]
    with pytest.raises(InstanceError, match=r"probes\[0\]"):
        parse(data)


def test_bad_algebra_is_recorded_not_rejected():
    inst = load("corrupt_algebra.json")
    assert not inst.algebra_report.ok
    assert inst.algebra_report.failed_ids() == {"ALG.R"}


def test_rational_field():
    data = raw("b2_kc2_f3.json")
    data["field"] = "rational"
    inst = parse(data)
    assert inst.p == QQ and inst.field_label == "rational"


# ---------------------------------------------------------------------------
# command line


def test_galois_b3(capsys):
    code, out, _ = run_cli(capsys, "galois", "b3_monoid.json")
    assert code == 0
    assert "galois rank 3/4, hopf=false" in out


def test_check_axioms_b1_json_validates(capsys):
    code, out, _ = run_cli(capsys, "check-axioms", "b1.json", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, report_schema())
    assert doc["status"] == "pass" and doc["summary"]["failed"] == 0
    assert doc["checks"] == sorted(doc["checks"], key=lambda c: (c["check"], c["subject"]))


def test_json_is_byte_identical(capsys):
    argv = ("build-skewmon", "b2_kc2_f3.json", "--format", "json", "--seed-mutations", "5", "--seed", "7")
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second
    jsonschema.validate(json.loads(first), report_schema())


def test_representability_b2_certificate(capsys):
    code, out, _ = run_cli(capsys, "representability", "b2_kc2_f3.json", "--format", "json", "--probes", "R,H")
    assert code == 0
    doc = json.loads(out)
    assert doc["suites"][0]["results"]["certificate"]["verdict"] == "representable"


@pytest.mark.parametrize("name,expected", [
    ("corrupt_algebra.json", {"ALG.R", "BGD.ring"}),
    ("corrupt_ring.json", {"BGD.ring"}),
    ("corrupt_source.json", {"BGD.source"}),
    ("corrupt_target.json", {"BGD.target"}),
    ("corrupt_coassoc.json", {"BGD.coassoc"}),
    ("corrupt_counit.json", {"BGD.counit"}),
    ("corrupt_multiplicative.json", {"BGD.multiplicative"}),
])
def test_corrupted_instances_exit_1(capsys, name, expected):
    code, out, _ = run_cli(capsys, "check-bialgebroid", name, "--format", "json")
    assert code == 1
    failed = {c["check"] for c in json.loads(out)["checks"] if c["status"] == "fail"}
    assert expected <= failed
    assert set(raw(name)["corruption"]["expect"]) <= failed


def test_input_errors_exit_2(capsys, tmp_path):
    code, out, err = run_cli(capsys, "galois", str(tmp_path / "nope.json"), "--format", "json")
    assert code == 2
    doc = json.loads(out)
    assert doc["status"] == "input-error" and "no such file" in doc["error"]
    jsonschema.validate(doc, report_schema())
    assert "input error" in err
    code, _, err = run_cli(capsys, "check-axioms", "b1.json", "--probes", "R,Z")
    assert code == 2 and "Z" in err
    code, _, _ = run_cli(capsys, "check-bialgebroid", "b1.json", "--seed-mutations", "500")
    assert code == 2


@pytest.mark.parametrize("value", ["0", "x", "-3"])
def test_thread_cap_validation(capsys, monkeypatch, value):
    monkeypatch.setenv("SKEWMON_THREADS", value)
    code, _, err = run_cli(capsys, "galois", "b1.json")
    assert code == 2 and "SKEWMON_THREADS" in err


def test_threads_do_not_change_output(capsys, monkeypatch):
    argv = ("check-bialgebroid", "b3_monoid.json", "--format", "json", "--seed-mutations", "8")
    _, one, _ = run_cli(capsys, *argv)
    monkeypatch.setenv("SKEWMON_THREADS", "3")
    _, three, _ = run_cli(capsys, *argv)
    assert one == three


def test_mutation_gate_catches_all(capsys):
    code, out, _ = run_cli(capsys, "check-bialgebroid", "b2_kc2_f3.json", "--format", "json",
                           "--seed-mutations", "20", "--seed", "3")
    assert code == 0
    doc = json.loads(out)
    muts = [c for c in doc["checks"] if c["check"] == "MUTATION.coverage"]
    assert len(muts) == 20 and all(c["status"] == "pass" for c in muts)


def test_text_output_and_out_file(capsys, tmp_path):
    target = tmp_path / "r.txt"
    code, out, _ = run_cli(capsys, "galois", "b2_kc2_f3.json", "--out", str(target))
    assert code == 0 and out == ""
    text = target.read_text()
    assert text.startswith("skewmon galois: ")
    assert "galois rank 4/4, hopf=true" in text
    assert text.rstrip().endswith("checks pass)")


def test_rational_field_runs(capsys, tmp_path):
    data = raw("b2_kc2_f3.json")
    data["field"] = "rational"
    f = tmp_path / "b2q.json"
    f.write_text(json.dumps(data))
    code, out, _ = run_cli(capsys, "galois", str(f), "--format", "json")
    assert code == 0
    assert json.loads(out)["instance"]["field"] == "rational"


def test_console_script_exit_code():
    proc = subprocess.run([sys.executable, "-m", "skewmon.cli", "galois", "b1.json"], capture_output=True, text=True)
    assert proc.returncode == 0
    proc = subprocess.run([sys.executable, "-m", "skewmon.cli", "check-bialgebroid", "corrupt_coassoc.json"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
