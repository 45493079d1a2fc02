import io
import json
import subprocess
import sys

import pytest

from cayleyparity.cli import RunConfig, config_from_args, main, run
from cayleyparity.errors import InputError


def invoke(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    try:
        cfg = config_from_args(list(argv), env=env or {})
    except InputError as exc:
        return 2, "", str(exc)
    code = run(cfg, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_eigen_json_example():
    code, out, _ = invoke("eigen", "--group", "builtin:semidirect(7,3,2)", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "cayleyparity.report" and doc["version"] == 1
    res = doc["result"]
    assert res["P"] == [[1, 6, 14], [1, 6, -7], [1, -1, 0]]
    assert res["m"] == [1, 2, 18] and res["frame_quotient"] == 21609


def test_verify_odd_examples():
    code, out, _ = invoke("verify-odd", "--group", "builtin:cyclic(9)")
    assert code == 0 and "3/3 subsets pass" in out
    code, _, err = invoke("verify-odd", "--group", "builtin:cyclic(4)")
    assert code == 2 and "InapplicableOrder" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["describe-group", "--group", "builtin:heisenberg(3)"],
        ["classes", "--group", "builtin:cyclic(9)"],
        ["scheme", "--group", "builtin:semidirect(7,3,2)", "--kind", "conjugacy", "--with-relation"],
        ["frame-quotient", "--group", "builtin:semidirect(7,3,2)"],
        ["verify-signed", "--group", "builtin:cyclic(9)"],
        ["verify-gs", "--group", "builtin:cyclic(9)"],
        ["quotient-check", "--group", "builtin:cyclic(9)"],
        ["even-order-demo"],
        ["sweep", "--order-range", "3..9", "--odd-only"],
    ],
)
def test_commands_exit_zero_in_both_formats(argv):
    code, out, _ = invoke(*argv)
    assert code == 0 and out.strip()
    code, out, _ = invoke(*argv, "--format", "json")
    assert code == 0 and json.loads(out)["command"] == argv[0]


def test_frame_quotient_report():
    code, out, _ = invoke("frame-quotient", "--group", "builtin:semidirect(7,3,2)", "--format", "json")
    res = json.loads(out)["result"]
    assert res["frame_quotient"] == 22235661 and len(res["primes"]) == 3


def test_input_errors_exit_2(tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text('{"table": [[0, 1], [1, 1]]}')
    cases = [
        ("eigen", "--group", "builtin:nonsense(3)"),
        ("eigen", "--group", str(bad)),
        ("eigen",),
        ("eigen", "--group", "builtin:cyclic(3)", "--order-range", "3..5"),
        ("sweep", "--order-range", "9..3"),
        ("verify-signed", "--group", "builtin:heisenberg(3)", "--signed-cap", "2"),
        ("frobnicate",),
    ]
    for argv in cases:
        assert invoke(*argv)[0] == 2, argv


def test_thread_env_validation():
    assert invoke("even-order-demo", env={"CAYLEYPARITY_THREADS": "x"})[0] == 2
    cfg = config_from_args(["sweep"], env={"CAYLEYPARITY_THREADS": "3"})
    assert cfg.threads == 3


def test_sweep_marks_caps_as_skipped():
    code, out, _ = invoke("sweep", "--order-range", "27..27", "--odd-only", "--signed-cap", "5", "--format", "json")
    groups = json.loads(out)["result"]["groups"]
    assert code == 0
    assert [g["group"] for g in groups] == sorted(g["group"] for g in groups)
    skipped = {g["group"] for g in groups for c in g["checks"] if c["check"] == "verify-signed" and c["status"] == "skipped"}
    assert "direct_product(cyclic(3),cyclic(3),cyclic(3))" in skipped and "heisenberg(3)" not in skipped


def test_sweep_even_orders_skip_parity_checks():
    code, out, _ = invoke("sweep", "--order-range", "4..4", "--format", "json")
    (g1, g2) = json.loads(out)["result"]["groups"]
    assert code == 0
    assert g1["checks"][0]["status"] == "skipped"


def test_json_is_byte_identical_across_runs():
    argv = ("sweep", "--order-range", "3..21", "--odd-only", "--format", "json", "--seed", "5")
    assert invoke(*argv)[1] == invoke(*argv)[1]
    a = invoke("frame-quotient", "--group", "builtin:heisenberg(3)", "--format", "json", "--seed", "3")[1]
    assert a == invoke("frame-quotient", "--group", "builtin:heisenberg(3)", "--format", "json", "--seed", "3")[1]


def test_timing_flag_adds_elapsed():
    _, out, _ = invoke("verify-odd", "--group", "builtin:cyclic(9)", "--format", "json", "--timing")
    assert "elapsed_seconds" in json.loads(out)["result"]
    _, out, _ = invoke("verify-odd", "--group", "builtin:cyclic(9)", "--format", "json")
    assert "elapsed_seconds" not in json.loads(out)["result"]


def test_runconfig_invariants():
    with pytest.raises(InputError):
        RunConfig(command="eigen")
    with pytest.raises(InputError):
        RunConfig(command="eigen", group_source="builtin:cyclic(3)", order_range=(3, 5))


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cayleyparity.cli", "verify-odd", "--group", "builtin:cyclic(9)"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "3/3 subsets pass" in proc.stdout
    assert main(["verify-odd", "--group", "builtin:cyclic(4)"]) == 2
