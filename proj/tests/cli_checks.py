"""End-to-end checks of the command-line tool (path in $BIFRAC_CLI)."""

import json
import math
import os
import re
import subprocess

import pytest

CLI = os.environ.get("BIFRAC_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="BIFRAC_CLI is not set")

VALUE_RE = re.compile(r"^(-?\d+\.\d{5})([+-]\d+\.\d{5})i$")


def run(*args, timeout=600):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=timeout)


def parse_value(line):
    m = VALUE_RE.match(line.strip())
    assert m, f"unparseable kernel value: {line!r}"
    return complex(float(m.group(1)), float(m.group(2)))


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if ln]
    assert lines[0] == "alpha,beta,re,im"
    rows = []
    for ln in lines[1:]:
        a, b, re_s, im_s = ln.split(",")
        rows.append((a, b, re_s, im_s))
    return rows


# ----------------------------------------------------------------- kernel --


def test_kernel_near_fourier_point_prints_clean_zero():
    # theta = 1.5708 is regular (not snapped to pi/2); the tiny imaginary
    # residue must still print as +0.00000i, never -0.00000i.
    r = run("kernel", "--theta", "1.5708")
    assert r.returncode == 0
    assert r.stdout == "0.39894+0.00000i\n"


def test_kernel_fourier_value():
    r = run("kernel", "--theta", str(math.pi / 2), "--x", "1", "--y", "1")
    assert r.returncode == 0
    got = parse_value(r.stdout)
    want = complex(math.cos(1.0), math.sin(1.0)) / math.sqrt(2.0 * math.pi)
    assert abs(got - want) < 2e-5


def test_kernel_z_alias_matches_y():
    a = run("kernel", "--theta", "0.7", "--x", "0.5", "--y", "0.25")
    b = run("kernel", "--theta", "0.7", "--x", "0.5", "--z", "0.25")
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    both = run("kernel", "--theta", "0.7", "--y", "0.1", "--z", "0.2")
    assert both.returncode == 2


def test_kernel_special_angle_is_an_error():
    r = run("kernel", "--theta", "0")
    assert r.returncode == 3
    assert "error:" in r.stderr


def test_kernel_requires_theta_or_compose():
    r = run("kernel")
    assert r.returncode == 2
    assert "error:" in r.stderr


def test_kernel_compose_agrees_with_closed_form():
    r = run("kernel", "--compose", "0.5", "0.4", "--x", "0.3", "--y", "-0.2")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert len(lines) == 2
    quadrature = parse_value(lines[0])
    closed = parse_value(lines[1])
    assert abs(quadrature - closed) < 2e-5


# ------------------------------------------------------------ state-stats --


def test_sweep_csv_shape_and_rs_check():
    r = run("state-stats", "--alpha", "2", "--beta", "2",
            "--sweep-theta-alpha", "0.2:0.4:0.1")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "theta_alpha,sigma_pp,mean_n,g2,norm_captured"
    data = lines[1:]
    assert len(data) == 3
    for ln in data:
        fields = ln.split(",")
        assert len(fields) == 5
        [float(f) for f in fields]
    assert data[0].startswith("0.2,")
    assert "# rs_check" in r.stderr


def test_single_point_exact_vacuum():
    # (alpha, beta) = (0, 0) at the zero angle pair reduces to the identity,
    # so the state is the exact vacuum: mean_n is exactly 0 and g2 is nan.
    r = run("state-stats", "--alpha", "0", "--beta", "0", "--theta-alpha", "0")
    assert r.returncode == 0
    fields = dict(ln.split(" ", 1) for ln in r.stdout.splitlines())
    assert fields["mean_n"] == "0"
    assert fields["g2"] == "nan"
    assert fields["norm_captured"] == "1"
    assert float(fields["sigma_xx"]) == pytest.approx(0.5, abs=1e-12)
    assert float(fields["sigma_pp"]) == pytest.approx(0.5, abs=1e-12)


def test_single_point_json():
    r = run("state-stats", "--alpha", "0", "--beta", "0", "--theta-alpha", "0",
            "--json")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["path"] == "special"
    assert obj["trusted"] is True
    assert obj["g2"] is None
    assert obj["mean_n"] == 0


def test_state_stats_requires_an_angle():
    r = run("state-stats", "--alpha", "1", "--beta", "0")
    assert r.returncode == 2


def test_sweep_out_file(tmp_path):
    path = tmp_path / "sweep.csv"
    r = run("state-stats", "--alpha", "2", "--beta", "2",
            "--sweep-theta-alpha", "0.3:0.3:0.1", "--out", str(path))
    assert r.returncode == 0
    assert r.stdout == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "theta_alpha,sigma_pp,mean_n,g2,norm_captured"
    assert len(lines) == 2


# ------------------------------------------------------------------- grid --


def test_grid_wigner_vacuum_peaks_at_origin():
    r = run("grid", "--kind", "wigner", "--op", "fock:0", "--range", "-3:3:61",
            "--n", "32")
    assert r.returncode == 0
    rows = parse_csv(r.stdout)
    assert len(rows) == 61 * 61
    best = max(rows, key=lambda t: float(t[2]))
    assert best[0] == "0" and best[1] == "0"
    assert float(best[2]) == pytest.approx(1.0, abs=1e-9)
    assert min(float(t[2]) for t in rows) > -1e-9


def test_grid_q_vacuum_point():
    half_pi = repr(math.pi / 2)
    r = run("grid", "--kind", "q", "--op", "fock:0", "--range", "-2:2:5",
            "--angles", half_pi, half_pi, "--n", "32")
    assert r.returncode == 0
    value = {(t[0], t[1]): float(t[2]) for t in parse_csv(r.stdout)}
    assert value[("1", "0")] == pytest.approx(math.exp(-1.0), abs=1e-9)
    assert value[("0", "0")] == pytest.approx(1.0, abs=1e-12)


def test_grid_weyl_equals_relabeled_zero_pair_transform():
    # At the zero angle pair the transform is the Weyl function with relabeled
    # axes; the CSV payload entries must agree byte for byte.
    args = ["--op", "coherent:0.7,0.3", "--range", "-2:2:9", "--n", "96"]
    w = run("grid", "--kind", "weyl", *args)
    b = run("grid", "--kind", "bifrac-wigner", "--angles", "0", "0", *args)
    assert w.returncode == 0 and b.returncode == 0
    wrows = parse_csv(w.stdout)
    brows = parse_csv(b.stdout)
    n = 9
    for i in range(n):
        for j in range(n):
            got = brows[i * n + j]
            want = wrows[j * n + (n - 1 - i)]
            assert got[2] == want[2] and got[3] == want[3]


def test_grid_untrusted_truncation_is_refused():
    args = ["grid", "--kind", "q", "--op", "fock:0", "--range", "-2.5:2.5:5",
            "--angles", "0.3", "0.2", "--n", "16"]
    r = run(*args)
    assert r.returncode == 1
    assert "untrusted" in r.stderr
    forced = run(*args, "--allow-untrusted")
    assert forced.returncode == 0
    assert len(parse_csv(forced.stdout)) == 25


def test_grid_angle_validation():
    r = run("grid", "--kind", "weyl", "--op", "fock:0", "--angles", "0.3", "0.2")
    assert r.returncode == 2
    r = run("grid", "--kind", "bifrac-wigner", "--op", "fock:0")
    assert r.returncode == 2


def test_grid_verify_oracle_spot_checks():
    r = run("grid", "--kind", "bifrac-wigner", "--op", "fock:0",
            "--range", "-2:2:21", "--angles", "0.3", "0.2", "--n", "128",
            "--verify-oracle")
    assert r.returncode == 0
    assert "# oracle max |dev|" in r.stderr


def test_grid_json_with_file_operator(tmp_path):
    op = {"dim": 4, "rows": [[[1.0 if r == c == 0 else 0.0, 0.0]
                              for c in range(4)] for r in range(4)]}
    path = tmp_path / "op.json"
    path.write_text(json.dumps(op))
    r = run("grid", "--kind", "weyl", "--op", f"file:{path}", "--range",
            "-1:1:3", "--format", "json")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["kind"] == "weyl"
    assert obj["angles"] is None
    assert obj["fock_dim"] == 4
    assert len(obj["values"]) == 9
    center = obj["values"][4]
    assert center[0] == pytest.approx(1.0, abs=1e-12)


def test_grid_p_thermal_center():
    r = run("grid", "--kind", "p", "--op", "thermal:0.5", "--range", "-1:1:3",
            "--angles", "0.4", "0.4", "--n", "160")
    assert r.returncode == 0
    value = {(t[0], t[1]): float(t[2]) for t in parse_csv(r.stdout)}
    assert value[("0", "0")] == pytest.approx(1.0, abs=5e-3)


def test_grid_p_vacuum_is_refused():
    r = run("grid", "--kind", "p", "--op", "fock:0", "--range", "-1:1:3",
            "--angles", "0.4", "0.4", "--n", "16")
    assert r.returncode == 3
    assert "error:" in r.stderr


# ----------------------------------------------------------------- verify --


def test_verify_subset_is_deterministic():
    a = run("verify", "--only", "kernel_point_values", "--seed", "7")
    b = run("verify", "--only", "kernel_point_values", "--seed", "7")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    obj = json.loads(a.stdout)
    assert obj["failed"] == 0
    assert obj["total"] >= 1


def test_verify_empty_selection_fails():
    r = run("verify", "--only", "zzz_no_such_check")
    assert r.returncode == 1
    obj = json.loads(r.stdout)
    assert obj["total"] == 0
