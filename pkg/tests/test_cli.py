import csv
import io
import json
import math
import subprocess
import sys

import pytest

from dpcbound.cli import main

AWGN = {
    "gain": {"atoms": [{"eta": 1.0, "p": 1.0}]},
    "interference": {"kind": "gaussian", "mean": 0.0, "variance": 1.0},
    "noise": {"c_x": 0.0, "c_z": 0.0, "innovation": {"kind": "gaussian", "mean": 0.0, "variance": 1.0}},
    "power": 1.0,
    "domain": "real",
}


@pytest.fixture
def scenario(tmp_path):
    def write(doc=None, name="s.json", **kw):
        d = json.loads(json.dumps(doc or AWGN))
        d.update(kw)
        p = tmp_path / name
        p.write_text(json.dumps(d))
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bound_awgn(scenario, capsys):
    code, out, _ = run(capsys, "bound", "--config", scenario())
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "method,eta,p,rate_bits,total_bits"
    assert lines[1] == "theorem1,1.0,1.0,0.5,0.5"
    assert lines[2] == "corollary1,1.0,1.0,0.5,0.5"


def test_bound_json(scenario, capsys):
    code, out, _ = run(capsys, "bound", "--config", scenario(), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["rows"][0]["rate_bits"] == 0.5 and doc["command"] == "bound"


def test_bound_omits_corollary_with_input_correlation(scenario, capsys):
    path = scenario(noise={"c_x": 0.3, "c_z": 0.0, "innovation": {"kind": "gaussian"}})
    _, out, _ = run(capsys, "bound", "--config", path)
    assert {r["method"] for r in rows(out)} == {"theorem1"}


def test_malformed_pmf_exit_2(scenario, capsys):
    path = scenario(gain={"atoms": [{"eta": 1.0, "p": 0.6}, {"eta": 2.0, "p": 0.6}]})
    code, out, err = run(capsys, "bound", "--config", path)
    assert code == 2 and out == ""
    assert "gain.atoms" in err and "BadPmf" in err


def test_complex_doubles(scenario, capsys):
    _, real, _ = run(capsys, "bound", "--config", scenario())
    _, cplx, _ = run(capsys, "bound", "--config", scenario(domain="complex"))
    for r, c in zip(rows(real), rows(cplx)):
        assert float(c["rate_bits"]) == 2 * float(r["rate_bits"])


def test_lemma_deterministic(scenario, capsys):
    path = scenario()
    outs = [run(capsys, "lemma", "--config", path, "--seed", "7", "--samples", "20000", "--workers", w)[1]
            for w in ("1", "1", "4")]
    assert outs[0] == outs[1] == outs[2]
    r = rows(outs[0])[0]
    assert list(r) == ["eta", "p", "alpha", "beta", "entropy_nats", "stderr", "rate_bits", "total_bits",
                       "stderr_bits", "theorem_bits"]
    assert float(r["theorem_bits"]) == 0.5


def test_lemma_laplace_above_theorem(scenario, capsys):
    doc = dict(AWGN, noise={"c_x": 0.0, "c_z": 0.0, "innovation": {"kind": "laplace", "variance": 1.0}})
    code, out, _ = run(capsys, "lemma", "--config", scenario(doc), "--samples", "100000")
    r = rows(out)[0]
    assert code == 0
    assert float(r["rate_bits"]) >= float(r["theorem_bits"]) - 3 * float(r["stderr_bits"])


def test_lemma_too_few_samples(scenario, capsys):
    code, _, err = run(capsys, "lemma", "--config", scenario(), "--samples", "20")
    assert code == 2 and "n_samples" in err


def test_bad_seed_and_workers(scenario, capsys):
    assert run(capsys, "bound", "--config", scenario(), "--seed", "-1")[0] == 2
    assert run(capsys, "bound", "--config", scenario(), "--workers", "0")[0] == 2


def test_verify_gaussian_passes(scenario, capsys):
    code, out, _ = run(capsys, "verify", "--config", scenario(), "--samples", "20000")
    assert code == 0
    assert out.splitlines()[-1].split() == ["overall", "PASS"]
    assert "FAIL" not in out


def test_verify_correlation_overflow(scenario, capsys):
    doc = {"gain": {"atoms": [[1.0, 1.0]]}, "power": 1.0,
           "stats": {"sigma_n2": 1.0, "rho_xn": 0.8, "rho_zn": 0.67}}
    code, out, _ = run(capsys, "verify", "--config", scenario(doc))
    assert code == 1
    assert "CorrelationOverflow" in out and "FAIL" in out


def test_zero_noise_sentinel(scenario, capsys):
    path = scenario(noise={"c_x": 0.0, "c_z": 0.0, "innovation": {"kind": "gaussian", "variance": 0.0}},
                    degenerate=True)
    code, out, _ = run(capsys, "bound", "--config", path)
    assert code == 0 and rows(out)[0]["rate_bits"] == "inf"
    code, out, _ = run(capsys, "verify", "--config", path)
    assert code == 0 and "unbounded" in out
    # without the flag the same scenario is rejected
    path = scenario(noise={"c_x": 0.0, "c_z": 0.0, "innovation": {"kind": "gaussian", "variance": 0.0}},
                    name="z.json")
    assert run(capsys, "bound", "--config", path)[0] == 2


def test_sweep_csv(scenario, capsys):
    code, out, _ = run(capsys, "sweep", "--config", scenario(), "--axis", "rho_zn", "--values", "0,0.3",
                       "--samples", "5000")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "axis,value,method,total_bits,stderr_bits"
    got = [(r["value"], r["method"]) for r in rows(out)]
    assert got == [("0.0", "lemma_mc"), ("0.0", "theorem1"), ("0.3", "lemma_mc"), ("0.3", "theorem1")]
    thm = [float(r["total_bits"]) for r in rows(out) if r["method"] == "theorem1"]
    assert thm[0] == 0.5 and thm[1] == pytest.approx(0.5 * math.log2(1 + 1 / 0.91), abs=1e-12)


def test_sweep_from_file_and_errors(scenario, capsys):
    path = scenario(sweep={"axis": "rho_zn", "values": [0.5, 1.2]})
    code, out, err = run(capsys, "sweep", "--config", path, "--samples", "2000")
    assert code == 0
    assert {r["value"] for r in rows(out)} == {"0.5"}
    assert "1.2" in err


def test_sweep_empty_values(scenario, capsys):
    code, out, _ = run(capsys, "sweep", "--config", scenario(), "--axis", "snr_db", "--values", "")
    assert code == 0 and out == "axis,value,method,total_bits,stderr_bits\n"


def test_sweep_needs_axis(scenario, capsys):
    assert run(capsys, "sweep", "--config", scenario())[0] == 2


def test_draw(scenario, capsys, tmp_path):
    out_path = tmp_path / "x.csv"
    code, _, _ = run(capsys, "draw", "--config", scenario(), "--samples", "5", "--out", str(out_path))
    lines = out_path.read_text().splitlines()
    assert code == 0 and lines[0] == "x,z,n,y" and len(lines) == 6


def test_unsupported_draw(scenario, capsys):
    code, _, err = run(capsys, "draw", "--config", scenario(interference={"kind": "unbounded"}))
    assert code == 2 and "unbounded" in err.lower()


def test_io_errors(scenario, capsys, tmp_path):
    assert run(capsys, "bound", "--config", str(tmp_path / "missing.json"))[0] == 3
    code, _, _ = run(capsys, "bound", "--config", scenario(), "--out", str(tmp_path / "no" / "dir" / "o.csv"))
    assert code == 3


def test_json_syntax_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{\n  oops\n}")
    code, _, err = run(capsys, "bound", "--config", str(p))
    assert code == 2 and "line 2" in err


def test_manifest(scenario, capsys, tmp_path):
    m = tmp_path / "m.json"
    code, out, _ = run(capsys, "bound", "--config", scenario(), "--seed", "3", "--manifest", str(m))
    doc = json.loads(m.read_text())
    assert code == 0
    assert doc["seed"] == 3 and doc["command"] == "bound" and doc["wall_clock_s"] >= 0
    assert doc["rows"][0] == ["theorem1", 1.0, 1.0, 0.5, 0.5]
    assert "wall_clock" not in out


def test_console_entry_point(scenario):
    res = subprocess.run([sys.executable, "-m", "dpcbound.cli", "bound", "--config", scenario()],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "theorem1,1.0,1.0,0.5,0.5"
