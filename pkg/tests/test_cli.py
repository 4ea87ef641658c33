import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from supershift import cli


def run(args, capsys):
    code = cli.main(args)
    return code, capsys.readouterr()


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_evolve_defaults_write_exact_plane_wave(capsys):
    code, out = run(["evolve"], capsys)
    assert code == 0
    table = rows(out.out)
    assert table[0] == cli.EVOLVE_HEADER
    assert len(table) == 1 + 2 * 4
    for t, x, re, im, *_, conv in table[1:]:
        ref = np.exp(1j * (float(x) - float(t)))
        assert abs(complex(float(re), float(im)) - ref) < 1e-10 and conv == "1"


def test_output_is_byte_identical(tmp_path):
    args = ["evolve", "--set", "potential.variant=point", "--set", "potential.phi=0.3",
            "--set", "potential.alpha_re=0.48", "--set", "potential.alpha_im=0.36",
            "--set", "potential.beta_re=0.8", "--set", "potential.beta_im=0.0"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(args + ["-o", str(a)]) == 0
    assert cli.main(args + ["-o", str(b), "-j", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().count(b"\r") == 0


def test_empty_grid_is_config_error(capsys, caplog):
    code, out = run(["evolve", "--set", "grid.x="], capsys)
    assert code == 2 and out.out == ""
    assert "grid" in caplog.text


def test_unknown_key_is_config_error(capsys):
    code, _ = run(["evolve", "--set", "grid.y=1"], capsys)
    assert code == 2


def test_empty_n_seq_writes_header_only(capsys):
    code, out = run(["supershift", "--set", "supershift.n_seq="], capsys)
    assert code == 0
    assert out.out == ",".join(cli.SUPERSHIFT_HEADER) + "\n"


def test_supershift_table(capsys):
    code, out = run(["supershift", "--set", "supershift.n_seq=4,8",
                     "--set", "supershift.compact=0.5:2:41"], capsys)
    assert code == 0
    table = rows(out.out)
    assert [r[0] for r in table[1:]] == ["4", "8"]
    assert float(table[1][1]) == pytest.approx(4.158004452497873, rel=1e-9)


def test_green_table_residuals_small(capsys):
    code, out = run(["green-table", "--set", "potential.variant=centrifugal"], capsys)
    assert code == 0
    table = rows(out.out)
    assert table[0] == cli.GREEN_HEADER
    g = np.array([[float(v) for v in r] for r in table[1:]])
    mag = np.hypot(g[:, 4], g[:, 5])
    assert np.all(g[:, 8] < 1e-5 * (1 + mag / g[:, 0]))


def test_unconverged_cells_exit_four(capsys, monkeypatch):
    real = cli.evolve_grid

    def flaky(prob, t, x, workers=1):
        fld = real(prob, t, x, workers)
        fld.converged[0, 0] = False
        return fld

    monkeypatch.setattr(cli, "evolve_grid", flaky)
    code, out = run(["evolve"], capsys)
    assert code == 4
    assert rows(out.out)[1][-1] == "0"


def test_defaults_round_trip(tmp_path, capsys):
    code, out = run(["defaults", "--set", "contour.theta=0.6"], capsys)
    assert code == 0
    path = tmp_path / "cfg.ini"
    path.write_text(out.out)
    code, again = run(["defaults", "-c", str(path)], capsys)
    assert again.out == out.out


def test_selfcheck_jsonl(tmp_path, monkeypatch, capsys):
    from supershift import acceptance
    monkeypatch.setattr(acceptance, "FAST", (2, 10))
    report = tmp_path / "r.jsonl"
    code, out = run(["selfcheck", "--jsonl", str(report)], capsys)
    lines = [json.loads(s) for s in report.read_text().splitlines()]
    assert [d["criterion"] for d in lines] == [2, 10]
    assert code == (0 if all(d["passed"] for d in lines) else 1)
    assert "criterion  2" in out.out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "supershift", "--version"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("supershift ")
