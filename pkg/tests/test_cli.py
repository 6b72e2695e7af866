import csv
import subprocess
import sys

import pytest

from m2tlwe import documents
from m2tlwe.cli import main
from m2tlwe.group import GroupElement as E
from m2tlwe.scheme import Ciphertext


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def keygen_m2t(tmp_path, capsys, seed="1"):
    pub, sec = tmp_path / "k.pub", tmp_path / "k.sec"
    code, _, _ = run(capsys, "keygen", "--t", "11", "--m", "32", "--n", "16", "--nc", "8",
                     "--seed", seed, "--out-pub", str(pub), "--out-sec", str(sec))
    assert code == 0
    return pub, sec


def test_pipeline_prints_bit(tmp_path, capsys):
    pub, sec = keygen_m2t(tmp_path, capsys)
    for bit in ("0", "1"):
        ct = tmp_path / f"c{bit}"
        assert run(capsys, "encrypt", "--pub", str(pub), "--bit", bit, "--seed", "1", "--out", str(ct))[0] == 0
        code, out, _ = run(capsys, "decrypt", "--sec", str(sec), "--ct", str(ct))
        assert (code, out) == (0, f"{bit}\n")


@pytest.mark.parametrize("scheme, extra", [("regev", ["--n", "8"]), ("sylow", ["--n", "5"])])
def test_baseline_pipeline(tmp_path, capsys, scheme, extra):
    pub, sec, ct = tmp_path / "p", tmp_path / "s", tmp_path / "c"
    assert run(capsys, "keygen", "--scheme", scheme, *extra, "--seed", "4",
               "--out-pub", str(pub), "--out-sec", str(sec))[0] == 0
    assert run(capsys, "encrypt", "--pub", str(pub), "--bit", "1", "--seed", "5", "--out", str(ct))[0] == 0
    assert run(capsys, "decrypt", "--sec", str(sec), "--ct", str(ct))[1] == "1\n"


def test_keygen_deterministic(tmp_path, capsys):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    a = keygen_m2t(tmp_path / "a", capsys, "9")
    b = keygen_m2t(tmp_path / "b", capsys, "9")
    assert a[0].read_bytes() == b[0].read_bytes() and a[1].read_bytes() == b[1].read_bytes()


def test_seed_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("M2TLWE_SEED", "17")
    outs = []
    for name in ("x", "y"):
        pub, sec = tmp_path / f"{name}.pub", tmp_path / f"{name}.sec"
        run(capsys, "keygen", "--t", "6", "--m", "4", "--n", "3", "--nc", "1",
            "--out-pub", str(pub), "--out-sec", str(sec))
        outs.append(pub.read_text())
    assert outs[0] == outs[1]
    monkeypatch.setenv("M2TLWE_SEED", "-3")
    code, _, _ = run(capsys, "keygen", "--t", "6", "--m", "4", "--n", "3", "--nc", "1",
                     "--out-pub", str(tmp_path / "z1"), "--out-sec", str(tmp_path / "z2"))
    assert code == 64


def test_not_in_cycle_exit_code(tmp_path, capsys):
    pub, sec = keygen_m2t(tmp_path, capsys)
    pk = documents.loads(pub.read_text())
    bogus = Ciphertext(tuple(E(0, 0) for _ in range(16)), E(1, 2))
    ct = tmp_path / "bogus"
    ct.write_text(documents.dumps(bogus, pk=pk))
    code, out, err = run(capsys, "decrypt", "--sec", str(sec), "--ct", str(ct))
    assert code == 2 and out == "" and "not in <ba>" in err


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["encrypt", "--pub", "x", "--bit", "2"])
    assert exc.value.code == 64
    code, _, _ = run(capsys, "keygen", "--t", "11", "--m", "32", "--n", "16",
                     "--out-pub", str(tmp_path / "a"), "--out-sec", str(tmp_path / "b"))
    assert code == 64
    code, _, err = run(capsys, "keygen", "--t", "11", "--m", "32", "--n", "16", "--nc", "16",
                       "--out-pub", str(tmp_path / "a"), "--out-sec", str(tmp_path / "b"))
    assert code == 64 and "n_c" in err


def test_document_errors(tmp_path, capsys):
    pub, sec = keygen_m2t(tmp_path, capsys)
    bad = tmp_path / "bad"
    bad.write_text("format: m2t-ct\nversion: 9\n")
    assert run(capsys, "decrypt", "--sec", str(sec), "--ct", str(bad))[0] == 65
    assert run(capsys, "decrypt", "--sec", str(sec), "--ct", str(pub))[0] == 65
    assert run(capsys, "encrypt", "--pub", str(sec), "--bit", "0", "--seed", "1")[0] == 65
    assert run(capsys, "decrypt", "--sec", str(sec), "--ct", str(tmp_path / "missing"))[0] == 66


def test_failure_table(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert run(capsys, "failure-table", "--r-list", "16", "--log2rho-list", "10", "--out", str(out))[0] == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["r", "log2_rho", "sigma", "p_fail"]
    assert (rows[0]["r"], rows[0]["log2_rho"]) == ("16", "10")
    assert 4.8e-28 / 10 < float(rows[0]["p_fail"]) < 4.8e-28 * 10
    assert run(capsys, "failure-table", "--r-list", "16", "--log2rho-list", "2")[0] == 64


def test_fig_data(capsys):
    code, out, _ = run(capsys, "fig-data", "--rho", "16", "--sigma", "1", "--r", "2", "--precision", "128")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,p0,p1" and len(lines) == 17
    assert run(capsys, "fig-data", "--rho", "12")[0] == 64


def test_distinguish(capsys):
    code, out, _ = run(capsys, "distinguish", "--t", "5", "--n", "4", "--nc", "2", "--trials", "300",
                       "--training", "200", "--seed", "3")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert [r["test"] for r in rows] == ["chi2_oracle_enc", "chi2_oracle_rand", "game_constant",
                                         "game_alpha_bit", "game_k_parity", "game_k_frequency"]
    code2, out2, _ = run(capsys, "distinguish", "--t", "5", "--n", "4", "--nc", "2", "--trials", "300",
                         "--training", "200", "--seed", "3")
    assert out2 == out


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("PASS") == 12 and "FAIL" not in out


def test_console_module():
    proc = subprocess.run([sys.executable, "-m", "m2tlwe", "decrypt"], capture_output=True, text=True)
    assert proc.returncode == 64
