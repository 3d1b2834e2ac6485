import json

from hybridqmc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_plattice_example(capsys):
    code, out, _ = run(capsys, "gen", "plattice", "--p", "2", "--px", "X^2+X+1", "--q", "X")
    assert code == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert body == ["0/4", "3/4", "2/4", "1/4"]


def test_gen_hybrid_single_point(capsys):
    code, out, _ = run(
        capsys,
        "gen", "hybrid", "--p", "2", "--px", "X^2+X+1", "--bases", "X", "--q", "X",
        "--n", "1",
    )
    assert code == 0
    assert out.strip() == "1/4 1/2 3/4"


def test_gen_halton_single_zero_line(capsys):
    code, out, _ = run(capsys, "gen", "halton", "--p", "2", "--bases", "X,X+1", "--count", "1")
    assert code == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert len(body) == 1
    assert all(tok.startswith("0/") for tok in body[0].split())


def test_gen_korobov(capsys):
    code, out, _ = run(
        capsys, "gen", "korobov", "--p", "2", "--px", "X^2+X+1", "--g", "X", "--t", "2"
    )
    assert code == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert len(body) == 4 and len(body[0].split()) == 2


def test_disc_exact_examples(tmp_path, capsys):
    target = tmp_path / "pts.txt"
    code, _, _ = run(
        capsys,
        "gen", "plattice", "--p", "2", "--px", "X^2+X+1", "--q", "X",
        "--output", str(target),
    )
    assert code == 0
    code, out, _ = run(capsys, "disc", "exact", "--input", str(target))
    assert code == 0
    assert out.startswith("1/4 ")
    single = tmp_path / "zero.txt"
    single.write_text("# p=2\n# dim=1\n# count=1\n0/1\n")
    code, out, _ = run(capsys, "disc", "exact", "--input", str(single))
    assert code == 0
    assert out.startswith("1 ")


def test_disc_certificate(capsys):
    code, out, _ = run(
        capsys,
        "disc", "certificate", "--p", "2", "--px", "X^2+X+1", "--q", "X",
    )
    assert code == 0
    assert "total=4" in out


def test_search_report(capsys):
    code, out, _ = run(capsys, "search", "exhaustive", "--p", "2", "--m", "2", "--t", "1")
    assert code == 0
    report = json.loads(out)
    assert report["candidateCount"] == 3
    assert report["best"]["candidate"] == ["X"]
    assert report["existenceOk"] is True


def test_search_korobov_singleton(capsys):
    code, out, _ = run(capsys, "search", "korobov", "--p", "2", "--m", "1", "--t", "2")
    assert code == 0
    assert json.loads(out)["candidateCount"] == 1


def test_exit_codes(tmp_path, capsys):
    # usage: unknown suite
    code, _, err = run(capsys, "verify", "nonsense")
    assert code == 1 and "unknown suite" in err
    # parse error in polynomial text
    code, _, err = run(capsys, "gen", "plattice", "--p", "2", "--px", "X^2+3", "--q", "X")
    assert code == 1 and "parse error" in err
    # math precondition: reducible modulus
    code, _, err = run(capsys, "gen", "plattice", "--p", "2", "--px", "X^2+1", "--q", "X")
    assert code == 2 and "irreducible" in err
    # zero generator
    code, _, err = run(capsys, "gen", "plattice", "--p", "2", "--px", "X^2+X+1", "--q", "0")
    assert code == 2
    # budget
    code, _, err = run(
        capsys, "search", "exhaustive", "--p", "2", "--m", "3", "--t", "2",
        "--budget", "5",
    )
    assert code == 3 and "budget" in err


def test_no_partial_output_on_error(tmp_path, capsys):
    target = tmp_path / "out.txt"
    code, _, _ = run(
        capsys,
        "gen", "plattice", "--p", "2", "--px", "X^2+1", "--q", "X",
        "--output", str(target),
    )
    assert code == 2
    assert not target.exists()


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "valcount")
    assert code == 0
    assert "pass" in out


def test_byte_identical_across_runs_and_workers(tmp_path, capsys):
    outputs = []
    for workers in ("1", "4", "1"):
        target = tmp_path / f"run_{len(outputs)}.json"
        code, _, _ = run(
            capsys,
            "search", "exhaustive", "--p", "2", "--m", "3", "--t", "1",
            "--workers", workers, "--output", str(target),
        )
        assert code == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
