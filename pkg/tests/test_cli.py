import pytest

from run_scenario import main

MOMENTS = """
[scenario]
kind = "moments"
t = 0.5
dt = 0.05

[plot]
enabled = false
"""


@pytest.fixture
def config_file(tmp_path):
    def write(text: str, name: str = "scenario.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_validate_accepts_a_good_config(config_file):
    assert main(["validate", "--config", config_file(MOMENTS)]) == 0


def test_run_prints_emitted_files(config_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["moments", "--config", config_file(MOMENTS), "--output-dir", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "closure.csv" in printed
    assert (out / "report.json").exists()


def test_bad_config_exits_with_2(config_file):
    path = config_file(MOMENTS + "[state]\nwidth = 1.0\n")
    assert main(["validate", "--config", path]) == 2
    assert main(["validate", "--config", "does-not-exist.toml"]) == 2


def test_kind_mismatch_exits_with_2(config_file, tmp_path):
    path = config_file(MOMENTS)
    assert main(["evolve", "--config", path, "--output-dir", str(tmp_path / "x")]) == 2


def test_numerical_failure_exits_with_3(config_file, tmp_path):
    text = """
    [scenario]
    kind = "evolve"
    t = 3.0
    dt = 0.05

    [state]
    p0 = 4.0

    [grid]
    q_min = -8.0
    q_max = 8.0
    p_min = -8.0
    p_max = 8.0
    nq = 64
    np = 64
    """
    argv = ["evolve", "--config", config_file(text), "--output-dir", str(tmp_path / "run")]
    assert main(argv) == 3


def test_unwritable_output_exits_with_4(config_file, tmp_path):
    blocker = tmp_path / "taken"
    blocker.write_text("not a directory")
    argv = ["moments", "--config", config_file(MOMENTS), "--output-dir", str(blocker)]
    assert main(argv) == 4


def test_unknown_subcommand_is_rejected(config_file):
    with pytest.raises(SystemExit):
        main(["teleport", "--config", config_file(MOMENTS)])
