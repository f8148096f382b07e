import json

import pytest

from qshje import ConfigError, load_scenario
from qshje.cli import main

GOOD_INI = """
[constants]
hbar = 1.0
mass = 1.0

[potential.x]
kind = harmonic
omega = 1.0
domain = -5 5
[potential.y]
kind = constant
v0 = 0.25
domain = -6 6
[potential.z]
kind = zero
domain = -30 30

[energies]
ex = 0.9
ey = 0.8
ez = 0.7

[action]
form = gammas
gammas = 0.3 -0.2 1.5 0.1 0.0 0.7
lambda0 = 0.25

[motion]
tp_policy = reflect
step = 1e-2
t_max = 1.0
start = 0.1 -0.2 0.0

[outputs]
format = csv

[run]
seed = 7
"""

TENSOR_INI = """
[potential.x]
kind = constant
v0 = 0.1
domain = -4 4
[potential.y]
kind = constant
v0 = 0.2
domain = -4 4
[potential.z]
kind = zero
domain = -4 4

[energies]
ex = 0.6
ey = 0.7
ez = 0.5

[action]
form = tensor
tensor = -1.09 -0.1 -1.21 0.7 0.521 1.03 1.81 1.8
    -0.614 -1.02 -1.89 -1.7 -1.17 -0.2 -1.415 0.55

[outputs]
format = json

[run]
seed = 3
"""


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "scn.ini"
    path.write_text(GOOD_INI)
    return str(path)


@pytest.fixture
def tensor_config(tmp_path):
    path = tmp_path / "tensor.ini"
    path.write_text(TENSOR_INI)
    return str(path)


def test_load_scenario_fields(config):
    scn = load_scenario(config)
    assert scn.energies.total() == pytest.approx(2.4)
    assert scn.gammas == (0.3, -0.2, 1.5, 0.1, 0.0, 0.7)
    assert scn.seed == 7
    assert scn.motion.t_max == 1.0
    assert scn.axes[2].domain == (-30.0, 30.0)


def test_load_scenario_overrides(config):
    scn = load_scenario(config, {"seed": 99, "format": "json",
                                 "tp_policy": "transmit"})
    assert scn.seed == 99
    assert scn.out_format == "json"
    assert all(p.value == "transmit" for p in scn.motion.tp_policy)


def test_degenerate_gamma_named_in_error(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text(GOOD_INI.replace("1.5 0.1", "2.0 0.5"))
    with pytest.raises(ConfigError, match="axis y"):
        load_scenario(str(path))


def test_missing_section_is_config_error(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[energies]\nex = 1\ney = 1\nez = 1\n")
    with pytest.raises(ConfigError, match="potential.x"):
        load_scenario(str(path))


def test_verify_command_passes(config, tmp_path, capsys):
    out = tmp_path / "out"
    out.mkdir()
    code = main(["verify", "--config", config, "--out", str(out)])
    assert code == 0
    report = (out / "verify_report.csv").read_text()
    assert "energy_partition" in report
    assert "false" not in report
    lines = capsys.readouterr().out.strip().splitlines()
    assert all(line.startswith("PASS") for line in lines)


def test_trajectory_command_outputs(config, tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    code = main(["trajectory", "--config", config, "--out", str(out)])
    assert code == 0
    for name in ("trajectory.csv", "events.csv", "summary.json",
                 "plot_t_x.csv", "plot_phase_z.csv"):
        assert (out / name).exists()
    header = (out / "trajectory.csv").read_text().splitlines()[0]
    assert header == ("t,x,y,z,Px,Py,Pz,vx,vy,vz,gxx,gyy,gzz,"
                      "region_x,region_y,region_z")
    summary = json.loads((out / "summary.json").read_text())
    assert summary["states"] == 101
    assert summary["max_energy_residual"] < 1e-6


def test_reduce_command_recovers_gammas(tensor_config, tmp_path, capsys):
    out = tmp_path / "out"
    out.mkdir()
    code = main(["reduce", "--config", tensor_config, "--out", str(out)])
    assert code == 0
    result = json.loads((out / "reduce_result.json").read_text())
    assert result["separable"]
    assert max(abs(g - e) for g, e in zip(
        result["gammas"], (0.3, -0.2, 1.5, 0.1, 0.0, 0.7))) < 1e-6


def test_missing_output_dir_exit_code(config, tmp_path):
    code = main(["verify", "--config", config, "--out",
                 str(tmp_path / "nope")])
    assert code == 2


def test_missing_config_exit_code(tmp_path):
    code = main(["verify", "--config", str(tmp_path / "absent.ini"),
                 "--out", str(tmp_path)])
    assert code == 2


def test_determinism_byte_identical(config, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        out.mkdir()
        assert main(["trajectory", "--config", config, "--out",
                     str(out), "--seed", "5"]) == 0
        outs.append(out)
    for fname in ("trajectory.csv", "summary.json", "events.csv"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()


def test_sweep_command(tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    ini = GOOD_INI + (
        "\n[sweep]\nparameter = energies.ez\nvalues = 0.6 0.7\n"
        "command = trajectory\n"
    )
    path = tmp_path / "sweep.ini"
    path.write_text(ini)
    code = main(["sweep", "--config", str(path), "--out", str(out)])
    assert code == 0
    index = json.loads((out / "sweep_index.json").read_text())
    assert len(index) == 2
    assert (out / "sweep_000" / "trajectory.csv").exists()
    assert (out / "sweep_001" / "summary.json").exists()


def test_csv_uses_seventeen_significant_digits(config, tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    main(["trajectory", "--config", config, "--out", str(out)])
    row = (out / "trajectory.csv").read_text().splitlines()[2]
    x = row.split(",")[1]
    assert float(x) == float(format(float(x), ".17g"))
    assert "." in x  # decimal point, not locale comma
