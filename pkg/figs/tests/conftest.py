import subprocess
import sys
import textwrap

import pytest


def run_primary_cli(args, cwd):
    """Invoke the ledger CLI as a subprocess: figures must only ever see
    its documented file output, never its internals."""
    proc = subprocess.run([sys.executable, "-m", "entroledger.cli", *args],
                         cwd=cwd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def gas_run_dir(tmp_path_factory):
    """A small gas-expansion run: ledger.csv + summary.json."""
    root = tmp_path_factory.mktemp("gas_run")
    cfg = root / "gas.toml"
    cfg.write_text(textwrap.dedent("""\
        scenario = "gas_expansion"
        steps = 40

        [params]
        L = 6
        L_init = 3
        N = 1
        """))
    out = root / "out"
    run_primary_cli(["run", str(cfg), "--out", str(out)], cwd=root)
    return out


@pytest.fixture(scope="session")
def gas_sweep_dir(tmp_path_factory):
    """A particle-number sweep: sweep.csv over N in {1, 2, 3}."""
    root = tmp_path_factory.mktemp("gas_sweep")
    cfg = root / "gas.toml"
    cfg.write_text(textwrap.dedent("""\
        scenario = "gas_expansion"
        steps = 40

        [params]
        L = 6
        L_init = 3
        """))
    out = root / "sweep"
    run_primary_cli(["sweep", str(cfg), "--param", "N", "--values", "1,2,3",
                     "--out", str(out)], cwd=root)
    return out


@pytest.fixture(scope="session")
def twin_run_dir(tmp_path_factory):
    """Equal-temperature twin-bodies run for the two-panel figure."""
    root = tmp_path_factory.mktemp("twin_run")
    cfg = root / "twin.toml"
    cfg.write_text('scenario = "twin_bodies"\n')
    out = root / "out"
    run_primary_cli(["run", str(cfg), "--out", str(out)], cwd=root)
    return out
