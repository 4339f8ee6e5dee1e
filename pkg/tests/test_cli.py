import json

import numpy as np
import polars as pl
import pytest

from delayedgame import GameParams
from delayedgame.cli import RunMetadata, main, rerun_from_metadata
from delayedgame.inversion import tau_cdf


def _run(command: str, config, *args: str) -> int:
    return main([command, "--config", str(config), *args])


def _eval(capsys, config, *args) -> tuple[int, dict]:
    code = main(["eval", "--config", str(config), *args])
    out = capsys.readouterr().out
    return code, json.loads(out) if out else {}


def _write_config(tmp_path, **update):
    raw = {
        "lambda": 1.0,
        "mu": 2.0,
        "delta_law": {"type": "exponential", "rate": 5.0},
        "M": 3,
        "N": 4,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw | update))
    return path


# eval


def test_eval_at_origin(capsys, reference_config):
    code, record = _eval(capsys, reference_config, "--u", "1", "--v", "1", "--theta", "0")
    assert code == 0
    assert complex(record["phi_closed"]) == 1
    assert complex(record["phi_operator"]) == 1
    assert record["difference"] == 0


def test_eval_dual_path(capsys, reference_config):
    code, record = _eval(capsys, reference_config, "--u", "0.9", "--v", "0.7", "--theta", "0.5")
    assert code == 0
    assert record["difference"] <= 1e-9
    assert record["moments"]["meanTau"] > 0
    assert "gamma" in record


def test_eval_complex_point(capsys, reference_config):
    code, record = _eval(capsys, reference_config, "--u", "0.3+0.4j", "--theta", "1-2j")
    assert code == 0
    assert record["difference"] <= 1e-9


def test_eval_closed_path_needs_exponential_law(capsys, deterministic_config):
    code = main(["eval", "--config", str(deterministic_config), "--path", "closed", "--u", "0.5"])
    assert code == 3
    assert "NotClosedFormCapable" in capsys.readouterr().err


def test_eval_operator_path_for_deterministic_law(capsys, deterministic_config):
    code, record = _eval(capsys, deterministic_config, "--path", "operator", "--u", "0.5")
    assert code == 0
    assert record["phi_closed"] is None
    assert 0 < complex(record["phi_operator"]).real < 1


def test_eval_outside_domain(capsys, reference_config):
    code = main(["eval", "--config", str(reference_config), "--u", "2"])
    assert code == 3
    assert "QueryDomainError" in capsys.readouterr().err


@pytest.mark.parametrize(
    "update",
    [{"lambda": -1.0}, {"M": 0}, {"M": 2.5}, {"gamma": 5.0}, {"delta_law": {"type": "uniform"}}],
)
def test_invalid_config(capsys, tmp_path, update):
    config = _write_config(tmp_path, **update)
    assert main(["eval", "--config", str(config)]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_missing_config(capsys, tmp_path):
    assert main(["eval", "--config", str(tmp_path / "absent.json")]) == 2


def test_config_is_required():
    with pytest.raises(SystemExit):
        main(["eval"])


# distributions


def test_pmf_to_file(tmp_path, reference_config):
    out = tmp_path / "pmf.csv"
    code = _run("pmf", reference_config, "--side", "A", "--max-k", "40", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert text.startswith("k,mass\n")
    assert "\r" not in text
    frame = pl.read_csv(out)
    assert frame.height == 41
    assert frame["mass"].sum() == pytest.approx(1.0, abs=1e-9)

    metadata = RunMetadata.from_json(path=str(out) + ".meta.json")
    assert metadata.method == "analytic"
    assert metadata.run.params.threshold_b == 4
    assert metadata.tolerances["dual_path"] == 1e-6


def test_pmf_uses_seventeen_significant_digits(tmp_path, reference_config):
    out = tmp_path / "pmf.csv"
    _run("pmf", reference_config, "--side", "B", "--max-k", "10", "--out", str(out))
    masses = [line.split(",")[1] for line in out.read_text().splitlines()[1:]]
    digits = max(len(m.replace(".", "").replace("-", "").split("e")[0].lstrip("0")) for m in masses)
    assert digits <= 17
    assert all(float(m) >= 0 for m in masses)


def test_pmf_empirical_matches_analytic(tmp_path):
    config = _write_config(tmp_path, M=2, N=2)
    analytic, empirical = tmp_path / "a.csv", tmp_path / "e.csv"
    main(["pmf", "--config", str(config), "--side", "B", "--out", str(analytic)])
    main(
        ["pmf", "--config", str(config), "--side", "B", "--method", "empirical",
         "--paths", "200000", "--seed", "3", "--out", str(empirical)]
    )
    exact = pl.read_csv(analytic)
    observed = pl.read_csv(empirical)
    assert observed.columns == ["k", "mass", "stderr"]
    joined = exact.join(observed, on="k", how="left").fill_null(0.0)
    tv = 0.5 * float(np.abs(joined["mass"] - joined["mass_right"]).sum())
    assert tv <= 2.5 / np.sqrt(200_000)


def test_pdf_normalisation(tmp_path, reference_config):
    out = tmp_path / "pdf.csv"
    code = _run("pdf", reference_config, "--t-max", "10", "--t-step", "0.01", "--out", str(out))
    assert code == 0
    frame = pl.read_csv(out)
    assert frame.columns == ["t", "density"]
    metadata = RunMetadata.from_json(path=str(out) + ".meta.json")
    assert metadata.method == "exact"
    total = np.trapezoid(frame["density"].to_numpy(), frame["t"].to_numpy())
    tail = 1 - tau_cdf(GameParams.from_json(path=str(reference_config)), 10.0)
    assert 0.999 <= total + tail <= 1.001


def test_pdf_numeric_for_deterministic_law(capsys, deterministic_config):
    assert main(["pdf", "--config", str(deterministic_config), "--method", "numeric"]) == 3
    assert "NoDensity" in capsys.readouterr().err


def test_pdf_to_stdout(capsys, reference_config):
    assert main(["pdf", "--config", str(reference_config), "--t-max", "1", "--t-step", "0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,density"
    assert len(lines) == 4


# simulate, validate, rerun


def test_simulate_is_byte_identical(tmp_path, reference_config):
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    for out in (first, second):
        code = main(
            ["simulate", "--config", str(reference_config), "--paths", "1000", "--seed", "42",
             "--query", "0.5", "0.5", "0.5", "--out", str(out)]
        )
        assert code == 0
    assert first.read_bytes() == second.read_bytes()
    summary = json.loads(first.read_text())
    assert summary["config"]["paths"] == 1000
    assert len(summary["functional_estimates"]) == 1


def test_rerun_from_metadata(tmp_path, reference_config):
    out = tmp_path / "pmf.csv"
    main(
        ["pmf", "--config", str(reference_config), "--method", "empirical", "--paths", "5000",
         "--seed", "9", "--out", str(out)]
    )
    again = tmp_path / "again.csv"
    assert rerun_from_metadata(str(out) + ".meta.json", out=str(again)) == 0
    assert out.read_bytes() == again.read_bytes()


def test_validate_detects_corrupted_psi(capsys, monkeypatch, reference_config):
    from delayedgame.transforms import main as transforms_main

    original = transforms_main._psi
    monkeypatch.setattr(transforms_main, "_psi", lambda a, b, c, m, n: -original(a, b, c, m, n))
    code = main(["validate", "--config", str(reference_config), "--paths", "2000", "--seed", "1"])
    assert code == 1
    assert "phi_dual_path" in capsys.readouterr().err


@pytest.mark.slow
def test_validate_reference_config(reference_config):
    assert _run("validate", reference_config, "--paths", "1000000", "--seed", "7") == 0
