from pathlib import Path

import pytest

from core.cfg import FIGUREN, Kalibriert, MarkovAus, NumerikCfg, RunConfig, aus_toml, figur_config, lade_toml, standard_ausgabe
from core.cfg.magkon_config import kanal_aus_toml, lese_toml
from core.environments import BandPowerLaw, Markovian, Ohmic
from core.errors import ConfigError


def test_figure_defaults():
    transfer = figur_config("transfer")
    assert transfer.figure == 7
    assert len(transfer.szenarien) == 4
    assert figur_config("eigs", 4).numerik.exzitonen == 2
    assert FIGUREN[6].kappas == (0.0, 1e-3)
    for nummer, basis in FIGUREN.items():
        assert basis.figure == nummer
        basis.validiere()


@pytest.mark.parametrize("experiment, figur", [("eigs", 7), ("lindblad", 2), ("transfer", 5)])
def test_figure_mismatch(experiment, figur):
    with pytest.raises(ConfigError):
        figur_config(experiment, figur)


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("MAGKON_OUT", str(tmp_path))
    assert standard_ausgabe() == tmp_path
    assert figur_config("eigs").output_dir == tmp_path
    monkeypatch.delenv("MAGKON_OUT")
    assert standard_ausgabe() == Path("magkon_out")


def test_system_overrides():
    cfg = aus_toml({"lauf": {"experiment": "eigs", "figur": 4}, "system": {"g": 0.05, "K": 1e-3}})
    assert cfg.figure == 4
    assert cfg.params.g == 0.05
    assert cfg.params.K == 1e-3
    assert cfg.params.delta_a == pytest.approx(1.0)
    assert cfg.params.delta_m == pytest.approx(1.7)


def test_numerik_and_decay_overrides():
    daten = {
        "lauf": {"experiment": "lindblad", "ausgabe": "lauf_a"},
        "zerfall": {"kappas": [0, 0.002], "phonon_anteil": 0.1},
        "numerik": {"dims": [2, 3, 2], "perioden": 1},
    }
    cfg = aus_toml(daten)
    assert cfg.numerik.dims == (2, 3, 2)
    assert cfg.numerik.perioden == 1
    assert cfg.kappas == (0.0, 0.002)
    assert cfg.phonon_anteil == 0.1
    assert cfg.output_dir == Path("lauf_a")


@pytest.mark.parametrize(
    "daten",
    [
        {"lauf": {"experiment": "eigs"}, "system": {"x": 1.0}},
        {"lauf": {"experiment": "eigs"}, "numerik": {"schritte": 3}},
        {"lauf": {"experiment": "eigs"}, "extra": {}},
        {"lauf": {"experiment": "eigs", "modus": "schnell"}},
        {"lauf": {}},
    ],
)
def test_unknown_or_missing_keys(daten):
    with pytest.raises(ConfigError):
        aus_toml(daten)


def test_basis_experiment_conflict():
    with pytest.raises(ConfigError):
        aus_toml({"lauf": {"experiment": "lindblad"}}, figur_config("eigs"))


def test_partial_spectra_rejected():
    daten = {"lauf": {"experiment": "transfer"}, "spektren": {"photon": {"variante": "ohmic", "eta": 1e-4}}}
    with pytest.raises(ConfigError):
        aus_toml(daten)


def test_configured_spectra_replace_scenarios():
    daten = {
        "lauf": {"experiment": "transfer"},
        "spektren": {
            "photon": {"variante": "ohmic", "eta": 1e-4, "omega0": 5.0},
            "phonon": {"variante": "markovian", "kappa": 0.0},
        },
    }
    cfg = aus_toml(daten)
    assert len(cfg.szenarien) == 1
    assert cfg.szenarien[0].photon == Ohmic(eta=1e-4, omega0=5.0)
    assert cfg.szenarien[0].phonon == Markovian(0.0)


def test_channel_variants():
    assert kanal_aus_toml("p", {"variante": "BandPowerLaw", "C": 1e-4, "k": -0.5}) == BandPowerLaw(C=1e-4, k=-0.5)
    assert kanal_aus_toml("p", {"variante": "markovian", "kappa": 1e-3}) == Markovian(1e-3)
    assert kanal_aus_toml("p", {"variante": "markovian", "aus": "ohmic", "eta": 1e-4, "omega0": 5.0}) == MarkovAus(
        Ohmic(eta=1e-4, omega0=5.0)
    )
    assert kanal_aus_toml("p", {"variante": "kalibriert"}) == Kalibriert()


@pytest.mark.parametrize(
    "daten",
    [
        {"variante": "lorentz"},
        {"variante": "ohmic", "kappa": 1e-3},
        {"variante": "ohmic", "eta": 1e-4, "omega0": 0.0},
        {"variante": "markovian", "kappa": 1e-3, "eta": 1e-4},
        {"variante": "markovian", "aus": "kalibriert"},
        {"variante": "markovian", "kappa": -1.0},
    ],
)
def test_channel_errors(daten):
    with pytest.raises(ConfigError):
        kanal_aus_toml("spektren.photon", daten)


def test_toml_file(tmp_path):
    datei = tmp_path / "lauf.toml"
    datei.write_text('[lauf]\nexperiment = "coupling-scan"\n\n[numerik]\nkopplungen = [0.05]\n', encoding="utf-8")
    cfg = lade_toml(datei)
    assert cfg.experiment == "coupling-scan"
    assert cfg.numerik.kopplungen == (0.05,)


def test_toml_read_errors(tmp_path):
    kaputt = tmp_path / "kaputt.toml"
    kaputt.write_text("[lauf\nexperiment = ", encoding="utf-8")
    with pytest.raises(ConfigError):
        lese_toml(kaputt)
    with pytest.raises(ConfigError):
        lese_toml(tmp_path / "fehlt.toml")


def test_validation_collects_errors():
    with pytest.raises(ConfigError, match="Szenario"):
        RunConfig("transfer").validiere()
    with pytest.raises(ConfigError, match="zu klein"):
        RunConfig("eigs", numerik=NumerikCfg(dims=(2, 4, 2), exzitonen=2)).validiere()
    RunConfig("eigs").validiere()
