"""
Tests for config
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from erasure_rate_kit.config import (
    DEFAULT_DENSE_CAP,
    CliConfig,
    get_dense_cap,
    get_tolerance_scale,
    load_config_file,
    resolve_config,
)
from erasure_rate_kit.exceptions import ParameterError


def test_dense_cap_default():
    assert get_dense_cap() == DEFAULT_DENSE_CAP


def test_dense_cap_from_env(monkeypatch):
    monkeypatch.setenv("ERK_DENSE_CAP", "64")

    assert get_dense_cap() == 64


@pytest.mark.parametrize("raw", ["lots", "0", "-3"])
def test_dense_cap_invalid(monkeypatch, raw):
    monkeypatch.setenv("ERK_DENSE_CAP", raw)

    with pytest.raises(ParameterError, match="ERK_DENSE_CAP"):
        get_dense_cap()


def test_tolerance_scale(monkeypatch):
    assert get_tolerance_scale() == 1.0
    monkeypatch.setenv("ERK_VALIDATE_TOLERANCE_SCALE", "2.5")
    assert get_tolerance_scale() == 2.5
    monkeypatch.setenv("ERK_VALIDATE_TOLERANCE_SCALE", "x")
    with pytest.raises(ParameterError):
        get_tolerance_scale()


def test_load_flat_file(tmp_path):
    path = tmp_path / "erk.toml"
    path.write_text('bits = true\nseed = 7\nout_dir = "figs"\n')

    assert load_config_file(path) == {"bits": True, "seed": 7, "out_dir": "figs"}


def test_load_erk_table(tmp_path):
    path = tmp_path / "erk.toml"
    path.write_text("[erk]\nmax_terms = 400\n")

    assert load_config_file(path) == {"max_terms": 400}


def test_invalid_toml(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("bits = = true\n")

    with pytest.raises(ParameterError, match="invalid config file"):
        load_config_file(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_config_file(tmp_path / "absent.toml")


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "erk.toml"
    path.write_text("colour = 'blue'\n")

    with pytest.raises(ValidationError):
        resolve_config(path, {})


def test_precedence(tmp_path):
    """flags > file > defaults; None flags do not override."""
    path = tmp_path / "erk.toml"
    path.write_text("bits = true\nseed = 7\ntrials = 12\n")

    cfg = resolve_config(path, {"seed": 9, "bits": None, "workers": None})

    assert cfg.bits is True
    assert cfg.seed == 9
    assert cfg.trials == 12
    assert cfg.workers == 1


def test_defaults_without_file():
    cfg = resolve_config(None, {})

    assert cfg == CliConfig()
    assert cfg.out_dir == Path(".")
    assert cfg.series().max_terms == 200
    assert cfg.mc().block_size == 200
