import json
import logging

import pytest
from pydantic import ValidationError

from pauli_lab.common.utils import LOG_LEVEL_ENV, parse_count, setup_logging, split_counts, worker_count
from pauli_lab.models.run_config import BUDGET_ENV, SEED_ENV, RunConfig, RunDefaults, load_defaults


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    monkeypatch.delenv(BUDGET_ENV, raising=False)


def test_packaged_defaults():
    defaults = load_defaults()
    assert defaults.seed == 12648430
    assert defaults.budget == 10_000_000
    assert defaults.format == "json"
    assert defaults.hitting.degree == 8
    assert defaults.hitting.mu == 0.125


def test_missing_file_falls_back(tmp_path):
    defaults = load_defaults(str(tmp_path / "absent.json"))
    assert defaults == RunDefaults()


def test_bad_json_falls_back(tmp_path):
    path = tmp_path / "defaults.json"
    path.write_text("{ not json")
    assert load_defaults(str(path)) == RunDefaults()


def test_unknown_key_falls_back(tmp_path):
    path = tmp_path / "defaults.json"
    path.write_text(json.dumps({"seed": 5, "colour": "blue"}))
    assert load_defaults(str(path)).seed == RunDefaults().seed


def test_file_values_are_used(tmp_path):
    path = tmp_path / "defaults.json"
    path.write_text(json.dumps({"seed": 5, "samples": 1000}))
    defaults = load_defaults(str(path))
    assert (defaults.seed, defaults.samples) == (5, 1000)


def test_env_overrides(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "42")
    monkeypatch.setenv(BUDGET_ENV, "2e6")
    defaults = load_defaults()
    assert defaults.seed == 42
    assert defaults.budget == 2_000_000


def test_bad_env_is_ignored(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "lots")
    assert load_defaults().seed == 12648430


def test_run_config_is_strict():
    cfg = RunConfig(command="count", n=2, k=1, seed=1, budget=10)
    assert cfg.samples == 100_000
    with pytest.raises(ValidationError):
        RunConfig(command="count", seed=1, budget=10, colour="blue")
    with pytest.raises(ValidationError):
        RunConfig(command="count", seed=1, budget=10, format="xml")


@pytest.mark.parametrize("text,expected", [("12", 12), ("2e9", 2_000_000_000), ("1e5", 100_000)])
def test_parse_count(text, expected):
    assert parse_count(text) == expected


def test_parse_count_rejects_fractions():
    with pytest.raises(ValueError):
        parse_count("2.5")


def test_split_counts():
    assert split_counts(10, 4) == [3, 3, 2, 2]
    assert sum(split_counts(100_001)) == 100_001


def test_worker_count(monkeypatch):
    monkeypatch.setenv("PAULI_LAB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("PAULI_LAB_THREADS", "many")
    assert worker_count() >= 1


@pytest.mark.parametrize("env,expected", [("debug", logging.DEBUG), ("WARNING", logging.WARNING), ("loud", logging.INFO)])
def test_setup_logging_reads_level(monkeypatch, env, expected):
    monkeypatch.setenv(LOG_LEVEL_ENV, env)
    logger = setup_logging(f"pauli_lab.tests.level_{env}")
    assert logger.level == expected
    assert not logger.propagate


def test_setup_logging_adds_one_handler(monkeypatch):
    monkeypatch.delenv(LOG_LEVEL_ENV, raising=False)
    name = "pauli_lab.tests.handlers"
    first = setup_logging(name)
    assert setup_logging(name, level="error") is first
    assert len(first.handlers) == 1
    assert first.level == logging.ERROR
    assert "%(levelname)-7s" in first.handlers[0].formatter._fmt
