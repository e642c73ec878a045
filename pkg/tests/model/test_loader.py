from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from src.model.loader import SystemFileError, load_system, parse_system, system_to_dict
from src.model.system import ContinuousSystem, DiscreteSystem, validate

REPO_ROOT = Path(__file__).resolve().parents[2]
SYSTEMS_DIR = REPO_ROOT / "data" / "systems"


def make_payload(**overrides) -> dict:
    payload = {
        "dt": 0.5,
        "A": [[0.9]],
        "G": [[1.0]],
        "C": [[1.0]],
        "H": [[1.0]],
        "Cm": [[1.0]],
        "Hm": [[1.0]],
        "Q": [[1.0]],
        "R": [[0.1]],
    }
    payload.update(overrides)
    return payload


def test_optional_matrices_default_to_zero() -> None:
    spec = parse_system(make_payload())
    system = spec.system

    assert isinstance(system, DiscreteSystem)
    assert system.dt == 0.5
    assert system.nu == 0
    assert system.B.shape == (1, 0)
    np.testing.assert_array_equal(system.N, np.zeros((1, 1)))
    assert validate(system) == []


def test_bare_numbers_are_one_by_one() -> None:
    spec = parse_system(make_payload(A=0.9, Q=2))

    assert spec.system.A.shape == (1, 1)
    assert spec.system.Q[0, 0] == 2.0


def test_input_width_is_implied_by_b() -> None:
    spec = parse_system(make_payload(B=[[1.0, 0.5]]))

    assert spec.system.nu == 2
    assert spec.system.D.shape == (1, 2)
    assert spec.system.Dm.shape == (1, 2)


def test_continuous_file_may_omit_dt() -> None:
    payload = make_payload(continuous=True)
    del payload["dt"]

    spec = parse_system(payload)

    assert spec.continuous
    assert spec.dt is None
    assert isinstance(spec.system, ContinuousSystem)


@pytest.mark.parametrize(
    "payload, fragment",
    [
        ({key: value for key, value in make_payload().items() if key != "Hm"}, "missing required keys: Hm"),
        ({key: value for key, value in make_payload().items() if key != "dt"}, "discrete system files"),
        (make_payload(dt=-1), "dt must be a positive number"),
        (make_payload(A=[[1.0, 2.0], [3.0]]), "rows have different lengths"),
        (make_payload(Q=[["one"]]), "non-numeric entry"),
        (make_payload(R=True), "boolean"),
        (make_payload(continuous="yes"), "continuous must be true or false"),
    ],
)
def test_malformed_payloads_are_rejected(payload: dict, fragment: str) -> None:
    with pytest.raises(SystemFileError, match=fragment):
        parse_system(payload)


def test_top_level_must_be_an_object() -> None:
    with pytest.raises(SystemFileError):
        parse_system([1, 2, 3])


def test_load_system_reports_json_position(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{"A": [[1.0]],\n  "G": oops}', encoding="utf-8")

    with pytest.raises(SystemFileError, match="line 2"):
        load_system(path)


def test_load_system_missing_file(tmp_path: Path) -> None:
    with pytest.raises(SystemFileError, match="cannot read"):
        load_system(tmp_path / "absent.json")


def test_system_file_round_trip(tmp_path: Path, system_factory) -> None:
    system = system_factory(11)
    path = tmp_path / "random.json"
    path.write_text(json.dumps(system_to_dict(system)), encoding="utf-8")

    loaded = load_system(path)

    assert loaded.source == path
    for name, matrix in system.matrices().items():
        np.testing.assert_array_equal(getattr(loaded.system, name), matrix)


@pytest.mark.parametrize("name", ["feedthrough_example.json", "correlated_noise.json"])
def test_bundled_system_files_are_valid(name: str) -> None:
    spec = load_system(SYSTEMS_DIR / name)

    assert validate(spec.system) == []
