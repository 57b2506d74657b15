import csv
import json

import numpy as np
import pytest

from jamplan.errors import ScenarioError
from jamplan.scenario import (
    SWEEP_HEADER,
    RunRecord,
    generate_random_scenario,
    load_record,
    load_scenario,
    save_record,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
    write_sweep_csv,
)

from conftest import make_scenario


def test_zero_estimate_noise_copies_true_positions():
    s = generate_random_scenario(4, 1)
    np.testing.assert_array_equal(s.eaves_true, s.eaves_estimated)


def test_estimate_noise_perturbs_only_horizontal():
    s = generate_random_scenario(4, 1, 50.0)
    assert not np.array_equal(s.eaves_true, s.eaves_estimated)
    np.testing.assert_array_equal(s.eaves_estimated[:, 2], 0.0)
    # true positions do not depend on the noise level
    np.testing.assert_array_equal(s.eaves_true, generate_random_scenario(4, 1).eaves_true)


def test_generation_is_deterministic():
    assert generate_random_scenario(3, 77, 10.0) == generate_random_scenario(3, 77, 10.0)
    assert generate_random_scenario(3, 77) != generate_random_scenario(3, 78)


def test_uniform_placement_statistics():
    pts = generate_random_scenario(10_000, 5).eaves_true[:, :2]
    assert pts.min() >= -500 and pts.max() <= 500
    tol = 4 * (1000 / np.sqrt(12)) / np.sqrt(10_000)
    assert np.all(np.abs(pts.mean(axis=0)) < tol)


def test_save_load_round_trip(tmp_path, two_eaves):
    path = tmp_path / "s.json"
    save_scenario(two_eaves, path)
    back = load_scenario(path)
    assert back == two_eaves
    assert back.digest() == two_eaves.digest()
    np.testing.assert_array_equal(back.eaves_true, two_eaves.eaves_true)


def test_missing_bandwidth_is_named(tmp_path, two_eaves):
    doc = scenario_to_dict(two_eaves)
    del doc["bandwidth"]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ScenarioError, match="bandwidth"):
        load_scenario(path)


def test_unknown_field_is_named(two_eaves):
    doc = scenario_to_dict(two_eaves)
    doc["colour"] = "red"
    with pytest.raises(ScenarioError, match="colour"):
        scenario_from_dict(doc)


def test_negative_z_min_rejected():
    with pytest.raises(ScenarioError, match="z_min"):
        make_scenario(z_min=-10.0)


@pytest.mark.parametrize(
    "kw, name",
    [
        (dict(z_min=300.0, z_max=100.0), "z_max"),
        (dict(bandwidth=0.0), "bandwidth"),
        (dict(power_cap=-1.0), "power_cap"),
        (dict(eaves=((1.0, 2.0, 3.0),)), "eaves_true"),
        (dict(user=(0.0, 0.0, 5.0)), "user_position"),
    ],
)
def test_validation_names_field(kw, name):
    with pytest.raises(ScenarioError) as err:
        make_scenario(**kw)
    assert err.value.field == name


def test_digest_is_stable_and_content_sensitive(two_eaves):
    assert two_eaves.digest() == generate_random_scenario(2, 11).digest()
    assert two_eaves.with_power_cap(0.5).digest() != two_eaves.digest()


def test_record_round_trip(tmp_path):
    rec = RunRecord("proposed", "abc", [0, 0, 100], [0, 0, 0], [1, 1, 100], [0, 0, 0],
                    0.5, 0.4, 1.0, 1e6, 0.0, 0.1, 2, [1.0, 1.0], True, 10,
                    {"scenario": 1, "optimizer": 1, "mc": 1}, 0.3)
    path = tmp_path / "r.json"
    save_record(rec, path)
    assert load_record(path) == rec


def test_sweep_csv_header(tmp_path):
    row = {k: 0 for k in SWEEP_HEADER}
    path = tmp_path / "s.csv"
    write_sweep_csv([row, row], path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == SWEEP_HEADER and len(rows) == 3
