import json

import pytest

from dpcbound.config import ConfigError, load_scenario, parse_scenario, scenario_to_dict
from dpcbound.errors import ValidationError
from dpcbound.scenario import validate

BASE = {
    "gain": {"atoms": [{"eta": 1.0, "p": 1.0}]},
    "interference": {"kind": "uniform", "mean": 0.5, "variance": 2.0},
    "noise": {"c_x": 0.3, "c_z": -0.1, "innovation": {"kind": "laplace", "mean": 0.0, "variance": 0.5}},
    "power": 1.5,
    "domain": "real",
}


def _with(**kw):
    doc = json.loads(json.dumps(BASE))
    doc.update(kw)
    return doc


def test_round_trip():
    sf = parse_scenario(BASE)
    assert scenario_to_dict(sf.scenario) == BASE
    assert parse_scenario(scenario_to_dict(sf.scenario)).scenario == sf.scenario


def test_round_trip_mixture_override_and_flags():
    doc = _with(domain="complex", degenerate=True,
                interference={"kind": "unbounded"},
                noise={"c_x": 0.0, "c_z": 0.0, "innovation": {
                    "kind": "gaussian_mixture", "weights": [0.3, 0.7], "means": [-1.0, 0.5],
                    "variances": [0.2, 0.4]}},
                stats={"sigma_n2": 0.0, "rho_xn": 0.0, "rho_zn": 0.0})
    s = parse_scenario(doc).scenario
    assert scenario_to_dict(s) == doc


def test_pair_atoms_accepted():
    s = parse_scenario(_with(gain={"atoms": [[0.5, 0.25], [2.0, 0.75]]})).scenario
    assert s.gain.atoms == ((0.5, 0.25), (2.0, 0.75))


@pytest.mark.parametrize("doc,path", [
    (_with(gain={"atoms": [{"eta": 1.0}]}), "gain.atoms[0].p"),
    (_with(gain={"atoms": [{"eta": 1.0, "p": "half"}]}), "gain.atoms[0].p"),
    (_with(power=True), "power"),
    (_with(domain="quaternion"), "domain"),
    (_with(degenerate="yes"), "degenerate"),
    (_with(interference={"kind": "cauchy"}), "interference.kind"),
    (_with(interference={"kind": "gaussian", "scale": 1}), "interference.scale"),
    (_with(noise={"innovation": {"kind": "gaussian_mixture", "weights": [1]}}), "noise.innovation.means"),
    (_with(bandwidth=3), "bandwidth"),
    (_with(lemma={"k": 4, "grid": 3}), "lemma.grid"),
    (_with(sweep={"axis": "rho_zn", "values": 0.3}), "sweep.values"),
])
def test_structural_errors_name_the_field(doc, path):
    with pytest.raises(ConfigError) as ei:
        parse_scenario(doc)
    assert ei.value.path == path


def test_missing_noise_without_stats():
    doc = _with()
    del doc["noise"]
    with pytest.raises(ConfigError, match="noise"):
        parse_scenario(doc)


def test_stats_block_alone_is_enough():
    doc = _with(stats={"sigma_n2": 1.0, "rho_zn": 0.4})
    del doc["noise"]
    assert parse_scenario(doc).scenario.stats_override == (1.0, 0.0, 0.4)


def test_invariants_are_separate_from_structure():
    sf = parse_scenario(_with(gain={"atoms": [{"eta": 1.0, "p": 0.6}, {"eta": 2.0, "p": 0.6}]}))
    with pytest.raises(ValidationError) as ei:
        validate(sf.scenario)
    assert "BadPmf" in ei.value.codes


def test_json_syntax_error_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "power": 1.0,\n  "gain": ]\n}\n')
    with pytest.raises(ConfigError, match=r"line 3, column 11"):
        load_scenario(p)


def test_load_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(_with(lemma={"k": 6}, sweep={"axis": "rho_xn", "values": [0, 0.1]})))
    sf = load_scenario(p)
    assert sf.lemma == {"k": 6}
    assert sf.sweep == {"axis": "rho_xn", "values": [0, 0.1]}
