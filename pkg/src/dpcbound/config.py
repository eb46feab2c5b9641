"""Scenario files: JSON documents mapped onto :class:`ChannelScenario`.

Schema (see README for a full example)::

    {
      "gain":         {"atoms": [{"eta": 1.0, "p": 1.0}, ...]},
      "interference": <family>,
      "noise":        {"c_x": 0.0, "c_z": 0.0, "innovation": <family>},
      "power":        1.0,
      "domain":       "real" | "complex",
      "degenerate":   false,                                  (optional)
      "stats":        {"sigma_n2": ., "rho_xn": ., "rho_zn": .}, (optional)
      "lemma":        {"k": 4, "alpha_policy": "tied_to_beta",
                       "refine_grid": 21, "refine_span": 0.2},  (optional)
      "sweep":        {"axis": "rho_zn", "values": [0, 0.3]}   (optional)
    }

    <family> = {"kind": "gaussian"|"laplace"|"uniform", "mean": 0, "variance": 1}
             | {"kind": "gaussian_mixture", "weights": [..], "means": [..], "variances": [..]}
             | {"kind": "unbounded"}                            (interference only)

Structural problems raise :class:`ConfigError` naming the offending field
path (``gain.atoms[1].p``) or, for JSON syntax errors, the line and column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import DpcError
from .scenario import (
    FAMILY_KINDS,
    UNBOUNDED,
    ChannelScenario,
    GainDistribution,
    MarginalFamily,
    NoiseModel,
)

TOP_KEYS = {"gain", "interference", "noise", "power", "domain", "degenerate", "stats", "lemma", "sweep"}


class ConfigError(DpcError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class ScenarioFile:
    scenario: ChannelScenario
    lemma: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)


def _number(v: Any, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(path, f"expected a number, got {json.dumps(v)}")
    return float(v)


def _numbers(v: Any, path: str) -> tuple[float, ...]:
    if not isinstance(v, list):
        raise ConfigError(path, "expected a list of numbers")
    return tuple(_number(x, f"{path}[{i}]") for i, x in enumerate(v))


def _mapping(v: Any, path: str, allowed: set[str], required: set[str] = frozenset()) -> dict:
    if not isinstance(v, dict):
        raise ConfigError(path, "expected an object")
    for k in v:
        if k not in allowed:
            raise ConfigError(f"{path}.{k}" if path else k, f"unknown key (allowed: {', '.join(sorted(allowed))})")
    for k in sorted(required):
        if k not in v:
            raise ConfigError(f"{path}.{k}" if path else k, "missing required key")
    return v


def parse_family(v: Any, path: str) -> MarginalFamily:
    if not isinstance(v, dict) or "kind" not in v:
        raise ConfigError(path, "expected an object with a 'kind' key")
    kind = v["kind"]
    if kind == UNBOUNDED:
        _mapping(v, path, {"kind"})
        return MarginalFamily.unbounded()
    if kind == "gaussian_mixture":
        _mapping(v, path, {"kind", "weights", "means", "variances"}, {"weights", "means", "variances"})
        return MarginalFamily.gaussian_mixture(
            _numbers(v["weights"], f"{path}.weights"),
            _numbers(v["means"], f"{path}.means"),
            _numbers(v["variances"], f"{path}.variances"),
        )
    if kind not in FAMILY_KINDS:
        raise ConfigError(f"{path}.kind", f"unknown family {json.dumps(kind)}; "
                          f"expected one of {', '.join(FAMILY_KINDS + (UNBOUNDED,))}")
    _mapping(v, path, {"kind", "mean", "variance"})
    return MarginalFamily(kind, _number(v.get("mean", 0.0), f"{path}.mean"),
                          _number(v.get("variance", 1.0), f"{path}.variance"))


def parse_gain(v: Any, path: str = "gain") -> GainDistribution:
    _mapping(v, path, {"atoms"}, {"atoms"})
    atoms = v["atoms"]
    if not isinstance(atoms, list):
        raise ConfigError(f"{path}.atoms", "expected a list of atoms")
    out = []
    for i, a in enumerate(atoms):
        p = f"{path}.atoms[{i}]"
        if isinstance(a, list) and len(a) == 2:
            out.append((_number(a[0], f"{p}[0]"), _number(a[1], f"{p}[1]")))
        else:
            _mapping(a, p, {"eta", "p"}, {"eta", "p"})
            out.append((_number(a["eta"], f"{p}.eta"), _number(a["p"], f"{p}.p")))
    return GainDistribution(out)


def parse_scenario(doc: Any) -> ScenarioFile:
    _mapping(doc, "", TOP_KEYS, {"gain", "power"})
    gain = parse_gain(doc["gain"])
    interference = parse_family(doc.get("interference", {"kind": "gaussian"}), "interference")

    stats = None
    if "stats" in doc:
        st = _mapping(doc["stats"], "stats", {"sigma_n2", "rho_xn", "rho_zn"}, {"sigma_n2"})
        stats = (_number(st["sigma_n2"], "stats.sigma_n2"),
                 _number(st.get("rho_xn", 0.0), "stats.rho_xn"),
                 _number(st.get("rho_zn", 0.0), "stats.rho_zn"))

    if "noise" in doc:
        nz = _mapping(doc["noise"], "noise", {"c_x", "c_z", "innovation"}, {"innovation"})
        noise = NoiseModel(_number(nz.get("c_x", 0.0), "noise.c_x"),
                           _number(nz.get("c_z", 0.0), "noise.c_z"),
                           parse_family(nz["innovation"], "noise.innovation"))
    elif stats is not None:
        noise = NoiseModel()
    else:
        raise ConfigError("noise", "missing required key (or give a 'stats' block)")

    domain = doc.get("domain", "real")
    if domain not in ("real", "complex"):
        raise ConfigError("domain", f"expected \"real\" or \"complex\", got {json.dumps(domain)}")
    degenerate = doc.get("degenerate", False)
    if not isinstance(degenerate, bool):
        raise ConfigError("degenerate", "expected true or false")

    lemma = _mapping(doc.get("lemma", {}), "lemma", {"k", "alpha_policy", "refine_grid", "refine_span"})
    sweep = _mapping(doc.get("sweep", {}), "sweep", {"axis", "values"})
    if "values" in sweep and not isinstance(sweep["values"], list):
        raise ConfigError("sweep.values", "expected a list")

    scenario = ChannelScenario(
        gain=gain,
        interference=interference,
        noise=noise,
        power=_number(doc["power"], "power"),
        domain=domain,
        degenerate=degenerate,
        stats_override=stats,
    )
    return ScenarioFile(scenario, dict(lemma), dict(sweep))


def load_scenario(path) -> ScenarioFile:
    """Read and structurally check a scenario file (invariants are checked separately)."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return parse_scenario(doc)


def family_to_dict(f: MarginalFamily) -> dict:
    if f.kind == "gaussian_mixture":
        return {"kind": f.kind, "weights": list(f.weights), "means": list(f.means),
                "variances": list(f.variances)}
    if f.is_unbounded:
        return {"kind": UNBOUNDED}
    return {"kind": f.kind, "mean": f.mean, "variance": f.variance}


def scenario_to_dict(s: ChannelScenario) -> dict:
    doc = {
        "gain": {"atoms": [{"eta": e, "p": p} for e, p in s.gain.atoms]},
        "interference": family_to_dict(s.interference),
        "noise": {"c_x": s.noise.c_x, "c_z": s.noise.c_z,
                  "innovation": family_to_dict(s.noise.innovation)},
        "power": s.power,
        "domain": s.domain,
    }
    if s.degenerate:
        doc["degenerate"] = True
    if s.stats_override is not None:
        doc["stats"] = dict(zip(("sigma_n2", "rho_xn", "rho_zn"), s.stats_override))
    return doc
