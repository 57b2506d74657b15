"""
Scenario description, random scenario generation and result files.

A scenario is stored as a JSON document::

    {
      "schema_version": 1,
      "user_position": [0, 0, 0],
      "eaves_true": [[x, y, 0], ...],
      "eaves_estimated": [[x, y, 0], ...],
      "area_half_extent": 500.0,
      "z_min": 80.0, "z_max": 300.0,
      "power_cap": 1.0,
      "noise_user": 1e-12, "noise_eaves": 1e-12,
      "bandwidth": 1e6,
      "jitter": {"sigma_info": 0.0, "sigma_jam": 0.0,
                 "sample_count": 512, "report_sample_count": 8192},
      "seeds": {"scenario": 0, "optimizer": 0, "mc": 0}
    }

All quantities are SI (meters, watts, hertz, radians). Unknown or missing
fields are rejected with a :class:`~jamplan.errors.ScenarioError` naming the
field.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .channel import RadioParams
from .errors import InvalidArgumentError, ScenarioError
from .jitter import JitterModel

SCHEMA_VERSION = 1

SWEEP_HEADER = [
    "p_max_watts",
    "method",
    "expected_secrecy_bps",
    "std_err_bps",
    "p_info",
    "p_jam",
    "seed",
]

_U64 = 2**64 - 1


@dataclass(frozen=True)
class JitterSpec:
    sigma_info: float = 0.0
    sigma_jam: float = 0.0
    sample_count: int = 512
    report_sample_count: int = 8192


@dataclass(frozen=True)
class Seeds:
    scenario: int = 0
    optimizer: int = 0
    mc: int = 0


@dataclass(frozen=True, eq=False)
class Scenario:
    user_position: np.ndarray
    eaves_true: np.ndarray
    eaves_estimated: np.ndarray
    area_half_extent: float = 500.0
    z_min: float = 80.0
    z_max: float = 300.0
    power_cap: float = 1.0
    noise_user: float = 1e-12
    noise_eaves: float = 1e-12
    bandwidth: float = 1e6
    jitter: JitterSpec = field(default_factory=JitterSpec)
    seeds: Seeds = field(default_factory=Seeds)

    def __post_init__(self):
        user = np.asarray(self.user_position, dtype=float).reshape(3)
        true = np.asarray(self.eaves_true, dtype=float).reshape(-1, 3)
        est = np.asarray(self.eaves_estimated, dtype=float).reshape(-1, 3)
        for arr in (user, true, est):
            arr.setflags(write=False)
        object.__setattr__(self, "user_position", user)
        object.__setattr__(self, "eaves_true", true)
        object.__setattr__(self, "eaves_estimated", est)
        self.validate()

    def validate(self) -> None:
        def bad(msg, name):
            raise ScenarioError(f"{name}: {msg}", field=name)

        for name, arr in (
            ("user_position", self.user_position),
            ("eaves_true", self.eaves_true),
            ("eaves_estimated", self.eaves_estimated),
        ):
            if not np.all(np.isfinite(arr)):
                bad("non-finite coordinate", name)
            if np.any(arr.reshape(-1, 3)[:, 2] != 0.0):
                bad("ground nodes must have z = 0", name)
        if len(self.eaves_true) < 1:
            bad("at least one eavesdropper is required", "eaves_true")
        if self.eaves_true.shape != self.eaves_estimated.shape:
            bad("must have the same length as eaves_true", "eaves_estimated")
        scalars = {
            "area_half_extent": self.area_half_extent,
            "z_min": self.z_min,
            "z_max": self.z_max,
            "power_cap": self.power_cap,
            "noise_user": self.noise_user,
            "noise_eaves": self.noise_eaves,
            "bandwidth": self.bandwidth,
        }
        for name, value in scalars.items():
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                bad(f"must be a positive finite number, got {value!r}", name)
        if self.z_min >= self.z_max:
            bad("z_min must be below z_max", "z_max")
        j = self.jitter
        if j.sigma_info < 0 or j.sigma_jam < 0:
            bad("jitter standard deviations must be >= 0", "jitter")
        if j.sample_count < 1 or j.report_sample_count < 1:
            bad("sample counts must be >= 1", "jitter")

    # -- derived views -----------------------------------------------------

    @property
    def n_eaves(self) -> int:
        return len(self.eaves_true)

    def node_positions(self, eaves: str = "estimated") -> np.ndarray:
        """User followed by the eavesdroppers, ``(N + 1, 3)``."""
        if eaves == "estimated":
            others = self.eaves_estimated
        elif eaves == "true":
            others = self.eaves_true
        else:
            raise InvalidArgumentError(f"eaves must be 'estimated' or 'true', not {eaves!r}")
        return np.vstack([self.user_position, others])

    def radio(self, power_info: float, power_jam: float) -> RadioParams:
        noise = (self.noise_user,) + (self.noise_eaves,) * self.n_eaves
        return RadioParams(power_info, power_jam, noise, self.bandwidth, self.power_cap)

    def position_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Box for a drone position: the area around the user, altitude limits."""
        a = self.area_half_extent
        ux, uy, _ = self.user_position
        return (
            np.array([ux - a, uy - a, self.z_min]),
            np.array([ux + a, uy + a, self.z_max]),
        )

    def jitter_model(self, stream: int, sample_count: int | None = None) -> JitterModel:
        n = self.jitter.sample_count if sample_count is None else sample_count
        return JitterModel(self.jitter.sigma_info, self.jitter.sigma_jam, n, self.seeds.mc, stream)

    def with_power_cap(self, power_cap: float) -> "Scenario":
        return replace(self, power_cap=float(power_cap))

    def translated(self, offset) -> "Scenario":
        """Shift every ground node horizontally by ``offset`` (z part ignored)."""
        d = np.array([float(offset[0]), float(offset[1]), 0.0])
        return replace(
            self,
            user_position=self.user_position + d,
            eaves_true=self.eaves_true + d,
            eaves_estimated=self.eaves_estimated + d,
        )

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return scenario_to_dict(self) == scenario_to_dict(other)

    def digest(self) -> str:
        return hashlib.sha256(canonical_json(scenario_to_dict(self)).encode()).hexdigest()


# ---------------------------------------------------------------------------
# generation


def generate_random_scenario(
    n_eaves: int,
    seed: int,
    estimate_noise_std: float = 0.0,
    *,
    area_half_extent: float = 500.0,
    jitter_std: float = 0.0,
    power_cap: float = 1.0,
    sample_count: int = 512,
    report_sample_count: int = 8192,
) -> Scenario:
    """User at the origin, eavesdroppers uniform over the square area.

    Estimated positions are the true ones plus isotropic horizontal Gaussian
    error of std ``estimate_noise_std`` meters. Radio defaults: noise 1e-12 W
    at every node, 1 MHz bandwidth, altitudes 80-300 m.
    """
    if n_eaves < 1:
        raise InvalidArgumentError("n_eaves must be >= 1")
    if estimate_noise_std < 0:
        raise InvalidArgumentError("estimate_noise_std must be >= 0")
    rng = np.random.default_rng([int(seed) & _U64, 200])
    true = np.zeros((n_eaves, 3))
    true[:, :2] = rng.uniform(-area_half_extent, area_half_extent, size=(n_eaves, 2))
    est = true.copy()
    if estimate_noise_std > 0:
        est[:, :2] += rng.normal(0.0, estimate_noise_std, size=(n_eaves, 2))
    return Scenario(
        user_position=np.zeros(3),
        eaves_true=true,
        eaves_estimated=est,
        area_half_extent=area_half_extent,
        power_cap=power_cap,
        jitter=JitterSpec(jitter_std, jitter_std, sample_count, report_sample_count),
        seeds=Seeds(seed, seed, seed),
    )


# ---------------------------------------------------------------------------
# serialization


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "user_position": [float(v) for v in s.user_position],
        "eaves_true": [[float(v) for v in row] for row in s.eaves_true],
        "eaves_estimated": [[float(v) for v in row] for row in s.eaves_estimated],
        "area_half_extent": float(s.area_half_extent),
        "z_min": float(s.z_min),
        "z_max": float(s.z_max),
        "power_cap": float(s.power_cap),
        "noise_user": float(s.noise_user),
        "noise_eaves": float(s.noise_eaves),
        "bandwidth": float(s.bandwidth),
        "jitter": asdict(s.jitter),
        "seeds": asdict(s.seeds),
    }


_TOP_FIELDS = [
    "schema_version",
    "user_position",
    "eaves_true",
    "eaves_estimated",
    "area_half_extent",
    "z_min",
    "z_max",
    "power_cap",
    "noise_user",
    "noise_eaves",
    "bandwidth",
    "jitter",
    "seeds",
]


def _check_keys(doc: dict, expected: Iterable[str], where: str) -> None:
    expected = list(expected)
    for key in doc:
        if key not in expected:
            name = f"{where}.{key}" if where else key
            raise ScenarioError(f"unknown field {name!r}", field=name)
    for key in expected:
        if key not in doc:
            name = f"{where}.{key}" if where else key
            raise ScenarioError(f"missing field {name!r}", field=name)


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{name} must be a number, got {value!r}", field=name)
    return float(value)


def _integer(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{name} must be an integer, got {value!r}", field=name)
    return value


def _points(value, name: str) -> np.ndarray:
    if not isinstance(value, list) or not all(
        isinstance(p, list) and len(p) == 3 for p in value
    ):
        raise ScenarioError(f"{name} must be a list of [x, y, z] triples", field=name)
    return np.array([[_number(c, name) for c in p] for p in value], dtype=float).reshape(-1, 3)


def scenario_from_dict(doc: Any) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    _check_keys(doc, _TOP_FIELDS, "")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ScenarioError(
            f"unsupported schema_version {doc['schema_version']!r}", field="schema_version"
        )
    user = doc["user_position"]
    if not isinstance(user, list) or len(user) != 3:
        raise ScenarioError("user_position must be [x, y, z]", field="user_position")
    jit = doc["jitter"]
    if not isinstance(jit, dict):
        raise ScenarioError("jitter must be an object", field="jitter")
    _check_keys(jit, [f.name for f in fields(JitterSpec)], "jitter")
    seeds = doc["seeds"]
    if not isinstance(seeds, dict):
        raise ScenarioError("seeds must be an object", field="seeds")
    _check_keys(seeds, [f.name for f in fields(Seeds)], "seeds")
    return Scenario(
        user_position=np.array([_number(c, "user_position") for c in user]),
        eaves_true=_points(doc["eaves_true"], "eaves_true"),
        eaves_estimated=_points(doc["eaves_estimated"], "eaves_estimated"),
        area_half_extent=_number(doc["area_half_extent"], "area_half_extent"),
        z_min=_number(doc["z_min"], "z_min"),
        z_max=_number(doc["z_max"], "z_max"),
        power_cap=_number(doc["power_cap"], "power_cap"),
        noise_user=_number(doc["noise_user"], "noise_user"),
        noise_eaves=_number(doc["noise_eaves"], "noise_eaves"),
        bandwidth=_number(doc["bandwidth"], "bandwidth"),
        jitter=JitterSpec(
            sigma_info=_number(jit["sigma_info"], "jitter.sigma_info"),
            sigma_jam=_number(jit["sigma_jam"], "jitter.sigma_jam"),
            sample_count=_integer(jit["sample_count"], "jitter.sample_count"),
            report_sample_count=_integer(jit["report_sample_count"], "jitter.report_sample_count"),
        ),
        seeds=Seeds(**{k: _integer(seeds[k], f"seeds.{k}") for k in ("scenario", "optimizer", "mc")}),
    )


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
    return scenario_from_dict(doc)


def save_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")


def canonical_json(obj: Any) -> str:
    """Key-sorted compact JSON with reals rendered at 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("cannot canonicalize a non-finite real")
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{canonical_json(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    raise TypeError(f"cannot canonicalize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# run records


@dataclass
class RunRecord:
    method: str
    scenario_digest: str
    info_position: list[float]
    info_orientation: list[float]
    jam_position: list[float]
    jam_orientation: list[float]
    power_info: float
    power_jam: float
    power_cap: float
    expected_secrecy_bps: float
    std_err_bps: float
    line_nu: float | None
    iterations: int
    trace: list[float]
    converged: bool
    evaluations: int
    seeds: dict[str, int]
    wall_clock_seconds: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["schema_version"] = SCHEMA_VERSION
        return d

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "RunRecord":
        names = [f.name for f in fields(cls)]
        _check_keys(doc, names + ["schema_version"], "")
        return cls(**{k: doc[k] for k in names})


def save_record(record: RunRecord, path) -> None:
    Path(path).write_text(json.dumps(record.to_dict(), indent=2, sort_keys=True) + "\n")


def load_record(path) -> RunRecord:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read record {path}: {exc}") from exc
    return RunRecord.from_dict(doc)


def write_sweep_csv(rows: Iterable[dict[str, Any]], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_HEADER, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in SWEEP_HEADER})
