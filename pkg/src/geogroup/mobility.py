"""Poisson deployments over a square venue and random-direction mobility.

A deployment draws a Poisson node count, places nodes uniformly, then walks
each node for ``history_len_T - 1`` steps so that every node carries a
position history of ``history_len_T`` samples (oldest first).
"""

from __future__ import annotations

import io
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np


@dataclass(frozen=True)
class Scenario:
    """Venue and mobility parameters for one simulated area.

    ``device_density`` is the FL-participating density (devices per m^2),
    i.e. population density already multiplied by ``app_popularity``.
    """

    name: str
    side_length: float
    device_density: float
    d_min: float
    d_max: float
    app_popularity: float = 0.4
    history_len_T: int = 10
    sample_interval: float = 1.0
    speed_range: tuple[float, float] = (0.5, 1.5)
    turn_prob: float = 0.2
    boundary: str = "reflect"

    def __post_init__(self):
        if not 0 < self.d_min < self.d_max:
            raise ValueError("scenario requires 0 < d_min < d_max")
        if self.d_max > self.side_length:
            raise ValueError("d_max must not exceed the side length")
        if self.device_density <= 0:
            raise ValueError("device density must be positive")
        if not 0 < self.app_popularity <= 1:
            raise ValueError("app popularity must lie in (0, 1]")
        if self.history_len_T < 1:
            raise ValueError("history length must be at least 1")
        if self.sample_interval < 0:
            raise ValueError("sample interval must be nonnegative")
        lo, hi = self.speed_range
        if not 0 < lo <= hi:
            raise ValueError("speed range must be positive and ordered")
        if not 0 <= self.turn_prob <= 1:
            raise ValueError("turn probability must lie in [0, 1]")
        if self.boundary not in ("reflect", "wrap"):
            raise ValueError(f"unknown boundary rule {self.boundary!r}")
        object.__setattr__(self, "speed_range", (float(lo), float(hi)))

    @property
    def expected_nodes(self) -> float:
        return self.device_density * self.side_length**2

    @property
    def center(self) -> tuple[float, float]:
        return (self.side_length / 2, self.side_length / 2)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["speed_range"] = list(self.speed_range)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown scenario keys: {sorted(extra)}")
        d = dict(d)
        if "speed_range" in d:
            d["speed_range"] = tuple(d["speed_range"])
        return cls(**d)


_PRESETS = {
    "dense": dict(side_length=100.0, device_density=4e-2, d_min=10.0, d_max=100.0),
    "moderate": dict(side_length=200.0, device_density=4e-3, d_min=32.0, d_max=200.0),
    "sparse": dict(side_length=1000.0, device_density=4e-4, d_min=100.0, d_max=1000.0),
}

PRESET_NAMES = tuple(_PRESETS)


def preset_scenario(name: str, **overrides) -> Scenario:
    try:
        base = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown scenario preset {name!r}; expected one of {PRESET_NAMES}") from None
    return Scenario(name=name, **{**base, **overrides})


@dataclass(frozen=True)
class NodeTrace:
    node_id: int
    positions: np.ndarray  # (T, 2), oldest first

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("positions must have shape (T, 2)")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    def __len__(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class Deployment:
    scenario: Scenario
    traces: tuple[NodeTrace, ...]
    rng_seed: int
    cluster_center: tuple[float, float] = field(default=None)

    def __post_init__(self):
        if self.cluster_center is None:
            object.__setattr__(self, "cluster_center", self.scenario.center)
        object.__setattr__(self, "traces", tuple(self.traces))

    @property
    def n(self) -> int:
        return len(self.traces)

    def positions(self) -> np.ndarray:
        """Stack all traces into an ``(N, T, 2)`` array."""
        if not self.traces:
            return np.empty((0, self.scenario.history_len_T, 2))
        return np.stack([t.positions for t in self.traces])


def distance(p, q) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def _fold(coord: np.ndarray, side: float) -> tuple[np.ndarray, np.ndarray]:
    """Specular reflection into [0, side]; returns folded coords and a flip mask."""
    y = np.mod(coord, 2 * side)
    flip = y > side
    return np.where(flip, 2 * side - y, y), flip


def step_mobility(positions, headings, speeds, scenario: Scenario, rng: np.random.Generator):
    """Advance every node by one sample interval.

    Each node first re-draws its heading with probability ``turn_prob``, then
    moves ``speed * sample_interval`` along it. Under ``boundary="reflect"``
    wall hits fold the path back inside and mirror the heading component, so
    the travelled length is unchanged. Works on ``(N, 2)`` positions or a
    single ``(2,)`` position.

    Returns ``(new_positions, new_headings)``.
    """
    pos = np.asarray(positions, dtype=float)
    single = pos.ndim == 1
    pos = np.atleast_2d(pos)
    heading = np.atleast_1d(np.asarray(headings, dtype=float)).copy()
    speed = np.broadcast_to(np.asarray(speeds, dtype=float), heading.shape)
    if scenario.turn_prob > 0:
        turn = rng.random(heading.shape) < scenario.turn_prob
        fresh = rng.uniform(0.0, 2 * math.pi, heading.shape)
        heading = np.where(turn, fresh, heading)
    step = speed * scenario.sample_interval
    raw = pos + np.stack([step * np.cos(heading), step * np.sin(heading)], axis=-1)
    side = scenario.side_length
    if scenario.boundary == "wrap":
        new = np.mod(raw, side)
    else:
        x, fx = _fold(raw[:, 0], side)
        y, fy = _fold(raw[:, 1], side)
        new = np.stack([x, y], axis=-1)
        c, s = np.cos(heading), np.sin(heading)
        heading = np.mod(np.arctan2(np.where(fy, -s, s), np.where(fx, -c, c)), 2 * math.pi)
    if single:
        return new[0], heading[0]
    return new, heading


def generate_deployment(scenario: Scenario, seed: int) -> Deployment:
    """Realize a homogeneous Poisson deployment and its position histories.

    Raises ``ValueError("empty deployment")`` when the Poisson draw is zero;
    callers are expected to move on to another seed.
    """
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    n = int(rng.poisson(scenario.expected_nodes))
    if n == 0:
        raise ValueError("empty deployment")
    side = scenario.side_length
    T = scenario.history_len_T
    pos = rng.uniform(0.0, side, size=(n, 2))
    heading = rng.uniform(0.0, 2 * math.pi, size=n)
    speed = rng.uniform(*scenario.speed_range, size=n)
    hist = np.empty((n, T, 2))
    hist[:, 0] = pos
    for t in range(1, T):
        pos, heading = step_mobility(pos, heading, speed, scenario, rng)
        hist[:, t] = pos
    traces = tuple(NodeTrace(i, hist[i]) for i in range(n))
    return Deployment(scenario=scenario, traces=traces, rng_seed=int(seed))


# -- text fixtures -----------------------------------------------------------

def dump_deployment(dep: Deployment) -> str:
    """Serialize as a ``key=value`` scenario block followed by node rows."""
    out = io.StringIO()
    out.write("[scenario]\n")
    for key, value in dep.scenario.to_dict().items():
        if key == "speed_range":
            value = f"{value[0]!r},{value[1]!r}"
        out.write(f"{key}={value}\n")
    out.write("[deployment]\n")
    out.write(f"rng_seed={dep.rng_seed}\n")
    cx, cy = dep.cluster_center
    out.write(f"cluster_center={cx:.6f},{cy:.6f}\n")
    out.write("[nodes]\n")
    out.write("node_id,t,x,y\n")
    for tr in dep.traces:
        for t, (x, y) in enumerate(tr.positions):
            out.write(f"{tr.node_id},{t},{x:.6f},{y:.6f}\n")
    return out.getvalue()


_SCENARIO_TYPES = {f.name: f.type for f in fields(Scenario)}


def _parse_scenario_value(key: str, raw: str):
    if key not in _SCENARIO_TYPES:
        raise ValueError(f"unknown scenario key {key!r}")
    if key == "name" or key == "boundary":
        return raw
    if key == "speed_range":
        lo, hi = raw.split(",")
        return (float(lo), float(hi))
    if key == "history_len_T":
        return int(raw)
    return float(raw)


def load_deployment(text: str) -> Deployment:
    section = None
    scen: dict = {}
    meta: dict = {}
    rows: dict[int, list[tuple[int, float, float]]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            continue
        if section == "scenario":
            key, _, raw = line.partition("=")
            scen[key] = _parse_scenario_value(key, raw)
        elif section == "deployment":
            key, _, raw = line.partition("=")
            meta[key] = raw
        elif section == "nodes":
            if line == "node_id,t,x,y":
                continue
            nid, t, x, y = line.split(",")
            rows.setdefault(int(nid), []).append((int(t), float(x), float(y)))
        else:
            raise ValueError(f"line {lineno}: content outside a known section")
    scenario = Scenario(**scen)
    traces = []
    for nid in sorted(rows):
        samples = sorted(rows[nid])
        if [t for t, _, _ in samples] != list(range(scenario.history_len_T)):
            raise ValueError(f"node {nid}: expected samples t=0..{scenario.history_len_T - 1}")
        traces.append(NodeTrace(nid, np.array([[x, y] for _, x, y in samples])))
    cx, cy = (float(v) for v in meta["cluster_center"].split(","))
    return Deployment(scenario, tuple(traces), int(meta["rng_seed"]), (cx, cy))
