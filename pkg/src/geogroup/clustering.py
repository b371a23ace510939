"""History-aware cluster membership and the grouping suitability graph."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import UndirectedGraph
from .mobility import Deployment, NodeTrace


@dataclass(frozen=True)
class DiscountWeights:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) == 0:
            raise ValueError("weights must be a nonempty 1-D sequence")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if np.any(np.diff(w) < 0):
            raise ValueError("weights must be non-decreasing in time")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.weights)


def linear_weights(T: int) -> DiscountWeights:
    """w_t = t / (1 + 2 + ... + T), favouring recent samples."""
    if T < 1:
        raise ValueError("T must be at least 1")
    t = np.arange(1, T + 1, dtype=float)
    return DiscountWeights(t / (T * (T + 1) / 2))


@dataclass(frozen=True)
class ClusterSpec:
    center: tuple[float, float]
    d_max: float
    d_min: float
    weights: DiscountWeights
    xi_cs: float = 0.7
    xi_ps: float = 0.7

    def __post_init__(self):
        if not 0 < self.xi_cs <= 1 or not 0 < self.xi_ps <= 1:
            raise ValueError("suitability thresholds must lie in (0, 1]")
        if not 0 < self.d_min < self.d_max:
            raise ValueError("cluster spec requires 0 < d_min < d_max")

    @classmethod
    def for_deployment(cls, dep: Deployment, xi_cs: float = 0.7, xi_ps: float = 0.7) -> "ClusterSpec":
        s = dep.scenario
        return cls(dep.cluster_center, s.d_max, s.d_min, linear_weights(s.history_len_T), xi_cs, xi_ps)


@dataclass(frozen=True)
class SuitabilityResult:
    """Output of dynamic clustering.

    ``graph`` is indexed 0..len(suitable_ids)-1; graph node ``g`` stands for
    deployment node ``suitable_ids[g]``. ``ps_values`` is the PS matrix in
    the same graph indexing.
    """

    suitable_ids: tuple[int, ...]
    cs_values: dict[int, float]
    graph: UndirectedGraph
    ps_values: np.ndarray

    @property
    def rejected(self) -> dict[int, float]:
        keep = set(self.suitable_ids)
        return {i: cs for i, cs in self.cs_values.items() if i not in keep}


def _positions(trace) -> np.ndarray:
    return trace.positions if isinstance(trace, NodeTrace) else np.asarray(trace, dtype=float)


def _check_len(n: int, spec: ClusterSpec) -> None:
    if n != len(spec.weights):
        raise ValueError(f"trace length {n} does not match {len(spec.weights)} weights")


def clustering_suitability(trace, spec: ClusterSpec) -> float:
    pos = _positions(trace)
    _check_len(len(pos), spec)
    inside = np.hypot(*(pos - np.asarray(spec.center)).T) <= spec.d_max / 2
    return float(spec.weights.weights @ inside)


def pairing_suitability(trace_i, trace_j, spec: ClusterSpec) -> float:
    a, b = _positions(trace_i), _positions(trace_j)
    if len(a) != len(b):
        raise ValueError("traces must have equal length")
    _check_len(len(a), spec)
    apart = np.hypot(*(a - b).T) > spec.d_min
    return float(spec.weights.weights @ apart)


def dynamic_clustering(dep: Deployment, spec: ClusterSpec) -> SuitabilityResult:
    """Filter nodes by CS, then link suitable pairs whose PS clears the gate."""
    pos = dep.positions()
    if pos.shape[0]:
        _check_len(pos.shape[1], spec)
    w = spec.weights.weights
    to_center = np.linalg.norm(pos - np.asarray(spec.center), axis=-1)
    cs = (to_center <= spec.d_max / 2) @ w
    ids = [tr.node_id for tr in dep.traces]
    keep = np.flatnonzero(cs >= spec.xi_cs)
    if len(keep) < 2:
        raise ValueError(f"insufficient suitable nodes: {len(keep)}")
    sub = pos[keep]
    gaps = np.linalg.norm(sub[:, None, :, :] - sub[None, :, :, :], axis=-1)
    ps = (gaps > spec.d_min) @ w
    adj = ps >= spec.xi_ps
    np.fill_diagonal(adj, False)
    return SuitabilityResult(
        suitable_ids=tuple(ids[i] for i in keep),
        cs_values={ids[i]: float(c) for i, c in enumerate(cs)},
        graph=UndirectedGraph.from_adjacency_matrix(adj),
        ps_values=ps,
    )
