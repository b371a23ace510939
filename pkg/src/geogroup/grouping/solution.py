"""Grouping solutions, their joint cost, and the text exchange format."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from ..graph import UndirectedGraph

VARIANCE_MODES = ("population", "sample")


@dataclass(frozen=True)
class CostParams:
    """Weights and search budgets shared by every grouping algorithm.

    ``alpha`` trades ungrouped nodes against size variance; ``tr`` is the
    fraction of the previous cost a smaller group count must reach to keep
    shrinking. Tabu tenure is ``tabu_tenure_base`` plus a uniform draw from
    ``0..tabu_tenure_spread - 1``.
    """

    alpha: float = 0.5
    tr: float = 0.7
    max_ts_iterations: int = 2000
    tabu_tenure_base: int = 10
    tabu_tenure_spread: int = 10
    reves_enabled: bool = False
    reves_ws: int = 150
    reves_p: int = 70
    variance: str = "population"
    placement: str = "best"
    reves_stream: str = "best"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if not 0 < self.tr <= 1:
            raise ValueError("tr must lie in (0, 1]")
        if self.max_ts_iterations < 0:
            raise ValueError("max_ts_iterations must be nonnegative")
        if self.tabu_tenure_base < 0 or self.tabu_tenure_spread < 1:
            raise ValueError("invalid tabu tenure")
        if self.reves_ws < 1 or self.reves_p < 1:
            raise ValueError("REvES window and patience must be at least 1")
        if self.variance not in VARIANCE_MODES:
            raise ValueError(f"variance must be one of {VARIANCE_MODES}")
        if self.placement not in ("best", "random"):
            raise ValueError("placement must be 'best' or 'random'")
        if self.reves_stream not in ("best", "raw"):
            raise ValueError("reves_stream must be 'best' or 'raw'")


@dataclass(frozen=True)
class GroupingSolution:
    color_sets: tuple[frozenset[int], ...]
    ungrouped: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.color_sets)
        object.__setattr__(self, "color_sets", sets)
        object.__setattr__(self, "ungrouped", frozenset(self.ungrouped))

    @property
    def k(self) -> int:
        return len(self.color_sets)

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.color_sets]

    @property
    def n(self) -> int:
        return sum(self.sizes) + len(self.ungrouped)

    @classmethod
    def from_colors(cls, colors: Sequence[int], k: int) -> "GroupingSolution":
        """Build from a per-node color list; any value outside ``0..k-1`` means ungrouped."""
        sets: list[set[int]] = [set() for _ in range(k)]
        u = set()
        for v, c in enumerate(colors):
            if 0 <= c < k:
                sets[c].add(v)
            else:
                u.add(v)
        return cls(tuple(sets), u)

    def colors(self, n: int | None = None) -> list[int]:
        """Per-node color list with ``k`` standing for the ungrouped set."""
        n = self.n if n is None else n
        out = [self.k] * n
        for j, s in enumerate(self.color_sets):
            for v in s:
                out[v] = j
        return out


class GroupingOutcome(NamedTuple):
    solution: GroupingSolution
    cost: float
    iterations_used: int
    k_history: list[tuple[int, float]]

    @property
    def k(self) -> int:
        return self.solution.k


def size_variance(sizes: Sequence[int], mode: str = "population") -> float:
    k = len(sizes)
    if k == 0:
        raise ValueError("variance needs at least one group")
    total = sum(sizes)
    sq = sum(s * s for s in sizes)
    return _variance(k, total, sq, mode)


def _variance(k: int, total: int, sq: int, mode: str) -> float:
    # integer numerator keeps incremental and from-scratch values identical
    num = k * sq - total * total
    if mode == "population":
        return num / (k * k)
    return num / (k * (k - 1)) if k > 1 else 0.0


def joint_cost(s: GroupingSolution, alpha: float, variance: str = "population") -> float:
    if s.k == 0:
        raise ValueError("joint cost needs at least one group")
    return alpha * len(s.ungrouped) + (1 - alpha) * size_variance(s.sizes, variance)


def check_partition(s: GroupingSolution, n: int) -> None:
    seen: set[int] = set()
    for part in (*s.color_sets, s.ungrouped):
        if seen & part:
            raise ValueError("color sets overlap")
        seen |= part
    if seen != set(range(n)):
        raise ValueError("solution does not cover the node set exactly")


def clashes(s: GroupingSolution, g: UndirectedGraph) -> list[tuple[int, int]]:
    """Edges of ``g`` whose endpoints share a color set (the ungrouped set is exempt)."""
    where = s.colors(g.n)
    return [(a, b) for a, b in g.edges if where[a] == where[b] < s.k]


def is_proper(s: GroupingSolution, g: UndirectedGraph) -> bool:
    return not clashes(s, g)


def validate(s: GroupingSolution, g: UndirectedGraph) -> None:
    check_partition(s, g.n)
    bad = clashes(s, g)
    if bad:
        raise ValueError(f"improper solution: {len(bad)} clashing edges, e.g. {bad[0]}")


# -- text format -------------------------------------------------------------

def format_solution(s: GroupingSolution, alpha: float, variance: str = "population") -> str:
    lines = [f"S{j}: " + ",".join(map(str, sorted(part))) for j, part in enumerate(s.color_sets, 1)]
    lines.append("U: " + ",".join(map(str, sorted(s.ungrouped))))
    lines.append(f"k={s.k} cost={joint_cost(s, alpha, variance):.6f} alpha={alpha:g}")
    return "\n".join(l.rstrip() for l in lines) + "\n"


def parse_solution(text: str) -> tuple[GroupingSolution, float | None]:
    """Inverse of :func:`format_solution`; returns the solution and its alpha."""
    sets: dict[int, frozenset[int]] = {}
    u: frozenset[int] = frozenset()
    alpha = None
    k_declared = None

    def ids(body: str) -> frozenset[int]:
        body = body.strip()
        return frozenset(int(x) for x in body.split(",")) if body else frozenset()

    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if sep and head == "U":
            u = ids(body)
        elif sep and head.startswith("S") and head[1:].isdigit():
            sets[int(head[1:])] = ids(body)
        elif line.startswith("k="):
            fields_ = dict(tok.split("=", 1) for tok in line.split())
            k_declared = int(fields_["k"])
            alpha = float(fields_["alpha"]) if "alpha" in fields_ else None
        else:
            raise ValueError(f"unrecognized solution line: {line!r}")
    if sorted(sets) != list(range(1, len(sets) + 1)):
        raise ValueError("color sets must be numbered S1..Sk")
    if k_declared is not None and k_declared != len(sets):
        raise ValueError(f"trailer declares k={k_declared} but {len(sets)} sets are listed")
    return GroupingSolution(tuple(sets[j] for j in sorted(sets)), u), alpha
