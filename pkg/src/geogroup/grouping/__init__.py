"""Coloring-based grouping on the complement of the suitability graph."""

from .baselines import ColoringResult, partialcol_baseline, tabucol_baseline
from .greedy import dsatur, elf_greedy, elf_order, greedy_color, random_greedy
from .psg import psg
from .solution import (
    CostParams,
    GroupingOutcome,
    GroupingSolution,
    check_partition,
    clashes,
    format_solution,
    is_proper,
    joint_cost,
    parse_solution,
    size_variance,
    validate,
)
from .tabu import RevesMonitor, TabuResult, modified_tabu_search, partialcol_search, reves_stop_index

__all__ = [
    "ColoringResult", "CostParams", "GroupingOutcome", "GroupingSolution", "RevesMonitor",
    "TabuResult", "check_partition", "clashes", "dsatur", "elf_greedy", "elf_order",
    "format_solution", "greedy_color", "is_proper", "joint_cost", "modified_tabu_search",
    "parse_solution", "partialcol_baseline", "partialcol_search", "psg", "random_greedy",
    "reves_stop_index", "size_variance", "tabucol_baseline", "validate",
]
