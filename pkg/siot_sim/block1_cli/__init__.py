"""Block 1: Command-Line Interface"""

from .cli import build_parser, cli_matrix, cli_run, main
from .scenarios import ScenarioRow, format_matrix, matrix_cells, parse_case_list, scenario_table

__all__ = [
    "build_parser",
    "cli_matrix",
    "cli_run",
    "main",
    "ScenarioRow",
    "format_matrix",
    "matrix_cells",
    "parse_case_list",
    "scenario_table",
]
