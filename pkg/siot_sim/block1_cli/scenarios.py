"""
Block 1: Scenario Matrix
The 36 strategy x population x network cases, each examined under three mobility modes
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..config.simulation_config import ConfigError, MobilityMode, NetworkType, Strategy

POPULATIONS: Tuple[int, ...] = (100, 250, 500)

# (network, beta) in table order within one population block
NETWORKS: Tuple[Tuple[NetworkType, Optional[float]], ...] = (
    (NetworkType.MESH, None),
    (NetworkType.REGULAR, None),
    (NetworkType.SMALL_WORLD, 0.1),
    (NetworkType.SMALL_WORLD, 0.2),
)

STRATEGIES: Tuple[Strategy, ...] = (
    Strategy.COMPETITIVE,
    Strategy.COOPERATIVE,
    Strategy.COOPERATIVE_RESTRICTED,
)

MOBILITY_MODES: Tuple[MobilityMode, ...] = (
    MobilityMode.STATIONARY,
    MobilityMode.RANDOM_WALK,
    MobilityMode.PROFILE_BASED,
)

_STRATEGY_LABELS = {
    Strategy.COMPETITIVE: "Competitive",
    Strategy.COOPERATIVE: "Cooperative",
    Strategy.COOPERATIVE_RESTRICTED: "Cooperative-R",
}


@dataclass(frozen=True)
class ScenarioRow:
    """One case of the experiment matrix"""
    case_id: int
    strategy: Strategy
    population: int
    network: NetworkType
    beta: Optional[float] = None

    @property
    def network_label(self) -> str:
        if self.network is NetworkType.SMALL_WORLD:
            return f"small world (beta = {self.beta})"
        return self.network.value.capitalize()

    def overrides(self, mobility: MobilityMode) -> Dict[str, Any]:
        """Config keys this case pins, for one mobility mode"""
        values: Dict[str, Any] = {
            "strategy": self.strategy,
            "population": self.population,
            "network": self.network,
            "mobility": mobility,
        }
        if self.beta is not None:
            values["beta"] = self.beta
        return values


def scenario_table() -> List[ScenarioRow]:
    rows = []
    case_id = 1
    for strategy in STRATEGIES:
        for population in POPULATIONS:
            for network, beta in NETWORKS:
                rows.append(ScenarioRow(case_id, strategy, population, network, beta))
                case_id += 1
    return rows


def parse_case_list(text: str) -> List[int]:
    """'5,17,29' -> [5, 17, 29]; ranges like '1-4' are accepted too"""
    known = {row.case_id for row in scenario_table()}
    cases: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = (int(bound) for bound in part.split("-", 1))
                chosen = list(range(lo, hi + 1))
            else:
                chosen = [int(part)]
        except ValueError:
            raise ConfigError(f"bad case selector {part!r}")

        for case_id in chosen:
            if case_id not in known:
                raise ConfigError(f"unknown case {case_id}; cases run 1..{max(known)}")
            if case_id not in cases:
                cases.append(case_id)

    if not cases:
        raise ConfigError("empty case list")
    return cases


def matrix_cells(
    cases: Optional[Iterable[int]] = None,
    modes: Sequence[MobilityMode] = MOBILITY_MODES,
) -> List[Tuple[ScenarioRow, MobilityMode]]:
    """Every selected case crossed with every mobility mode, in case order"""
    selected = None if cases is None else set(cases)
    return [
        (row, mode)
        for row in scenario_table()
        if selected is None or row.case_id in selected
        for mode in modes
    ]


def cell_dirname(row: ScenarioRow, mobility: MobilityMode) -> str:
    return f"case{row.case_id:02d}_{mobility.value}"


def format_matrix(rows: Optional[Sequence[ScenarioRow]] = None) -> str:
    rows = list(rows) if rows is not None else scenario_table()
    lines = [f"{'Case':<8} {'Scenario':<14} {'Population':<11} Network Type"]
    for row in rows:
        lines.append(
            f"{'Case ' + str(row.case_id):<8} {_STRATEGY_LABELS[row.strategy]:<14} "
            f"{row.population:<11} {row.network_label}"
        )
    return "\n".join(lines)
