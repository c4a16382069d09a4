# reports/analyze.py
import hashlib
import logging
import time
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config.settings import resolve_tol_lp, settings
from core.errors import ConsistencyError, UsageError, require_capacity
from games.cost_game import CostGame, TSGame
from metric.matrix import DistanceMatrix
from semicore.bounds import bounds_report
from stability.concepts import (
    cost_of_semicore_stability_lp, cost_of_stability, optimal_alpha_core, optimal_alpha_semicore,
    optimal_eps_core, optimal_eps_semicore_lp,
)
from stability.model import StabilityResult, Weight, verify_witness

logger = logging.getLogger(__name__)

CONCEPTS = ("core", "cos", "eps-core", "alpha", "semicore", "coss", "eps-semicore", "alpha-semicore", "bounds")
# концепции, которым нужна вся таблица 2^n - 1 коалиций
FULL_TABLE = {"core", "cos", "eps-core", "alpha"}


@dataclass
class AnalysisReport:
    descriptor: Dict[str, Any]
    game: Dict[str, Any]
    table_digest: Optional[str] = None
    on_demand: bool = True
    results: List[Dict[str, Any]] = field(default_factory=list)
    bounds: Optional[Dict[str, Any]] = None
    timing_ms: Dict[str, float] = field(default_factory=dict)

    def to_dict(self, with_timing: bool = True) -> Dict[str, Any]:
        data = {
            "descriptor": self.descriptor,
            "game": self.game,
            "cost_table": {"digest": self.table_digest, "on_demand": self.on_demand},
            "results": self.results,
            "bounds": self.bounds,
        }
        if with_timing:
            data["timing_ms"] = self.timing_ms
        return data


def parse_concepts(raw: str) -> List[str]:
    names = [part.strip() for part in raw.split(",") if part.strip()]
    unknown = [name for name in names if name not in CONCEPTS]
    if unknown:
        raise UsageError(f"Неизвестные концепции: {', '.join(unknown)} (доступны: {', '.join(CONCEPTS)})")
    if not names:
        raise UsageError("Список концепций пуст")
    return list(dict.fromkeys(names))


def check_capacity(g: CostGame, concepts: Sequence[str]) -> None:
    """Отказ до начала вычислений, если этап экспоненциальный и n больше лимита"""
    if isinstance(g, TSGame):
        require_capacity("точный TSP (игроков)", g.n, settings.solver.cap_exact)
    if FULL_TABLE & set(concepts):
        require_capacity("полная таблица коалиций (игроков)", g.n, settings.solver.cap_table)
        require_capacity("строк LP-модели", (1 << g.n) - 1, settings.solver.max_lp_rows)


def table_digest(table: np.ndarray) -> str:
    """sha256 по repr значений c(S) в порядке масок"""
    text = ",".join(repr(float(v)) for v in table[1:])
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _solve_concept(g: CostGame, concept: str, weight: Weight, tol: float, jobs: int) -> StabilityResult:
    if concept == "core":
        return replace(cost_of_stability(g, tol, jobs), concept="core")
    if concept == "cos":
        return cost_of_stability(g, tol, jobs)
    if concept == "eps-core":
        return optimal_eps_core(g, weight, tol, jobs)
    if concept == "alpha":
        return optimal_alpha_core(g, tol, jobs)
    if concept == "semicore":
        return replace(cost_of_semicore_stability_lp(g, tol), concept="semicore")
    if concept == "coss":
        return cost_of_semicore_stability_lp(g, tol)
    if concept == "eps-semicore":
        return optimal_eps_semicore_lp(g, weight, tol)
    return optimal_alpha_semicore(g, tol)


def analyze(
    g: CostGame,
    concepts: Sequence[str],
    descriptor: Dict[str, Any],
    matrix: Optional[DistanceMatrix] = None,
    weight: Weight = Weight.STRONG,
    tol: Optional[float] = None,
    jobs: int = 1,
) -> AnalysisReport:
    tol = resolve_tol_lp(tol)
    weight = Weight(weight)
    check_capacity(g, concepts)
    report = AnalysisReport(descriptor=descriptor, game=g.describe())

    if FULL_TABLE & set(concepts):
        started = time.perf_counter()
        table = g.all_costs(jobs=jobs)
        report.table_digest = table_digest(table)
        report.on_demand = False
        report.timing_ms["cost_table"] = round((time.perf_counter() - started) * 1000, 3)

    exact_cos = None
    for concept in concepts:
        if concept == "bounds":
            continue
        started = time.perf_counter()
        result = _solve_concept(g, concept, weight, tol, jobs)
        problems = verify_witness(g, result, tol)
        if problems:
            raise ConsistencyError(f"{concept}: свидетель не прошёл повторную проверку: {problems[0]}")
        if concept in ("cos", "core"):
            exact_cos = result.value
        report.results.append(result.to_dict())
        report.timing_ms[concept] = round((time.perf_counter() - started) * 1000, 3)
        logger.info(f"{concept}: {result.status.value} {result.value:.10g}")

    if "bounds" in concepts:
        started = time.perf_counter()
        report.bounds = bounds_report(g, matrix, exact_cos=exact_cos, tol=tol, jobs=jobs).to_dict()
        report.timing_ms["bounds"] = round((time.perf_counter() - started) * 1000, 3)
    return report
