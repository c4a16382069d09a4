# semicore/search.py
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np

from config.settings import resolve_tol_lp
from core.errors import DomainError
from games.analysis import marginal_costs
from games.cost_game import CostGame, TSGame
from metric.generators import ASYMMETRIC_RANGE, gen_asymmetric_metric, gen_euclidean, make_rng
from metric.matrix import DistanceMatrix, metric_closure
from semicore.formulas import semicore_empty_criterion

logger = logging.getLogger(__name__)

CLIMB_STEPS = 200
# запас над tol, чтобы найденный экземпляр уверенно проходил semicore_empty_criterion
CLIMB_MARGIN = 10.0


def semicore_gap(g: CostGame) -> float:
    """Σ_j (c(N) - c(N \\ {j})) - c(N): semicore пуст, когда зазор положителен"""
    return float(np.sum(marginal_costs(g))) - g.grand_cost


def climb_asymmetric_metric(n: int, seed: int, steps: int = CLIMB_STEPS, tol: Optional[float] = None) -> DistanceMatrix:
    """
    Локальный поиск асимметричной TSG с пустым semicore. Старт - те же случайные
    дуги, что у gen_asymmetric_metric; шаг пересэмплирует одну дугу и принимается,
    если semicore_gap после замыкания не уменьшился. Остановка при зазоре > CLIMB_MARGIN·tol.
    Результат детерминирован по (n, seed, steps).
    """
    if n < 2:
        raise DomainError("climb_asymmetric_metric: нужно n >= 2")
    tol = resolve_tol_lp(tol)
    low, high = ASYMMETRIC_RANGE
    rng = make_rng(seed)
    raw = rng.uniform(low, high, size=(n + 1, n + 1))
    np.fill_diagonal(raw, 0.0)
    best = metric_closure(raw)
    gap = semicore_gap(TSGame(best))
    for step in range(steps):
        if gap > CLIMB_MARGIN * tol:
            logger.debug(f"climb n={n} seed={seed}: зазор {gap:.6g} на шаге {step}")
            break
        i, j = rng.choice(n + 1, size=2, replace=False)
        candidate = raw.copy()
        candidate[i, j] = rng.uniform(low, high)
        m = metric_closure(candidate)
        value = semicore_gap(TSGame(m))
        if value >= gap:
            raw, best, gap = candidate, m, value
    return best


GENERATORS = {
    "euclidean": gen_euclidean,
    "asymmetric": gen_asymmetric_metric,
    "asymmetric-climb": climb_asymmetric_metric,
}


@dataclass
class SearchResult:
    kind: str
    sampled: int = 0
    found: List[Tuple[int, int, DistanceMatrix]] = field(default_factory=list)   # (n, seed, матрица)

    @property
    def shortfall(self) -> bool:
        return self.sampled > 0 and not self.found


def find_empty_semicore_tsgs(
    kind: str,
    n_range: Iterable[int],
    seeds: Iterable[int],
    tol: Optional[float] = None,
    limit: Optional[int] = None,
) -> SearchResult:
    """
    Поиск TSG с пустым semicore по генератору kind. Критерию нужны только c(N)
    и c(N \\ {j}), то есть n + 1 точных туров на экземпляр.
    """
    if kind not in GENERATORS:
        raise DomainError(f"Неизвестный генератор: {kind}")
    generate = GENERATORS[kind]
    seeds = list(seeds)
    result = SearchResult(kind=kind)
    for n in n_range:
        if n < 2:
            continue
        for seed in seeds:
            m = generate(n, seed)
            result.sampled += 1
            if semicore_empty_criterion(TSGame(m), tol):
                logger.info(f"Пустой semicore: {kind} n={n} seed={seed}")
                result.found.append((n, seed, m))
                if limit is not None and len(result.found) >= limit:
                    return result
    if result.shortfall:
        logger.warning(f"{kind}: пустой semicore не найден за {result.sampled} экземпляров")
    return result
