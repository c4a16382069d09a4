# games/generators.py
import logging
from typing import Optional

import numpy as np

from config.settings import resolve_tol_lp
from core.errors import DomainError
from games.cost_game import TableGame

logger = logging.getLogger(__name__)

WEIGHT_RANGE = (1.0, 10.0)
POWER_RANGE = (0.3, 0.9)


def _subset_weights(weights: np.ndarray) -> np.ndarray:
    n = len(weights)
    sums = np.zeros(1 << n)
    for i, w in enumerate(weights):
        bit = 1 << i
        sums[bit:2 * bit] = sums[:bit] + w
    return sums


def random_subadditive_table(n: int, rng: np.random.Generator) -> TableGame:
    """
    c(S) = w(S)^p с положительными весами и 0 < p < 1.
    Вогнутая возрастающая функция от аддитивной меры субаддитивна
    и для пересекающихся коалиций.
    """
    if n < 1:
        raise DomainError("Нужен хотя бы один игрок")
    weights = rng.uniform(*WEIGHT_RANGE, size=n)
    power = rng.uniform(*POWER_RANGE)
    costs = _subset_weights(weights) ** power
    return TableGame(n, {mask: float(costs[mask]) for mask in range(1, 1 << n)})


def max_subadditive_grand(costs: np.ndarray, n: int) -> float:
    """
    Наибольшая c(N), сохраняющая субаддитивность при монотонных c на S ⊂ N:
    min по разбиениям c(S) + c(N \\ S).
    """
    full = (1 << n) - 1
    masks = np.arange(1, full)
    return float(np.min(costs[masks] + costs[full ^ masks]))


def empty_semicore_table(
    n: int,
    rng: np.random.Generator,
    tol: Optional[float] = None,
    attempts: int = 50,
) -> Optional[TableGame]:
    """
    Субаддитивная таблица с пустым semicore: базовая игра w(S)^p, у которой
    c(N) поднята до max_subadditive_grand, затем случайно опущена
    не ниже порога пустоты. None, если за attempts попыток не вышло.
    """
    if n < 2:
        raise DomainError("Пустой semicore возможен только при n >= 2")
    tol = resolve_tol_lp(tol)
    full = (1 << n) - 1
    for _ in range(attempts):
        weights = rng.uniform(*WEIGHT_RANGE, size=n)
        power = rng.uniform(*POWER_RANGE)
        costs = _subset_weights(weights) ** power
        ceiling = max_subadditive_grand(costs, n)
        leave_one_out = costs[full ^ (1 << np.arange(n))]
        # semicore пуст <=> (n-1) c(N) > sum_j c(N \ {j})
        threshold = float(np.sum(leave_one_out)) / (n - 1)
        if ceiling <= threshold + 10 * tol:
            continue
        grand = threshold + rng.uniform(0.25, 1.0) * (ceiling - threshold)
        table = {mask: float(costs[mask]) for mask in range(1, full)}
        table[full] = float(grand)
        return TableGame(n, table)
    logger.info(f"empty_semicore_table: не найдено за {attempts} попыток (n={n})")
    return None
