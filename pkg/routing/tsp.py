# routing/tsp.py
import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from config.settings import resolve_tol_metric, settings
from core.coalition import Coalition
from core.errors import DomainError, require_capacity
from metric.matrix import DistanceMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tour:
    order: Tuple[int, ...]     # 0, ..., 0
    cost: float


def tour_cost(m: DistanceMatrix, order: Sequence[int]) -> float:
    d = m.entries
    return float(sum(d[a, b] for a, b in zip(order[:-1], order[1:])))


def _check_coalition(m: DistanceMatrix, s: Coalition) -> Tuple[int, ...]:
    if s.n != m.n:
        raise DomainError(f"Коалиция над {s.n} игроками, матрица над {m.n}")
    if s.is_empty:
        raise DomainError("Стоимость пустой коалиции не определена")
    return s.members


def _popcounts(k: int) -> np.ndarray:
    counts = np.zeros(1 << k, dtype=np.int64)
    for b in range(k):
        counts += (np.arange(1 << k) >> b) & 1
    return counts


def path_table(w: np.ndarray) -> np.ndarray:
    """
    DP по подмножествам: P[mask, j] - минимальная стоимость пути из депо (узел 0 в w),
    проходящего ровно по узлам mask и заканчивающегося в j (локальные узлы 1..k -> биты 0..k-1).
    Слои обрабатываются по числу элементов, внутри слоя - векторно по всем маскам.
    """
    k = w.shape[0] - 1
    table = np.full((1 << k, k), np.inf)
    for j in range(k):
        table[1 << j, j] = w[0, j + 1]
    if k < 2:
        return table
    masks = np.arange(1 << k)
    counts = _popcounts(k)
    arcs = w[1:, 1:]
    for size in range(2, k + 1):
        layer = masks[counts == size]
        for j in range(k):
            sel = layer[(layer >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            table[sel, j] = np.min(table[prev] + arcs[:, j][None, :], axis=1)
    return table


def all_tour_costs(m: DistanceMatrix) -> np.ndarray:
    """
    c(S) для всех масок из одной общей DP: table[mask] (table[0] = 0).
    Это стоимость всей TSG-игры за O(2^n n^2).
    """
    require_capacity("точная таблица TSP (игроков)", m.n, settings.solver.cap_exact)
    d = m.entries
    paths = path_table(d)
    costs = np.min(paths + d[1:, 0][None, :], axis=1)
    costs[0] = 0.0
    return costs


def tsp_exact(m: DistanceMatrix, s: Coalition, tol: Optional[float] = None) -> Tour:
    """
    Минимальный гамильтонов цикл по S ∪ {0}, дуги ориентированные.
    Среди оптимальных (в пределах tol) выбирается лексикографически наименьший порядок.
    """
    members = _check_coalition(m, s)
    require_capacity("tsp_exact (игроков в коалиции)", len(members), settings.solver.cap_exact)
    tol = resolve_tol_metric(tol)

    nodes = (0,) + members
    w = m.entries[np.ix_(nodes, nodes)]
    k = len(members)
    full = (1 << k) - 1
    # та же прямая рекуррентность и тот же порядок сложений, что в all_tour_costs:
    # c(S) побитово совпадает при любом порядке заполнения таблицы игры
    best = float(np.min(path_table(w)[full] + w[1:, 0]))
    # rest[mask, j] - путь j -> (остальные узлы mask) -> 0 в исходной матрице;
    # DP на транспонированной матрице нужна только для восстановления тура
    rest = path_table(w.T)

    order = [0]
    spent = 0.0
    current = 0
    remaining = full
    while remaining:
        for j in range(k):
            if not remaining >> j & 1:
                continue
            candidate = spent + w[current, j + 1] + rest[remaining, j]
            if candidate <= best + tol:
                spent += w[current, j + 1]
                current = j + 1
                remaining ^= 1 << j
                order.append(nodes[current])
                break
        else:
            raise AssertionError("Восстановление тура не нашло продолжения")
    order.append(0)
    return Tour(order=tuple(order), cost=best)


def tsp_bruteforce(m: DistanceMatrix, s: Coalition, tol: Optional[float] = None) -> Tour:
    """Перебор всех перестановок; независимый оракул для проверки tsp_exact"""
    members = _check_coalition(m, s)
    require_capacity("tsp_bruteforce (игроков в коалиции)", len(members), settings.solver.cap_bruteforce)
    tol = resolve_tol_metric(tol)

    d = m.entries
    candidates = []
    for perm in itertools.permutations(members):
        cost = d[0, perm[0]] + d[perm[-1], 0]
        for a, b in zip(perm[:-1], perm[1:]):
            cost += d[a, b]
        candidates.append((perm, float(cost)))
    best = min(cost for _, cost in candidates)
    # permutations() выдаёт перестановки в лексикографическом порядке
    perm = next(p for p, cost in candidates if cost <= best + tol)
    return Tour(order=(0,) + perm + (0,), cost=best)
