# games/cost_game.py
import logging
import threading
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Mapping, Optional

import numpy as np

from config.settings import settings
from core.coalition import Coalition, as_mask
from core.errors import DomainError, require_capacity
from metric.matrix import DistanceMatrix
from routing.trees import mst_costs
from routing.tsp import all_tour_costs, tsp_exact

logger = logging.getLogger(__name__)


class CostGame(ABC):
    """
    Игра (N, c) с мемоизацией стоимостей коалиций.
    Кэш допускает параллельное заполнение разных коалиций; при гонке
    за одну коалицию сохраняется первое записанное значение.
    """
    kind: str = "abstract"

    def __init__(self, n: int):
        if n < 1:
            raise DomainError("В игре должен быть хотя бы один игрок")
        self.n = n
        self._cache: Dict[int, float] = {}
        self._lock = threading.Lock()

    @abstractmethod
    def _compute(self, mask: int) -> float:
        ...

    def cost(self, s) -> float:
        """c(S) для непустой коалиции (Coalition или маска)"""
        mask = as_mask(s, self.n)
        if mask == 0:
            raise DomainError("Стоимость пустой коалиции не определена")
        cached = self._cache.get(mask)
        if cached is not None:
            return cached
        value = float(self._compute(mask))
        with self._lock:
            return self._cache.setdefault(mask, value)

    @property
    def grand_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def grand_cost(self) -> float:
        return self.cost(self.grand_mask)

    def _bulk_fill(self) -> Optional[np.ndarray]:
        """Подклассы могут посчитать всю таблицу разом (например, одной DP)"""
        return None

    def all_costs(self, jobs: int = 1) -> np.ndarray:
        """
        Таблица c(S) по всем 2^n - 1 непустым коалициям: table[mask], table[0] = 0.
        Результат не зависит от порядка и параллельности вычисления.
        """
        require_capacity("полная таблица коалиций (игроков)", self.n, settings.solver.cap_table)
        size = 1 << self.n
        if len(self._cache) < size - 1:
            bulk = self._bulk_fill()
            if bulk is not None:
                with self._lock:
                    for mask in range(1, size):
                        self._cache.setdefault(mask, float(bulk[mask]))
            elif jobs > 1:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    list(pool.map(self.cost, range(1, size)))
            else:
                for mask in range(1, size):
                    self.cost(mask)
        table = np.zeros(size)
        for mask in range(1, size):
            table[mask] = self._cache[mask]
        return table

    def describe(self) -> Dict:
        return {"kind": self.kind, "n": self.n}


class TableGame(CostGame):
    """Игра, заданная явной таблицей стоимостей по маскам"""
    kind = "table"

    def __init__(self, n: int, costs: Mapping[int, float]):
        super().__init__(n)
        missing = [mask for mask in range(1, 1 << n) if mask not in costs]
        if missing:
            raise DomainError(f"В таблице нет {len(missing)} коалиций, например mask={missing[0]}")
        negative = [mask for mask, v in costs.items() if v < 0]
        if negative:
            raise DomainError(f"Отрицательная стоимость коалиции mask={negative[0]}")
        self._table = {int(mask): float(v) for mask, v in costs.items() if 0 < mask < (1 << n)}

    @classmethod
    def from_function(cls, n: int, fn) -> "TableGame":
        """fn(Coalition) -> стоимость"""
        return cls(n, {mask: fn(Coalition(mask, n)) for mask in range(1, 1 << n)})

    def _compute(self, mask: int) -> float:
        return self._table[mask]


class TSGame(CostGame):
    """Игра коммивояжёра: c(S) - оптимальный тур по S ∪ {0}"""
    kind = "tsg"

    def __init__(self, matrix: DistanceMatrix):
        super().__init__(matrix.n)
        self.matrix = matrix

    def _compute(self, mask: int) -> float:
        return tsp_exact(self.matrix, Coalition(mask, self.n)).cost

    def _bulk_fill(self) -> Optional[np.ndarray]:
        logger.debug(f"TSG n={self.n}: таблица через общую DP")
        return all_tour_costs(self.matrix)

    def describe(self) -> Dict:
        return {"kind": self.kind, "n": self.n, "symmetric": self.matrix.symmetric}


class MCSTGame(CostGame):
    """Игра минимального остовного дерева: c(S) - MST на S ∪ {0}"""
    kind = "mcst"

    def __init__(self, matrix: DistanceMatrix):
        if not matrix.symmetric:
            raise DomainError("MCST-игра определена только для симметричной матрицы")
        super().__init__(matrix.n)
        self.matrix = matrix

    def _compute(self, mask: int) -> float:
        return float(mst_costs(self.matrix, [mask])[0])

    def _bulk_fill(self) -> Optional[np.ndarray]:
        logger.debug(f"MCST n={self.n}: таблица через векторный Прим")
        return mst_costs(self.matrix, np.arange(1 << self.n))


class GrandPerturbedGame(CostGame):
    """c^ε(N) = c(N) - ε, остальные коалиции без изменений (0 <= ε <= c(N))"""
    kind = "grand-perturbed"

    def __init__(self, base: CostGame, eps: float):
        super().__init__(base.n)
        if eps < 0 or eps > base.grand_cost:
            raise DomainError(f"ε={eps} вне отрезка [0, c(N)={base.grand_cost}]")
        self.base = base
        self.eps = float(eps)

    def _compute(self, mask: int) -> float:
        value = self.base.cost(mask)
        return value - self.eps if mask == self.grand_mask else value

    def describe(self) -> Dict:
        return {"kind": self.kind, "n": self.n, "eps": self.eps, "base": self.base.describe()}


class ProperPerturbedGame(CostGame):
    """c^ε(N) = c(N), c^ε(S) = c(S) + ε для S ⊂ N (ε >= 0)"""
    kind = "proper-perturbed"

    def __init__(self, base: CostGame, eps: float):
        super().__init__(base.n)
        if eps < 0:
            raise DomainError(f"ε={eps} должно быть неотрицательным")
        self.base = base
        self.eps = float(eps)

    def _compute(self, mask: int) -> float:
        value = self.base.cost(mask)
        return value if mask == self.grand_mask else value + self.eps

    def describe(self) -> Dict:
        return {"kind": self.kind, "n": self.n, "eps": self.eps, "base": self.base.describe()}
