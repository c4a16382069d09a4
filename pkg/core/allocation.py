# core/allocation.py
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from core.coalition import as_mask
from core.errors import DomainError


@dataclass(frozen=True)
class Allocation:
    """Вектор платежей x_1..x_n (payments[i-1] - платёж игрока i)"""
    payments: Tuple[float, ...]

    @classmethod
    def from_vector(cls, values: Sequence[float], clip_tol: float = 0.0) -> "Allocation":
        """
        Решатели возвращают -1e-12 вместо нуля; значения в пределах clip_tol
        ниже нуля обрезаются до 0, остальные отрицательные - ошибка.
        """
        arr = np.asarray(values, dtype=float)
        if np.any(arr < -clip_tol):
            raise DomainError(f"Отрицательный платёж в распределении: {arr.min()}")
        arr = np.maximum(arr, 0.0)
        return cls(payments=tuple(float(v) for v in arr))

    @property
    def n(self) -> int:
        return len(self.payments)

    def __getitem__(self, player: int) -> float:
        return self.payments[player - 1]

    def as_array(self) -> np.ndarray:
        return np.array(self.payments, dtype=float)

    def paid_by(self, s) -> float:
        """x(S) = сумма платежей игроков коалиции"""
        mask = as_mask(s, self.n)
        return float(sum(v for i, v in enumerate(self.payments) if mask >> i & 1))

    def total(self) -> float:
        return float(sum(self.payments))

    def tolist(self) -> List[float]:
        return list(self.payments)

    def coalition_sums(self) -> np.ndarray:
        """x(S) для всех масок: sums[mask]"""
        sums = np.zeros(1 << self.n)
        for i, v in enumerate(self.payments):
            bit = 1 << i
            sums[bit:2 * bit] = sums[:bit] + v
        return sums
