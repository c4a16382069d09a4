# metric/matrix.py
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config.settings import resolve_tol_metric
from core.errors import DomainError, EmptyInstanceError, MetricViolationError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    kind: str                          # "diagonal" | "negative" | "triangle"
    indices: Tuple[int, ...]           # (i, j) или (i, k, j) для пути i -> k -> j
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    symmetric: bool = True

    @property
    def valid(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.valid:
            return f"валидна, {'симметричная' if self.symmetric else 'асимметричная'}"
        kinds = {}
        for v in self.violations:
            kinds[v.kind] = kinds.get(v.kind, 0) + 1
        return "нарушения: " + ", ".join(f"{k}={c}" for k, c in sorted(kinds.items()))


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """
    Матрица расстояний над депо 0 и игроками 1..n.
    Массив entries только для чтения; size = n + 1.
    """
    entries: np.ndarray
    symmetric: bool

    @classmethod
    def from_array(cls, array, validate: bool = True, tol: Optional[float] = None) -> "DistanceMatrix":
        arr = np.array(array, dtype=float)
        report = validate_metric(arr, tol=tol)
        if validate and not report.valid:
            raise MetricViolationError(f"Матрица не метрическая: {report.summary()}", report)
        arr.setflags(write=False)
        return cls(entries=arr, symmetric=report.symmetric)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.size - 1

    def players(self) -> range:
        return range(1, self.size)

    def __getitem__(self, ij):
        return self.entries[ij]

    def tolist(self) -> List[List[float]]:
        return [[float(v) for v in row] for row in self.entries]


def _as_square(m) -> np.ndarray:
    arr = m.entries if isinstance(m, DistanceMatrix) else np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"Ожидалась квадратная матрица, получено {arr.shape}")
    return arr


def validate_metric(m, tol: Optional[float] = None) -> ValidationReport:
    """
    Полная проверка: диагональ, неотрицательность, все упорядоченные тройки.

    Args:
        m: DistanceMatrix или квадратный массив
        tol: допуск (по умолчанию tol_metric из настроек)
    """
    tol = resolve_tol_metric(tol)
    d = _as_square(m)
    if d.shape[0] < 2:
        raise ShapeError("Нужна матрица размера не меньше 2 (депо и хотя бы один игрок)")

    violations: List[Violation] = []
    for i in np.flatnonzero(np.abs(np.diag(d)) > tol):
        violations.append(Violation("diagonal", (int(i), int(i)), float(abs(d[i, i]))))
    for i, j in zip(*np.nonzero(d < -tol)):
        violations.append(Violation("negative", (int(i), int(j)), float(-d[i, j])))

    # excess[i, k, j] = d[i, j] - d[i, k] - d[k, j]
    excess = d[:, None, :] - d[:, :, None] - d[None, :, :]
    for i, k, j in zip(*np.nonzero(excess > tol)):
        violations.append(Violation("triangle", (int(i), int(k), int(j)), float(excess[i, k, j])))

    symmetric = bool(np.all(np.abs(d - d.T) <= tol))
    if violations:
        logger.debug(f"validate_metric: {len(violations)} нарушений")
    return ValidationReport(violations=violations, symmetric=symmetric)


def metric_closure(m, tol: Optional[float] = None) -> DistanceMatrix:
    """Кратчайшие пути в полном орграфе (Флойд-Уоршелл), результат <= m поэлементно"""
    d = np.array(_as_square(m), dtype=float)
    if d.shape[0] < 2:
        raise EmptyInstanceError("Нужна матрица размера не меньше 2")
    if np.any(d < 0):
        raise DomainError("metric_closure: отрицательные расстояния недопустимы")
    if np.any(np.diag(d) != 0):
        raise DomainError("metric_closure: диагональ должна быть нулевой")
    for k in range(d.shape[0]):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return DistanceMatrix.from_array(d, validate=True, tol=tol)
