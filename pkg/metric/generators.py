# metric/generators.py
import logging

import numpy as np

from core.errors import DomainError, EmptyInstanceError
from metric.matrix import DistanceMatrix, metric_closure

logger = logging.getLogger(__name__)

# Идентификатор генератора, записывается в файл экземпляра
RNG_ALGORITHM = "numpy-pcg64"
ASYMMETRIC_RANGE = (1.0, 100.0)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gen_euclidean(n: int, seed: int, box: float = 100.0) -> DistanceMatrix:
    """
    n + 1 точек равномерно в [0, box]^2, точка 0 - депо.
    Одинаковые (n, seed, box) дают побитово одинаковую матрицу.
    """
    if n < 1:
        raise EmptyInstanceError("gen_euclidean: нужен хотя бы один игрок")
    if box <= 0:
        raise DomainError("gen_euclidean: box должен быть положительным")
    points = make_rng(seed).uniform(0.0, box, size=(n + 1, 2))
    logger.debug(f"gen_euclidean n={n} seed={seed} box={box}")
    return points_metric(points)


def gen_asymmetric_metric(n: int, seed: int) -> DistanceMatrix:
    """Равномерные дуги в [1, 100], затем метрическое замыкание"""
    if n < 1:
        raise EmptyInstanceError("gen_asymmetric_metric: нужен хотя бы один игрок")
    low, high = ASYMMETRIC_RANGE
    raw = make_rng(seed).uniform(low, high, size=(n + 1, n + 1))
    np.fill_diagonal(raw, 0.0)
    logger.debug(f"gen_asymmetric_metric n={n} seed={seed}")
    return metric_closure(raw)


def uniform_metric(n: int, value: float = 1.0) -> DistanceMatrix:
    d = np.full((n + 1, n + 1), float(value))
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix.from_array(d)


def points_metric(points) -> DistanceMatrix:
    """Евклидова матрица по заданным точкам (первая точка - депо)"""
    # sqrt((a-b)^2) совпадает с sqrt((b-a)^2), симметрия точная
    p = np.asarray(points, dtype=float)
    diff = p[:, None, :] - p[None, :, :]
    return DistanceMatrix.from_array(np.sqrt(np.sum(diff * diff, axis=-1)))
