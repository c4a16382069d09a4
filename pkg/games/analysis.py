# games/analysis.py
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.settings import resolve_tol_lp, settings
from core.coalition import Coalition
from core.errors import DomainError, require_capacity
from games.cost_game import CostGame, TSGame

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubadditivityCheck:
    subadditive: bool
    witness: Optional[Tuple[Coalition, Coalition]] = None
    gap: float = 0.0           # c(S ∪ S') - c(S) - c(S') для свидетеля

    def __bool__(self) -> bool:
        return self.subadditive


def is_subadditive(g: CostGame, tol: Optional[float] = None, jobs: int = 1) -> SubadditivityCheck:
    """
    c(S) + c(S') >= c(S ∪ S') для всех упорядоченных пар непустых S, S',
    включая пересекающиеся. Первый найденный нарушитель (по возрастанию масок) - свидетель.
    """
    require_capacity("проверка субаддитивности (игроков)", g.n, settings.solver.cap_subadditive)
    tol = resolve_tol_lp(tol)
    table = g.all_costs(jobs=jobs)
    masks = np.arange(1, 1 << g.n)
    for s in masks:
        gap = table[s | masks] - table[s] - table[masks]
        bad = np.flatnonzero(gap > tol)
        if bad.size:
            other = int(masks[bad[0]])
            logger.debug(f"Нарушение субаддитивности: mask {s} и {other}")
            return SubadditivityCheck(
                subadditive=False,
                witness=(Coalition(int(s), g.n), Coalition(other, g.n)),
                gap=float(gap[bad[0]]),
            )
    return SubadditivityCheck(subadditive=True)


def marginal_costs(g: CostGame) -> np.ndarray:
    """m[i-1] = c(N) - c(N \\ {i}); для таблиц может быть отрицательным"""
    if g.n < 2:
        raise DomainError("Маргинальные стоимости требуют n >= 2")
    grand = g.grand_cost
    values = np.array([grand - g.cost(g.grand_mask ^ (1 << i)) for i in range(g.n)])
    if np.any(values < 0):
        logger.warning(f"Отрицательные маргинальные стоимости: {values.min():.6g} ({g.kind})")
    return values


def individual_rationalities(g: CostGame) -> np.ndarray:
    """c({i}) для всех игроков; для TSG это d[0][i] + d[i][0]"""
    if isinstance(g, TSGame):
        d = g.matrix.entries
        return np.array([d[0, i] + d[i, 0] for i in g.matrix.players()])
    return np.array([g.cost(1 << i) for i in range(g.n)])


def leave_one_out_costs(g: CostGame) -> np.ndarray:
    """c(N \\ {i}) для всех игроков"""
    if g.n < 2:
        raise DomainError("Коалиции N \\ {i} требуют n >= 2")
    return np.array([g.cost(g.grand_mask ^ (1 << i)) for i in range(g.n)])
