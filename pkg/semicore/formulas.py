# semicore/formulas.py
"""
Замкнутые формулы для субаддитивных игр с пустым semicore.

Для таких игр LP по семейству semicore решается явно:
CoSS = c(N) - Σ c(N \\ {j}) / (n - 1), sOeS = (n - 1)/n · CoSS.
"""
import logging
from typing import Optional

import numpy as np

from config.settings import resolve_tol_lp, settings
from core.errors import DomainError, PreconditionError
from games.analysis import is_subadditive, leave_one_out_costs, marginal_costs
from games.cost_game import CostGame

logger = logging.getLogger(__name__)


def semicore_empty_criterion(g: CostGame, tol: Optional[float] = None) -> bool:
    """Semicore пуст <=> сумма маргинальных стоимостей больше c(N)"""
    if g.n < 2:
        raise DomainError("Критерий пустоты semicore требует n >= 2")
    tol = resolve_tol_lp(tol)
    return bool(np.sum(marginal_costs(g)) > g.grand_cost + tol)


def _require_empty_semicore(g: CostGame, what: str, tol: float, check_subadditive: bool) -> None:
    if g.n < 2:
        raise DomainError(f"{what}: нужно n >= 2")
    if check_subadditive and g.n <= settings.solver.cap_subadditive:
        check = is_subadditive(g, tol)
        if not check:
            left, right = check.witness
            raise PreconditionError(f"{what}: игра не субаддитивна ({left} и {right})")
    if not semicore_empty_criterion(g, tol):
        raise PreconditionError(
            f"{what}: semicore не пуст, формула неприменима; используйте LP (ответ 0)"
        )


def coss_closed_form(g: CostGame, tol: Optional[float] = None, check_subadditive: bool = False) -> float:
    tol = resolve_tol_lp(tol)
    _require_empty_semicore(g, "coss_closed_form", tol, check_subadditive)
    value = g.grand_cost - float(np.sum(leave_one_out_costs(g))) / (g.n - 1)
    logger.debug(f"CoSS (формула) = {value:.10g}, n={g.n}")
    return max(0.0, value)


def soes_closed_form(g: CostGame, tol: Optional[float] = None, check_subadditive: bool = False) -> float:
    tol = resolve_tol_lp(tol)
    _require_empty_semicore(g, "soes_closed_form", tol, check_subadditive)
    n = g.n
    value = (n - 1) / n * g.grand_cost - float(np.sum(leave_one_out_costs(g))) / n
    logger.debug(f"sOeS (формула) = {value:.10g}, n={n}")
    return max(0.0, value)
