# stability/lp.py
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from config.settings import settings
from core.errors import InfeasibleModelError, UnboundedModelError, require_capacity

logger = logging.getLogger(__name__)

Bounds = Sequence[Tuple[Optional[float], Optional[float]]]


@dataclass(frozen=True)
class LPSolution:
    value: float
    x: np.ndarray


def lp_minimize(
    objective,
    a_ub=None,
    b_ub=None,
    a_eq=None,
    b_eq=None,
    bounds: Optional[Bounds] = None,
) -> LPSolution:
    """
    min objective·x при a_ub x <= b_ub, a_eq x = b_eq и границах переменных.
    Решатель HiGHS, детерминирован при одинаковом входе.
    """
    rows = (0 if a_ub is None else len(a_ub)) + (0 if a_eq is None else len(a_eq))
    require_capacity("строк LP-модели", rows, settings.solver.max_lp_rows)

    res = linprog(
        c=np.asarray(objective, dtype=float),
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=bounds if bounds is not None else (0, None),
        method="highs",
    )
    if res.status == 2:
        logger.error(f"LP недопустима ({rows} строк): {res.message}")
        raise InfeasibleModelError(f"LP недопустима: {res.message}")
    if res.status == 3:
        logger.error(f"LP не ограничена ({rows} строк): {res.message}")
        raise UnboundedModelError(f"LP не ограничена: {res.message}")
    if res.status != 0:
        raise InfeasibleModelError(f"LP не решена (status={res.status}): {res.message}")

    logger.debug(f"LP: {rows} строк, {len(objective)} переменных, {res.nit} итераций, значение {res.fun:.10g}")
    return LPSolution(value=float(res.fun), x=np.asarray(res.x, dtype=float))
