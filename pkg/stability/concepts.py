# stability/concepts.py
"""
LP-модели приближённой стабильности. Переменные: x_1..x_n и ε (последний столбец).

  CoS          min ε   x(N) = c(N) - ε,  x(S) <= c(S)            S ⊂ N
  ε-core       min ε   x(N) = c(N),      x(S) <= c(S) + f(S) ε    S ⊂ N
  α-core       max x(N)                  x(S) <= c(S)            S ⊆ N,  α = c(N) / x(N)

Semicore-версии те же, но только для |S| = 1 и |S| = n - 1.
"""
import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from config.settings import resolve_tol_lp
from core.allocation import Allocation
from core.errors import ConsistencyError, DegenerateGameError, DomainError, InfeasibleModelError
from games.cost_game import CostGame
from stability.lp import lp_minimize
from stability.model import (
    ConstraintFamily, Efficiency, Selector, StabilityResult, Status, Weight, verify_witness,
)

logger = logging.getLogger(__name__)

CORE = ConstraintFamily(Selector.CORE)
SEMICORE = ConstraintFamily(Selector.SEMICORE)


@dataclass(frozen=True)
class StabilityModel:
    """Матрицы LP в форме linprog; используются и тестами для точного перерешения"""
    objective: np.ndarray
    a_ub: Optional[np.ndarray]
    b_ub: Optional[np.ndarray]
    a_eq: Optional[np.ndarray]
    b_eq: Optional[np.ndarray]
    n_vars: int


def _membership(masks, n: int) -> np.ndarray:
    return ((np.asarray(masks, dtype=np.int64)[:, None] >> np.arange(n)) & 1).astype(float)


def _family_costs(g: CostGame, family: ConstraintFamily, jobs: int) -> np.ndarray:
    masks = family.masks(g.n)
    if family.selector is Selector.CORE:
        return g.all_costs(jobs=jobs)[masks]
    return np.array([g.cost(mask) for mask in masks])


def _require_semicore_size(g: CostGame) -> None:
    if g.n < 2:
        raise DomainError("Semicore-концепции требуют n >= 2")


def build_model(g: CostGame, family: ConstraintFamily, efficiency: Efficiency, jobs: int = 1) -> StabilityModel:
    n = g.n
    masks = family.masks(n)
    costs = _family_costs(g, family, jobs)
    grand = g.grand_cost
    rows = _membership(masks, n)

    if efficiency is Efficiency.BUDGET:
        # max x(N) <=> min -x(N); x(N) <= c(N) добавляется явно
        a_ub = np.vstack([rows, np.ones((1, n))])
        b_ub = np.append(costs, grand)
        return StabilityModel(-np.ones(n), a_ub, b_ub, None, None, n)

    objective = np.zeros(n + 1)
    objective[-1] = 1.0
    if efficiency is Efficiency.SUBSIDY:
        a_eq = np.ones((1, n + 1))
        slack = np.zeros(len(masks))
    else:
        a_eq = np.append(np.ones(n), 0.0)[None, :]
        slack = np.array([family.slack(mask, cost) for mask, cost in zip(masks, costs)])
    a_ub = np.hstack([rows, -slack[:, None]]) if masks else None
    b_ub = costs if masks else None
    return StabilityModel(objective, a_ub, b_ub, a_eq, np.array([grand]), n + 1)


def _solve(
    g: CostGame,
    concept: str,
    family: ConstraintFamily,
    efficiency: Efficiency,
    tol: Optional[float],
    jobs: int,
) -> StabilityResult:
    tol = resolve_tol_lp(tol)
    model = build_model(g, family, efficiency, jobs)
    try:
        solution = lp_minimize(model.objective, model.a_ub, model.b_ub, model.a_eq, model.b_eq)
    except InfeasibleModelError as e:
        if family.weight is not Weight.COST:
            raise
        # при c(S) = 0 строка x(S) <= (1 + ε)·0 не ослабляется никаким ε
        raise DomainError(f"{concept} (f(S) = c(S)): ни при каком ε стабильного x нет: {e}") from e
    value = max(0.0, float(solution.x[-1]))
    result = StabilityResult(
        concept=concept,
        value=value,
        witness=Allocation.from_vector(solution.x[:g.n], clip_tol=tol),
        status=Status.STABILIZED,
        family=family,
        efficiency=efficiency,
    )
    # проверка при значении решателя, до округления малых ε к нулю
    _certify(g, result, tol)
    if value <= tol:
        result = replace(result, value=0.0, status=Status.ALREADY_STABLE)
    logger.debug(f"{concept} ({family.label()}): {value:.10g}")
    return result


def _certify(g: CostGame, result: StabilityResult, tol: float) -> None:
    problems = verify_witness(g, result, tol)
    if problems:
        logger.error(f"{result.concept}: свидетель не прошёл проверку: {problems[:3]}")
        raise ConsistencyError(f"{result.concept}: свидетель нарушает {len(problems)} ограничений")


def cost_of_stability(g: CostGame, tol: Optional[float] = None, jobs: int = 1) -> StabilityResult:
    """CoS: минимальная субсидия ε, при которой x(N) = c(N) - ε допускает стабильное x"""
    return _solve(g, "cos", CORE, Efficiency.SUBSIDY, tol, jobs)


def core_element(g: CostGame, tol: Optional[float] = None, jobs: int = 1) -> Optional[Allocation]:
    """Элемент ядра или None, если ядро пусто (решается через CoS = 0)"""
    result = cost_of_stability(g, tol, jobs)
    return result.witness if result.stable else None


def optimal_eps_core(
    g: CostGame,
    weight: Weight = Weight.STRONG,
    tol: Optional[float] = None,
    jobs: int = 1,
) -> StabilityResult:
    """sOeC / wOeC / ε-core с f(S) = c(S)"""
    weight = Weight(weight)
    return _solve(g, "eps-core", ConstraintFamily(Selector.CORE, weight), Efficiency.EXACT, tol, jobs)


def _alpha(
    g: CostGame,
    concept: str,
    subsidy: StabilityResult,
    family: ConstraintFamily,
    tol: Optional[float],
    jobs: int,
) -> StabilityResult:
    tol = resolve_tol_lp(tol)
    grand = g.grand_cost
    if grand <= 0:
        raise DegenerateGameError(f"{concept}: c(N) = 0, α не определено")
    paid = grand - subsidy.value
    if paid <= tol:
        raise DegenerateGameError(f"{concept}: стабильно можно собрать только 0, α не ограничено")
    alpha_from_subsidy = grand / paid

    # прямая модель: max x(N) при x(S) <= c(S)
    model = build_model(g, family, Efficiency.BUDGET, jobs)
    solution = lp_minimize(model.objective, model.a_ub, model.b_ub)
    direct = -solution.value
    if abs(direct - paid) > tol * max(1.0, grand):
        raise ConsistencyError(f"{concept}: max x(N) = {direct}, а c(N) - ε = {paid}")

    alpha = alpha_from_subsidy
    status = Status.STABILIZED
    if alpha <= 1.0 + tol:
        alpha, status = 1.0, Status.ALREADY_STABLE
    result = StabilityResult(
        concept=concept,
        value=alpha,
        witness=Allocation.from_vector(solution.x, clip_tol=tol),
        status=status,
        family=family,
        efficiency=Efficiency.BUDGET,
        alpha=alpha,
    )
    _certify(g, result, tol)
    return result


def optimal_alpha_core(g: CostGame, tol: Optional[float] = None, jobs: int = 1) -> StabilityResult:
    """OaC = c(N) / (c(N) - CoS), сверяется с прямой моделью max x(N)"""
    if g.grand_cost <= 0:
        raise DegenerateGameError("alpha: c(N) = 0, α не определено")
    return _alpha(g, "alpha", cost_of_stability(g, tol, jobs), CORE, tol, jobs)


def cost_of_semicore_stability_lp(g: CostGame, tol: Optional[float] = None) -> StabilityResult:
    """CoSS: как CoS, но только индивидуальная рациональность и маргинальные ограничения"""
    _require_semicore_size(g)
    return _solve(g, "coss", SEMICORE, Efficiency.SUBSIDY, tol, 1)


def semicore_element(g: CostGame, tol: Optional[float] = None) -> Optional[Allocation]:
    result = cost_of_semicore_stability_lp(g, tol)
    return result.witness if result.stable else None


def optimal_eps_semicore_lp(
    g: CostGame,
    weight: Weight = Weight.STRONG,
    tol: Optional[float] = None,
) -> StabilityResult:
    """sOeS / wOeS (и вариант f(S) = c(S)) по семейству semicore"""
    _require_semicore_size(g)
    weight = Weight(weight)
    return _solve(g, "eps-semicore", ConstraintFamily(Selector.SEMICORE, weight), Efficiency.EXACT, tol, 1)


def optimal_alpha_semicore(g: CostGame, tol: Optional[float] = None) -> StabilityResult:
    """α-semicore: c(N) / (c(N) - CoSS), сверяется с max x(N) по семейству semicore"""
    _require_semicore_size(g)
    if g.grand_cost <= 0:
        raise DegenerateGameError("alpha-semicore: c(N) = 0, α не определено")
    return _alpha(g, "alpha-semicore", cost_of_semicore_stability_lp(g, tol), SEMICORE, tol, 1)
