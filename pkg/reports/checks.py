# reports/checks.py
"""
Проверки свойств для batch-режима. Каждая проверка получает InstanceContext
и возвращает Outcome: pass, fail (с пояснением) или skip, если свойство
к экземпляру неприменимо.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, Optional

import numpy as np

from config.settings import settings
from core.coalition import Coalition
from core.errors import DegenerateGameError
from games.analysis import is_subadditive, marginal_costs
from games.cost_game import CostGame, GrandPerturbedGame, MCSTGame, ProperPerturbedGame, TSGame
from metric.matrix import DistanceMatrix
from routing.trees import bird_allocation, double_tree_tour, euler_walk, mst
from routing.tsp import tour_cost
from semicore.bounds import (
    bound_cos_mst, bound_coss_avg_ir, bound_coss_max_marginal, certify_cos_witness,
)
from semicore.formulas import coss_closed_form, semicore_empty_criterion, soes_closed_form
from stability.concepts import (
    cost_of_semicore_stability_lp, cost_of_stability, optimal_alpha_core, optimal_eps_core,
    optimal_eps_semicore_lp,
)
from stability.model import Weight

logger = logging.getLogger(__name__)

# допуск для соотношений, в которые входит произведение на n или 1/α
RELATION_TOL = 1e-6
PERTURBATION_STEPS = 10
# полная проверка распределения Берда по всем коалициям
BIRD_EXHAUSTIVE_MAX_N = 10


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


@dataclass(frozen=True)
class Outcome:
    verdict: Verdict
    detail: str = ""


def _ok(condition: bool, detail: str) -> Outcome:
    return Outcome(Verdict.PASS) if condition else Outcome(Verdict.FAIL, detail)


SKIP = Outcome(Verdict.SKIP)


class InstanceContext:
    """Экземпляр batch с лениво вычисляемыми величинами (каждая считается один раз)"""

    def __init__(self, instance_id: str, g: CostGame, tol: float, matrix: Optional[DistanceMatrix] = None,
                 seed: Optional[int] = None):
        self.instance_id = instance_id
        self.g = g
        self.tol = tol
        self.matrix = matrix
        self.seed = seed

    @property
    def n(self) -> int:
        return self.g.n

    @property
    def is_tsg(self) -> bool:
        return isinstance(self.g, TSGame)

    @property
    def symmetric(self) -> Optional[bool]:
        return None if self.matrix is None else self.matrix.symmetric

    def scaled(self, tol: float) -> float:
        """Абсолютный допуск, масштабированный по c(N)"""
        return tol * max(1.0, abs(self.grand))

    @cached_property
    def grand(self) -> float:
        return self.g.grand_cost

    @cached_property
    def cos(self) -> float:
        return cost_of_stability(self.g, self.tol).value

    @cached_property
    def woec(self) -> float:
        return optimal_eps_core(self.g, Weight.WEAK, self.tol).value

    @cached_property
    def soec(self) -> float:
        return optimal_eps_core(self.g, Weight.STRONG, self.tol).value

    @cached_property
    def alpha(self) -> Optional[float]:
        try:
            return optimal_alpha_core(self.g, self.tol).value
        except DegenerateGameError:
            return None

    @cached_property
    def coss(self) -> float:
        return cost_of_semicore_stability_lp(self.g, self.tol).value

    @cached_property
    def soes(self) -> float:
        return optimal_eps_semicore_lp(self.g, Weight.STRONG, self.tol).value

    @cached_property
    def semicore_empty(self) -> bool:
        return semicore_empty_criterion(self.g, self.tol)

    @cached_property
    def bound_mst(self) -> Optional[float]:
        if not (self.is_tsg and self.symmetric):
            return None
        return bound_cos_mst(self.matrix, tol=self.tol, game=self.g).value

    @cached_property
    def bound_max_marginal(self) -> Optional[float]:
        try:
            return bound_coss_max_marginal(self.g, self.tol).value
        except DegenerateGameError:
            return None

    @cached_property
    def bound_avg_ir(self) -> Optional[float]:
        return bound_coss_avg_ir(self.matrix).value if self.is_tsg else None

    def csv_row(self) -> Dict[str, object]:
        return {
            "instance_id": self.instance_id,
            "n": self.n,
            "symmetric": "" if self.symmetric is None else self.symmetric,
            "c_grand": self.grand,
            "cos": self.cos,
            "wOeC": self.woec,
            "sOeC": self.soec,
            "alpha": "" if self.alpha is None else self.alpha,
            "coss": self.coss,
            "sOeS": self.soes,
            "bound_mst": "" if self.bound_mst is None else self.bound_mst,
            "bound_max_marginal": "" if self.bound_max_marginal is None else self.bound_max_marginal,
            "bound_avg_ir": "" if self.bound_avg_ir is None else self.bound_avg_ir,
            "semicore_empty": self.semicore_empty,
        }


def check_core_nonempty(ctx: InstanceContext) -> Outcome:
    return _ok(ctx.cos <= ctx.scaled(ctx.tol), f"CoS = {ctx.cos}")


def check_semicore_nonempty(ctx: InstanceContext) -> Outcome:
    return _ok(ctx.coss <= ctx.scaled(ctx.tol), f"CoSS = {ctx.coss}")


def check_coss_formula(ctx: InstanceContext) -> Outcome:
    if not ctx.semicore_empty:
        return SKIP
    closed = coss_closed_form(ctx.g, ctx.tol)
    return _ok(abs(closed - ctx.coss) <= ctx.scaled(ctx.tol), f"формула {closed}, LP {ctx.coss}")


def check_soes_formula(ctx: InstanceContext) -> Outcome:
    if not ctx.semicore_empty:
        return SKIP
    closed = soes_closed_form(ctx.g, ctx.tol)
    return _ok(abs(closed - ctx.soes) <= ctx.scaled(ctx.tol), f"формула {closed}, LP {ctx.soes}")


def check_coss_soes_ratio(ctx: InstanceContext) -> Outcome:
    expected = ctx.n / (ctx.n - 1) * ctx.soes
    return _ok(abs(ctx.coss - expected) <= ctx.scaled(ctx.tol), f"CoSS {ctx.coss}, n/(n-1)·sOeS {expected}")


def check_cos_weak_eps(ctx: InstanceContext) -> Outcome:
    expected = ctx.n * ctx.woec
    return _ok(abs(ctx.cos - expected) <= ctx.scaled(RELATION_TOL), f"CoS {ctx.cos}, n·wOeC {expected}")


def check_alpha_relation(ctx: InstanceContext) -> Outcome:
    if ctx.alpha is None:
        return SKIP
    expected = ctx.grand * (1 - 1 / ctx.alpha)
    return _ok(abs(ctx.cos - expected) <= ctx.scaled(RELATION_TOL), f"CoS {ctx.cos}, c(N)(1-1/α) {expected}")


def check_alpha_tsg_bound(ctx: InstanceContext) -> Outcome:
    # для любой TSG (симметричной и асимметричной): α <= 3/2, то есть CoS <= c(N)/3
    if not ctx.is_tsg or ctx.alpha is None:
        return SKIP
    if ctx.alpha > 1.5 + ctx.tol:
        return Outcome(Verdict.FAIL, f"α = {ctx.alpha} > 3/2")
    return _ok(ctx.cos <= ctx.grand / 3 + ctx.scaled(RELATION_TOL), f"CoS {ctx.cos} > c(N)/3")


def check_mst_bound(ctx: InstanceContext) -> Outcome:
    if not (ctx.is_tsg and ctx.symmetric):
        return SKIP
    m = ctx.matrix
    grand = Coalition.grand(ctx.n)
    tol = ctx.scaled(ctx.tol)
    tree_cost = mst(m, grand).cost
    doubled = double_tree_tour(m, grand).cost
    walk = tour_cost(m, euler_walk(m, grand))
    if abs(walk - 2 * tree_cost) > tol:
        return Outcome(Verdict.FAIL, f"эйлеров обход {walk} != 2·c^st {2 * tree_cost}")
    if not ctx.grand - tol <= doubled <= walk + tol:
        return Outcome(Verdict.FAIL, f"c(N)={ctx.grand}, double tree {doubled}, обход удвоенного MST {walk}")
    if ctx.n <= BIRD_EXHAUSTIVE_MAX_N:
        problems = certify_cos_witness(MCSTGame(m), bird_allocation(m), 0.0, ctx.tol)
        if problems:
            return Outcome(Verdict.FAIL, f"распределение Берда вне ядра MCST: {problems[0]}")
    return _ok(
        ctx.cos <= ctx.bound_mst + tol and ctx.bound_mst <= ctx.grand / 2 + tol,
        f"CoS {ctx.cos}, оценка {ctx.bound_mst}, c(N)/2 {ctx.grand / 2}",
    )


def check_max_marginal_bound(ctx: InstanceContext) -> Outcome:
    if not ctx.semicore_empty or ctx.bound_max_marginal is None:
        return SKIP
    return _ok(ctx.coss <= ctx.bound_max_marginal + ctx.scaled(ctx.tol),
               f"CoSS {ctx.coss} > {ctx.bound_max_marginal}")


def check_avg_ir_bound(ctx: InstanceContext) -> Outcome:
    if not ctx.is_tsg or not ctx.semicore_empty:
        return SKIP
    return _ok(ctx.coss <= ctx.bound_avg_ir + ctx.scaled(ctx.tol), f"CoSS {ctx.coss} > {ctx.bound_avg_ir}")


def check_criterion_agreement(ctx: InstanceContext) -> Outcome:
    lp_empty = ctx.coss > ctx.scaled(ctx.tol)
    return _ok(lp_empty == ctx.semicore_empty, f"критерий {ctx.semicore_empty}, LP {ctx.coss}")


def check_perturbation(ctx: InstanceContext) -> Outcome:
    if ctx.n > settings.solver.cap_subadditive or not is_subadditive(ctx.g, ctx.tol):
        return SKIP
    for eps in np.linspace(0.0, ctx.grand, PERTURBATION_STEPS):
        for wrapped in (GrandPerturbedGame(ctx.g, eps), ProperPerturbedGame(ctx.g, eps)):
            if not is_subadditive(wrapped, ctx.tol):
                return Outcome(Verdict.FAIL, f"{wrapped.kind} при ε={eps} не субаддитивна")
    if not ctx.semicore_empty:
        return Outcome(Verdict.PASS)

    tol = ctx.scaled(ctx.tol)
    lowered = GrandPerturbedGame(ctx.g, coss_closed_form(ctx.g, ctx.tol))
    if cost_of_semicore_stability_lp(lowered, ctx.tol).value > tol:
        return Outcome(Verdict.FAIL, "semicore пуст после снижения c(N) на CoSS")
    if abs(float(np.sum(marginal_costs(lowered))) - lowered.grand_cost) > tol:
        return Outcome(Verdict.FAIL, "сумма маргинальных стоимостей != c(N) после снижения")
    raised = ProperPerturbedGame(ctx.g, soes_closed_form(ctx.g, ctx.tol))
    return _ok(cost_of_semicore_stability_lp(raised, ctx.tol).value <= tol, "semicore пуст после сдвига на sOeS")


def check_subadditive(ctx: InstanceContext) -> Outcome:
    if ctx.n > settings.solver.cap_subadditive:
        return SKIP
    result = is_subadditive(ctx.g, ctx.tol)
    return _ok(bool(result), f"нарушение: {result.witness}")


CHECKS: Dict[str, Callable[[InstanceContext], Outcome]] = {
    "core_nonempty": check_core_nonempty,
    "semicore_nonempty": check_semicore_nonempty,
    "coss_formula": check_coss_formula,
    "soes_formula": check_soes_formula,
    "coss_soes_ratio": check_coss_soes_ratio,
    "cos_weak_eps": check_cos_weak_eps,
    "alpha_relation": check_alpha_relation,
    "alpha_tsg_bound": check_alpha_tsg_bound,
    "mst_bound": check_mst_bound,
    "max_marginal_bound": check_max_marginal_bound,
    "avg_ir_bound": check_avg_ir_bound,
    "criterion_agreement": check_criterion_agreement,
    "perturbation": check_perturbation,
    "subadditive": check_subadditive,
}
