# semicore/bounds.py
"""
Верхние оценки CoS и CoSS со свидетелями.

Общая схема: вектор x с Σx = c(N) - ε, удовлетворяющий ограничениям
ядра (semicore) исходной игры, доказывает CoS <= ε (CoSS <= ε).
Оценки ниже строят такой x явно и прогоняют его через certify_*.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from config.settings import resolve_tol_lp, settings
from core.allocation import Allocation
from core.coalition import Coalition
from core.errors import ConsistencyError, DegenerateGameError, DomainError, PreconditionError
from games.analysis import individual_rationalities, marginal_costs
from games.cost_game import CostGame, TSGame
from metric.matrix import DistanceMatrix
from routing.trees import _require_symmetric, bird_allocation, mst
from semicore.formulas import semicore_empty_criterion
from stability.concepts import (
    CORE, SEMICORE, cost_of_semicore_stability_lp, cost_of_stability, optimal_eps_semicore_lp,
)
from stability.model import Efficiency, Weight, iter_violations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bound:
    value: float
    witness: Optional[Allocation] = None
    player: Optional[int] = None          # выбранный игрок M (1..n), если оценка его использует
    grand_cost: Optional[float] = None
    tree_cost: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            "value": self.value,
            "witness": None if self.witness is None else self.witness.tolist(),
            "player": self.player,
            "grand_cost": self.grand_cost,
            "tree_cost": self.tree_cost,
        }


def certify_cos_witness(g: CostGame, x: Allocation, eps: float, tol: Optional[float] = None) -> List[str]:
    """Нарушения для утверждения CoS <= eps со свидетелем x (пусто - утверждение доказано)"""
    return list(iter_violations(g, x, CORE, Efficiency.SUBSIDY, eps, tol))


def certify_coss_witness(g: CostGame, x: Allocation, eps: float, tol: Optional[float] = None) -> List[str]:
    """То же для CoSS: только |S| = 1 и |S| = n - 1"""
    return list(iter_violations(g, x, SEMICORE, Efficiency.SUBSIDY, eps, tol))


def bound_cos_mst(
    m: DistanceMatrix,
    certify: bool = True,
    tol: Optional[float] = None,
    game: Optional[TSGame] = None,
) -> Bound:
    """
    CoS <= c(N) - c^st(N) <= c(N)/2 для симметричной TSG.
    Свидетель - распределение Берда: оно в ядре MCST-игры,
    а c^st(S) <= c(S) для любого тура.
    game - уже построенная TSG над m, чтобы не считать туры повторно.
    """
    _require_symmetric(m, "bound_cos_mst")
    tol = resolve_tol_lp(tol)
    if game is None:
        game = TSGame(m)
    elif game.matrix is not m:
        raise DomainError("bound_cos_mst: игра построена над другой матрицей")
    grand = game.grand_cost
    tree = mst(m, Coalition.grand(m.n))
    witness = bird_allocation(m)
    eps = grand - tree.cost
    if eps > grand / 2 + tol * max(1.0, grand):
        raise ConsistencyError(f"c(N) - c^st(N) = {eps} больше c(N)/2 = {grand / 2}")

    if certify and m.n <= settings.solver.cap_table:
        problems = certify_cos_witness(game, witness, eps, tol)
        if problems:
            logger.error(f"bound_cos_mst: свидетель Берда не прошёл проверку: {problems[:3]}")
            raise ConsistencyError(f"bound_cos_mst: {len(problems)} нарушений")
    logger.debug(f"bound_cos_mst: c(N)={grand:.6g}, c^st(N)={tree.cost:.6g}, ε={eps:.6g}")
    return Bound(value=eps, witness=witness, grand_cost=grand, tree_cost=tree.cost)


def max_marginal_player(g: CostGame) -> int:
    """Игрок с наибольшей маргинальной стоимостью (наименьший номер при равенстве)"""
    return int(np.argmax(marginal_costs(g))) + 1


def max_ir_player(m: DistanceMatrix) -> int:
    """Игрок с наибольшей индивидуальной рациональностью d[0][i] + d[i][0]"""
    d = m.entries
    return int(np.argmax(d[0, 1:] + d[1:, 0])) + 1


def bound_coss_max_marginal(g: CostGame, tol: Optional[float] = None) -> Bound:
    """
    CoSS <= max_j (c(N) - c(N \\ {j})). Свидетель пропорционален c({i}):
    x_i = c(N \\ {M}) / Σ c({j}) · c({i}).
    """
    if g.n < 2:
        raise DomainError("bound_coss_max_marginal: нужно n >= 2")
    tol = resolve_tol_lp(tol)
    player = max_marginal_player(g)
    value = float(marginal_costs(g)[player - 1])
    singles = individual_rationalities(g)
    total = float(np.sum(singles))
    if total <= 0:
        raise DegenerateGameError("bound_coss_max_marginal: Σ c({j}) = 0")

    rest = g.cost(g.grand_mask ^ (1 << (player - 1)))
    witness = Allocation.from_vector(rest / total * singles)
    problems = certify_coss_witness(g, witness, value, tol)
    if problems:
        # для субаддитивной игры c(N \ {M}) <= Σ c({j}) и проверка проходит
        raise PreconditionError(f"bound_coss_max_marginal: свидетель не проходит ({problems[0]}); игра не субаддитивна?")
    return Bound(value=value, witness=witness, player=player)


def bound_coss_avg_ir(m: DistanceMatrix) -> Bound:
    """Среднее n - 1 наименьших индивидуальных рациональностей; без решения TSP"""
    if m.n < 2:
        raise DomainError("bound_coss_avg_ir: нужно n >= 2")
    d = m.entries
    rationalities = d[0, 1:] + d[1:, 0]
    player = max_ir_player(m)
    value = (float(np.sum(rationalities)) - float(rationalities[player - 1])) / (m.n - 1)
    return Bound(value=value, player=player)


@dataclass(frozen=True)
class BoundsReport:
    exact_coss: float
    exact_soes: float
    semicore_empty: bool
    coss_max_marginal: Optional[Bound] = None
    cos_mst: Optional[Bound] = None
    coss_avg_ir: Optional[Bound] = None
    exact_cos: Optional[float] = None
    grand_cost: float = 0.0
    tol: float = 1e-7                    # допуск, с которым считался отчёт

    @property
    def coss_le_cos(self) -> Optional[bool]:
        if self.exact_cos is None:
            return None
        return self.exact_coss <= self.exact_cos + self.tol * max(1.0, abs(self.grand_cost))

    def to_dict(self) -> Dict:
        mst_bound = self.cos_mst
        return {
            "cos_mst_bound": None if mst_bound is None else mst_bound.value,
            "cos_mst_witness": None if mst_bound is None else mst_bound.witness.tolist(),
            "mst_grand_cost": None if mst_bound is None else mst_bound.tree_cost,
            "coss_max_marginal_bound": None if self.coss_max_marginal is None else self.coss_max_marginal.value,
            "coss_max_marginal_witness": (
                None if self.coss_max_marginal is None else self.coss_max_marginal.witness.tolist()
            ),
            "max_marginal_player": None if self.coss_max_marginal is None else self.coss_max_marginal.player,
            "coss_avg_ir_bound": None if self.coss_avg_ir is None else self.coss_avg_ir.value,
            "max_ir_player": None if self.coss_avg_ir is None else self.coss_avg_ir.player,
            "exact_coss": self.exact_coss,
            "exact_soes": self.exact_soes,
            "exact_cos": self.exact_cos,
            "semicore_empty": self.semicore_empty,
            "coss_le_cos": self.coss_le_cos,
        }


def bounds_report(
    g: CostGame,
    m: Optional[DistanceMatrix] = None,
    exact_cos: Optional[float] = None,
    tol: Optional[float] = None,
    jobs: int = 1,
) -> BoundsReport:
    """Все применимые оценки вместе с точными CoSS, sOeS и (при n <= cap_table) CoS"""
    if g.n < 2:
        raise DomainError("bounds_report: нужно n >= 2")
    tol = resolve_tol_lp(tol)
    if m is None and isinstance(g, TSGame):
        m = g.matrix
    is_tsg = isinstance(g, TSGame)

    try:
        marginal = bound_coss_max_marginal(g, tol)
    except (PreconditionError, DegenerateGameError) as e:
        logger.warning(f"Оценка по максимальной маргинальной стоимости пропущена: {e}")
        marginal = None

    cos_mst = None
    if is_tsg and m.symmetric:
        cos_mst = bound_cos_mst(m, tol=tol, game=g if g.matrix is m else None)
    avg_ir = bound_coss_avg_ir(m) if is_tsg else None
    if exact_cos is None and g.n <= settings.solver.cap_table:
        exact_cos = cost_of_stability(g, tol, jobs).value

    return BoundsReport(
        exact_coss=cost_of_semicore_stability_lp(g, tol).value,
        exact_soes=optimal_eps_semicore_lp(g, Weight.STRONG, tol).value,
        semicore_empty=semicore_empty_criterion(g, tol),
        coss_max_marginal=marginal,
        cos_mst=cos_mst,
        coss_avg_ir=avg_ir,
        exact_cos=exact_cos,
        grand_cost=g.grand_cost,
        tol=tol,
    )
