# stability/model.py
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional

import numpy as np

from config.settings import resolve_tol_lp
from core.allocation import Allocation
from games.cost_game import CostGame


class Weight(str, Enum):
    STRONG = "strong"          # f(S) = 1
    WEAK = "weak"              # f(S) = |S|
    COST = "cost"              # f(S) = c(S)


class Selector(str, Enum):
    CORE = "core"              # все собственные подмножества
    SEMICORE = "semicore"      # |S| = 1 и |S| = n - 1


class Status(str, Enum):
    ALREADY_STABLE = "already stable"
    STABILIZED = "stabilized at value"


class Efficiency(str, Enum):
    SUBSIDY = "subsidy"        # x(N) = c(N) - ε, x(S) <= c(S)
    EXACT = "exact"            # x(N) = c(N), x(S) <= c(S) + f(S) ε
    BUDGET = "budget"          # x(N) >= c(N) / α, x(S) <= c(S)


@dataclass(frozen=True)
class ConstraintFamily:
    selector: Selector
    weight: Weight = Weight.STRONG

    def masks(self, n: int) -> List[int]:
        """Маски коалиций семейства (без N), по возрастанию, без повторов"""
        full = (1 << n) - 1
        if self.selector is Selector.CORE:
            return list(range(1, full))
        singles = {1 << i for i in range(n)}
        complements = {full ^ (1 << i) for i in range(n)}
        return sorted((singles | complements) - {0, full})

    def slack(self, mask: int, cost: float) -> float:
        if self.weight is Weight.STRONG:
            return 1.0
        if self.weight is Weight.WEAK:
            return float(bin(mask).count("1"))
        return float(cost)

    def label(self) -> str:
        return f"{self.selector.value}/{self.weight.value}"


@dataclass(frozen=True)
class StabilityResult:
    concept: str
    value: float                     # ε (или α для концепций alpha)
    witness: Allocation
    status: Status
    family: ConstraintFamily
    efficiency: Efficiency
    alpha: Optional[float] = None

    @property
    def stable(self) -> bool:
        return self.status is Status.ALREADY_STABLE

    def to_dict(self) -> dict:
        return {
            "concept": self.concept,
            "family": self.family.selector.value,
            "weight": self.family.weight.value,
            "value": self.value,
            "alpha": self.alpha,
            "witness": self.witness.tolist(),
            "status": self.status.value,
        }


def iter_violations(
    g: CostGame,
    witness: Allocation,
    family: ConstraintFamily,
    efficiency: Efficiency,
    value: float,
    tol: Optional[float] = None,
) -> Iterator[str]:
    """Подстановка свидетеля во все ограничения семейства при заявленном значении"""
    tol = resolve_tol_lp(tol)
    x = witness.as_array()
    scale = max(1.0, abs(g.grand_cost))
    if np.any(x < -tol):
        yield "x_i >= 0"
    total = float(np.sum(x))
    grand = g.grand_cost
    if efficiency is Efficiency.SUBSIDY and abs(total - (grand - value)) > tol * scale:
        yield f"x(N) = c(N) - ε: {total} != {grand - value}"
    if efficiency is Efficiency.EXACT and abs(total - grand) > tol * scale:
        yield f"x(N) = c(N): {total} != {grand}"
    if efficiency is Efficiency.BUDGET and total < grand / value - tol * scale:
        yield f"x(N) >= c(N)/α: {total} < {grand / value}"

    relaxed = efficiency is Efficiency.EXACT
    sums = witness.coalition_sums()
    for mask in family.masks(g.n):
        cost = g.cost(mask)
        bound = cost + (family.slack(mask, cost) * value if relaxed else 0.0)
        paid = float(sums[mask])
        if paid > bound + tol * max(1.0, abs(bound)):
            yield f"x(S) <= bound для mask={mask}: {paid} > {bound}"


def verify_witness(g: CostGame, result: StabilityResult, tol: Optional[float] = None) -> List[str]:
    """Список нарушенных ограничений; пустой список - свидетель корректен"""
    return list(iter_violations(g, result.witness, result.family, result.efficiency, result.value, tol))
