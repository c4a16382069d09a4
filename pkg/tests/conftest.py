# tests/conftest.py
from fractions import Fraction

import pytest

from core.coalition import Coalition
from games.cost_game import TableGame
from metric.generators import points_metric, uniform_metric


def g3_cost(s: Coalition) -> float:
    """c({i}) = 6, c(пара) = 5, c(N) = 10"""
    return {1: 6.0, 2: 5.0, 3: 10.0}[s.size]


@pytest.fixture
def g3():
    return TableGame.from_function(3, g3_cost)


@pytest.fixture
def collinear():
    """Депо (0,0), игроки (0,1), (0,2), (0,3)"""
    return points_metric([(0, 0), (0, 1), (0, 2), (0, 3)])


@pytest.fixture
def uniform4():
    return uniform_metric(4)


def exact_lp_value(model):
    """
    Точное перерешение LP-модели в рациональной арифметике (pycddlib).
    Строки cdd: b - A x >= 0; равенства - парой неравенств; x >= 0.
    """
    cdd = pytest.importorskip("cdd")
    width = model.n_vars
    rows = []
    if model.a_ub is not None:
        for a, b in zip(model.a_ub, model.b_ub):
            rows.append([Fraction(float(b))] + [-Fraction(float(v)) for v in a])
    if model.a_eq is not None:
        for a, b in zip(model.a_eq, model.b_eq):
            rows.append([Fraction(float(b))] + [-Fraction(float(v)) for v in a])
            rows.append([-Fraction(float(b))] + [Fraction(float(v)) for v in a])
    for j in range(width):
        rows.append([Fraction(0)] + [Fraction(int(k == j)) for k in range(width)])

    mat = cdd.Matrix(rows, number_type="fraction")
    mat.obj_type = cdd.LPObjType.MIN
    mat.obj_func = [Fraction(0)] + [Fraction(float(v)) for v in model.objective]
    lp = cdd.LinProg(mat)
    lp.solve()
    assert lp.status == cdd.LPStatusType.OPTIMAL
    return Fraction(lp.obj_value)
