from fractions import Fraction

import pytest
from conftest import exact_lp_value
from hypothesis import given, settings as hsettings, strategies as st

from core.errors import DegenerateGameError, DomainError
from games.cost_game import TableGame, TSGame
from games.generators import empty_semicore_table, random_subadditive_table
from metric.generators import gen_asymmetric_metric, gen_euclidean, make_rng
from stability.concepts import (
    CORE, SEMICORE, build_model, core_element, cost_of_semicore_stability_lp, cost_of_stability,
    optimal_alpha_core, optimal_alpha_semicore, optimal_eps_core, optimal_eps_semicore_lp,
    semicore_element,
)
from stability.model import (
    ConstraintFamily, Efficiency, Selector, Status, Weight, verify_witness,
)

G3_EXPECTED = {
    "cos": 2.5,
    "woec": 5 / 6,
    "soec": 5 / 3,
    "alpha": 4 / 3,
    "coss": 2.5,
    "soes": 5 / 3,
}


def test_g3_regression_vector(g3):
    assert cost_of_stability(g3).value == pytest.approx(G3_EXPECTED["cos"], abs=1e-9)
    assert optimal_eps_core(g3, Weight.WEAK).value == pytest.approx(G3_EXPECTED["woec"], abs=1e-9)
    assert optimal_eps_core(g3, Weight.STRONG).value == pytest.approx(G3_EXPECTED["soec"], abs=1e-9)
    assert optimal_alpha_core(g3).value == pytest.approx(G3_EXPECTED["alpha"], abs=1e-9)
    assert cost_of_semicore_stability_lp(g3).value == pytest.approx(G3_EXPECTED["coss"], abs=1e-9)
    assert optimal_eps_semicore_lp(g3, Weight.STRONG).value == pytest.approx(G3_EXPECTED["soes"], abs=1e-9)


def test_g3_exact_rational_resolve(g3):
    """Те же модели в рациональной арифметике дают точные дроби"""
    assert exact_lp_value(build_model(g3, CORE, Efficiency.SUBSIDY)) == Fraction(5, 2)
    weak = ConstraintFamily(Selector.CORE, Weight.WEAK)
    assert exact_lp_value(build_model(g3, weak, Efficiency.EXACT)) == Fraction(5, 6)
    assert exact_lp_value(build_model(g3, CORE, Efficiency.EXACT)) == Fraction(5, 3)
    assert exact_lp_value(build_model(g3, CORE, Efficiency.BUDGET)) == Fraction(-15, 2)
    assert exact_lp_value(build_model(g3, SEMICORE, Efficiency.SUBSIDY)) == Fraction(5, 2)


def test_g3_statuses_and_witnesses(g3):
    result = cost_of_stability(g3)
    assert result.status is Status.STABILIZED
    assert result.witness.total() == pytest.approx(7.5)
    assert verify_witness(g3, result) == []
    assert core_element(g3) is None
    assert semicore_element(g3) is None
    data = result.to_dict()
    assert set(data) == {"concept", "family", "weight", "value", "alpha", "witness", "status"}
    assert data["status"] == "stabilized at value"


def test_cost_proportional_eps(g3):
    result = optimal_eps_core(g3, Weight.COST)
    # пары: 2·10 <= 15 + 15ε
    assert result.value == pytest.approx(1 / 3, abs=1e-9)
    assert verify_witness(g3, result) == []
    assert optimal_eps_semicore_lp(g3, "cost").value == pytest.approx(1 / 3, abs=1e-9)


def test_alpha_semicore(g3):
    result = optimal_alpha_semicore(g3)
    assert result.value == pytest.approx(4 / 3, abs=1e-9)
    assert result.alpha == result.value
    assert result.witness.total() == pytest.approx(7.5)


def test_collinear_core_is_nonempty(collinear):
    g = TSGame(collinear)
    result = cost_of_stability(g)
    assert result.status is Status.ALREADY_STABLE
    assert result.value == 0.0
    x = core_element(g)
    assert x is not None
    assert x.total() == pytest.approx(6.0)
    alpha = optimal_alpha_core(g)
    assert alpha.value == 1.0
    assert alpha.stable


def test_verify_witness_detects_tampering(g3):
    result = cost_of_stability(g3)
    tampered = type(result)(**{**result.__dict__, "value": 1.0})
    assert verify_witness(g3, tampered)


def test_semicore_family_masks():
    family = ConstraintFamily(Selector.SEMICORE)
    assert family.masks(4) == [1, 2, 4, 7, 8, 11, 13, 14]
    # при n = 2 одиночки совпадают с дополнениями
    assert family.masks(2) == [1, 2]
    assert ConstraintFamily(Selector.CORE).masks(3) == [1, 2, 3, 4, 5, 6]


def test_degenerate_and_domain_errors():
    zero = TableGame(2, {1: 0.0, 2: 0.0, 3: 0.0})
    with pytest.raises(DegenerateGameError):
        optimal_alpha_core(zero)
    single = TableGame(1, {1: 4.0})
    with pytest.raises(DomainError):
        cost_of_semicore_stability_lp(single)
    assert cost_of_stability(single).value == 0.0


def test_cost_proportional_infeasible_with_zero_coalition():
    # c({i}) = 0: ограничения x_i <= 0 не ослабляются ни при каком ε
    g = TableGame(2, {1: 0.0, 2: 0.0, 3: 3.0})
    with pytest.raises(DomainError):
        optimal_eps_core(g, Weight.COST)


def _empty_core_suite():
    games = []
    for seed in range(120):
        g = empty_semicore_table(4 + seed % 5, make_rng(seed))
        if g is not None:
            games.append(g)
    for seed in range(60):
        g = TSGame(gen_asymmetric_metric(4 + seed % 4, seed=1000 + seed))
        if cost_of_stability(g).value > 1e-7:
            games.append(g)
    return games


def test_cos_equals_n_times_weak_eps_and_alpha_relation():
    suite = _empty_core_suite()
    assert len(suite) >= 100
    for g in suite:
        cos = cost_of_stability(g).value
        assert cos > 0
        scale = max(1.0, g.grand_cost)
        assert cos == pytest.approx(g.n * optimal_eps_core(g, Weight.WEAK).value, abs=1e-6 * scale)
        alpha = optimal_alpha_core(g).value
        assert cos == pytest.approx(g.grand_cost * (1 - 1 / alpha), abs=1e-6 * scale)
        if isinstance(g, TSGame):
            assert alpha <= 1.5 + 1e-7
            assert cos <= g.grand_cost / 3 + 1e-6 * scale


def test_alpha_at_most_three_halves_on_every_tsg():
    for seed in range(200):
        n = 4 + seed % 5
        m = gen_asymmetric_metric(n, seed=seed) if seed % 2 else gen_euclidean(n, seed=seed)
        g = TSGame(m)
        scale = max(1.0, g.grand_cost)
        assert optimal_alpha_core(g).value <= 1.5 + 1e-7
        assert cost_of_stability(g).value <= g.grand_cost / 3 + 1e-6 * scale


@hsettings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), n=st.integers(min_value=2, max_value=7))
def test_concept_ordering_on_random_tables(seed, n):
    g = random_subadditive_table(n, make_rng(seed))
    tol = 1e-7 * max(1.0, g.grand_cost)
    cos = cost_of_stability(g).value
    coss = cost_of_semicore_stability_lp(g).value
    soec = optimal_eps_core(g, Weight.STRONG).value
    soes = optimal_eps_semicore_lp(g, Weight.STRONG).value
    # semicore - ослабление ядра
    assert coss <= cos + tol
    assert soes <= soec + tol
    assert 0 <= cos <= g.grand_cost + tol
