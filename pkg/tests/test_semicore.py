import numpy as np
import pytest

import games.cost_game as cost_game_module
import routing.tsp as tsp_module
from core.errors import DegenerateGameError, DomainError, PreconditionError
from games.analysis import is_subadditive, marginal_costs
from games.cost_game import GrandPerturbedGame, ProperPerturbedGame, TableGame, TSGame
from games.generators import empty_semicore_table, random_subadditive_table
from metric.generators import gen_asymmetric_metric, gen_euclidean, make_rng, uniform_metric
from semicore.bounds import (
    BoundsReport, bound_cos_mst, bound_coss_avg_ir, bound_coss_max_marginal, bounds_report, certify_coss_witness,
    max_ir_player, max_marginal_player,
)
from semicore.formulas import coss_closed_form, semicore_empty_criterion, soes_closed_form
from semicore.search import climb_asymmetric_metric, find_empty_semicore_tsgs, semicore_gap
from stability.concepts import (
    cost_of_semicore_stability_lp, cost_of_stability, optimal_eps_semicore_lp, semicore_element,
)
from stability.model import Weight


def test_g3_closed_forms(g3):
    assert semicore_empty_criterion(g3)
    assert coss_closed_form(g3) == pytest.approx(2.5, abs=1e-9)
    assert soes_closed_form(g3) == pytest.approx(5 / 3, abs=1e-9)
    assert coss_closed_form(g3) == pytest.approx(3 / 2 * soes_closed_form(g3), abs=1e-9)


def test_g3_max_marginal_bound(g3):
    bound = bound_coss_max_marginal(g3)
    assert bound.value == pytest.approx(5.0)
    assert bound.player == 1
    assert bound.witness.tolist() == pytest.approx([5 / 3, 5 / 3, 5 / 3])
    assert bound.witness.total() == pytest.approx(g3.grand_cost - bound.value)
    assert cost_of_semicore_stability_lp(g3).value <= bound.value


def test_collinear_semicore_is_nonempty(collinear):
    g = TSGame(collinear)
    assert marginal_costs(g).tolist() == pytest.approx([0.0, 0.0, 2.0])
    assert not semicore_empty_criterion(g)
    with pytest.raises(PreconditionError):
        coss_closed_form(g)
    with pytest.raises(PreconditionError):
        soes_closed_form(g)
    assert semicore_element(g) is not None


def test_collinear_bounds(collinear):
    mst_bound = bound_cos_mst(collinear)
    assert mst_bound.value == pytest.approx(3.0)
    assert mst_bound.grand_cost == pytest.approx(6.0)
    assert mst_bound.tree_cost == pytest.approx(3.0)
    assert mst_bound.witness.tolist() == pytest.approx([1.0, 1.0, 1.0])
    avg = bound_coss_avg_ir(collinear)
    assert avg.value == pytest.approx(3.0)
    assert avg.player == max_ir_player(collinear) == 3


def test_avg_ir_on_uniform_metric(uniform4):
    assert bound_coss_avg_ir(uniform4).value == pytest.approx(2.0)
    assert bound_coss_avg_ir(uniform4).player == 1


def test_bound_errors():
    with pytest.raises(DomainError):
        bound_coss_avg_ir(uniform_metric(1))
    with pytest.raises(DomainError):
        bound_cos_mst(gen_asymmetric_metric(4, seed=0))
    with pytest.raises(DegenerateGameError):
        bound_coss_max_marginal(TableGame(2, {1: 0.0, 2: 0.0, 3: 0.0}))
    with pytest.raises(DomainError):
        semicore_empty_criterion(TableGame(1, {1: 1.0}))


def test_closed_form_rejects_non_subadditive_game():
    g = TableGame(2, {1: 1.0, 2: 1.0, 3: 3.0})
    with pytest.raises(PreconditionError):
        coss_closed_form(g, check_subadditive=True)


def test_max_marginal_ties_pick_smallest_index():
    g = TableGame.from_function(4, lambda s: float(s.size) ** 0.5)
    assert max_marginal_player(g) == 1


def _empty_semicore_suite():
    games = []
    for seed in range(200):
        g = empty_semicore_table(4 + seed % 7, make_rng(seed))
        if g is not None:
            games.append(g)
    found = find_empty_semicore_tsgs("asymmetric-climb", range(4, 9), range(8))
    games.extend(TSGame(m) for _, _, m in found.found)
    return games


def test_closed_forms_match_lp():
    suite = _empty_semicore_suite()
    assert len(suite) >= 100
    for g in suite:
        tol = 1e-7 * max(1.0, g.grand_cost)
        coss = cost_of_semicore_stability_lp(g).value
        soes = optimal_eps_semicore_lp(g, Weight.STRONG).value
        assert coss_closed_form(g) == pytest.approx(coss, abs=tol)
        assert soes_closed_form(g) == pytest.approx(soes, abs=tol)
        assert coss == pytest.approx(g.n / (g.n - 1) * soes, abs=tol)


def test_max_marginal_witness_on_suite():
    for g in _empty_semicore_suite():
        bound = bound_coss_max_marginal(g)
        assert certify_coss_witness(g, bound.witness, bound.value) == []
        assert cost_of_semicore_stability_lp(g).value <= bound.value + 1e-7 * max(1.0, g.grand_cost)


def test_criterion_agrees_with_lp():
    disagreements = 0
    for seed in range(500):
        rng = make_rng(seed)
        n = 2 + seed % 9
        g = empty_semicore_table(n, rng) if seed % 2 else random_subadditive_table(n, rng)
        if g is None:
            continue
        lp_empty = semicore_element(g) is None
        disagreements += int(lp_empty != semicore_empty_criterion(g))
    assert disagreements == 0


def test_avg_ir_bound_without_tsp(monkeypatch):
    found = find_empty_semicore_tsgs("asymmetric-climb", range(4, 9), range(10))
    if found.shortfall:
        pytest.skip("случайный поиск не нашёл TSG с пустым semicore")
    expected = {}
    for n, seed, m in found.found:
        expected[(n, seed)] = cost_of_semicore_stability_lp(TSGame(m)).value

    def forbidden(*args, **kwargs):
        raise AssertionError("оценка не должна решать TSP")

    monkeypatch.setattr(tsp_module, "tsp_exact", forbidden)
    monkeypatch.setattr(tsp_module, "all_tour_costs", forbidden)
    monkeypatch.setattr(cost_game_module, "tsp_exact", forbidden)
    monkeypatch.setattr(cost_game_module, "all_tour_costs", forbidden)
    for n, seed, m in found.found:
        bound = bound_coss_avg_ir(m)
        assert expected[(n, seed)] <= bound.value + 1e-7 * max(1.0, bound.value)


def test_mst_bound_on_symmetric_instances():
    for seed in range(40):
        n = 4 + seed % 6
        m = gen_euclidean(n, seed=seed)
        bound = bound_cos_mst(m)
        grand = bound.grand_cost
        assert bound.value <= grand / 2 + 1e-7 * grand
        assert cost_of_stability(TSGame(m)).value <= bound.value + 1e-7 * grand


def test_small_instances_have_stable_core():
    for seed in range(200):
        sym = TSGame(gen_euclidean(2 + seed % 4, seed=seed))
        assert cost_of_stability(sym).value <= 1e-7 * max(1.0, sym.grand_cost)
        assert cost_of_semicore_stability_lp(sym).value <= 1e-7 * max(1.0, sym.grand_cost)
        asym = TSGame(gen_asymmetric_metric(2 + seed % 2, seed=seed))
        assert cost_of_stability(asym).value <= 1e-7 * max(1.0, asym.grand_cost)
        assert cost_of_semicore_stability_lp(asym).value <= 1e-7 * max(1.0, asym.grand_cost)


def test_search_reports_shortfall_or_findings():
    result = find_empty_semicore_tsgs("asymmetric", range(4, 9), range(20))
    assert result.sampled == 100
    assert result.shortfall == (not result.found)
    for n, seed, m in result.found:
        assert semicore_empty_criterion(TSGame(m))
    with pytest.raises(DomainError):
        find_empty_semicore_tsgs("grid", range(4, 5), range(1))


def test_perturbations_restore_semicore():
    checked = 0
    for seed in range(120):
        g = empty_semicore_table(4 + seed % 5, make_rng(seed))
        if g is None:
            continue
        checked += 1
        for eps in np.linspace(0.0, g.grand_cost, 10):
            assert is_subadditive(GrandPerturbedGame(g, eps))
            assert is_subadditive(ProperPerturbedGame(g, eps))
        tol = 1e-7 * max(1.0, g.grand_cost)
        lowered = GrandPerturbedGame(g, coss_closed_form(g))
        assert semicore_element(lowered) is not None
        assert float(np.sum(marginal_costs(lowered))) == pytest.approx(lowered.grand_cost, abs=tol)
        raised = ProperPerturbedGame(g, soes_closed_form(g))
        assert semicore_element(raised) is not None
    assert checked >= 100


def test_bounds_report_on_symmetric_tsg():
    m = gen_euclidean(6, seed=2)
    g = TSGame(m)
    report = bounds_report(g)
    data = report.to_dict()
    assert data["cos_mst_bound"] <= g.grand_cost / 2 + 1e-7 * g.grand_cost
    assert data["coss_avg_ir_bound"] is not None
    assert data["coss_le_cos"] is True
    assert report.exact_coss == pytest.approx(6 / 5 * report.exact_soes, abs=1e-7 * g.grand_cost)


def test_bounds_report_on_table(g3):
    report = bounds_report(g3)
    data = report.to_dict()
    assert data["cos_mst_bound"] is None
    assert data["coss_avg_ir_bound"] is None
    assert data["coss_max_marginal_bound"] == pytest.approx(5.0)
    assert data["exact_coss"] == pytest.approx(2.5, abs=1e-9)
    assert data["exact_cos"] == pytest.approx(2.5, abs=1e-9)
    assert data["semicore_empty"] is True


def test_coss_le_cos_uses_report_tolerance():
    loose = BoundsReport(exact_coss=1.05, exact_soes=0.0, semicore_empty=True,
                         exact_cos=1.0, grand_cost=10.0, tol=0.01)
    assert loose.coss_le_cos is True
    strict = BoundsReport(exact_coss=1.05, exact_soes=0.0, semicore_empty=True,
                          exact_cos=1.0, grand_cost=10.0, tol=1e-7)
    assert strict.coss_le_cos is False
    assert BoundsReport(exact_coss=1.0, exact_soes=0.0, semicore_empty=True).coss_le_cos is None


def test_mst_bound_reuses_game_over_same_matrix():
    m = gen_euclidean(6, seed=5)
    game = TSGame(m)
    assert bound_cos_mst(m, game=game).value == pytest.approx(bound_cos_mst(m).value)
    with pytest.raises(DomainError):
        bound_cos_mst(m, game=TSGame(gen_euclidean(6, seed=6)))


def test_climb_is_deterministic_and_metric():
    first = climb_asymmetric_metric(6, seed=3)
    second = climb_asymmetric_metric(6, seed=3)
    assert np.array_equal(first.entries, second.entries)
    d = first.entries
    assert np.all(np.diag(d) == 0.0)
    for k in range(7):
        assert np.all(d <= d[:, [k]] + d[[k], :] + 1e-9)
    start = TSGame(gen_asymmetric_metric(6, seed=3))
    assert semicore_gap(TSGame(first)) >= semicore_gap(start) - 1e-9
    with pytest.raises(DomainError):
        climb_asymmetric_metric(1, seed=0)
