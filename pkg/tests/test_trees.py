import numpy as np
import pytest

from core.coalition import Coalition
from core.errors import DomainError
from games.cost_game import MCSTGame, TSGame
from metric.generators import gen_asymmetric_metric, gen_euclidean, uniform_metric
from routing.trees import bird_allocation, double_tree_tour, euler_walk, mst, mst_costs, tree_cost
from routing.tsp import tour_cost
from semicore.bounds import certify_cos_witness


def test_collinear_tree_and_bird(collinear):
    tree = mst(collinear, Coalition.grand(3))
    assert tree.edges == frozenset({(0, 1), (1, 2), (2, 3)})
    assert tree.cost == pytest.approx(3.0)
    assert tree.parents() == {1: 0, 2: 1, 3: 2}
    assert bird_allocation(collinear).tolist() == pytest.approx([1.0, 1.0, 1.0])


def test_uniform_tree_is_star():
    m = uniform_metric(4)
    tree = mst(m, Coalition.grand(4))
    # при равных весах выигрывают лексикографически меньшие рёбра
    assert tree.edges == frozenset({(0, 1), (0, 2), (0, 3), (0, 4)})
    assert double_tree_tour(m, Coalition.grand(4)).order == (0, 1, 2, 3, 4, 0)


def test_double_tree_between_optimum_and_twice_tree():
    for seed in range(30):
        m = gen_euclidean(6, seed=seed)
        grand = Coalition.grand(6)
        optimum = TSGame(m).grand_cost
        tree = mst(m, grand)
        approx = double_tree_tour(m, grand)
        assert sorted(approx.order[1:-1]) == list(range(1, 7))
        assert optimum - 1e-9 <= approx.cost <= 2 * tree.cost + 1e-9
        assert tour_cost(m, approx.order) == pytest.approx(approx.cost)


def test_euler_walk_traverses_doubled_tree():
    m = gen_euclidean(5, seed=4)
    grand = Coalition.grand(5)
    walk = euler_walk(m, grand)
    tree = mst(m, grand)
    assert walk[0] == walk[-1] == 0
    assert len(walk) == 2 * len(tree.edges) + 1
    assert tour_cost(m, walk) == pytest.approx(2 * tree.cost)
    assert set(walk) == set(range(6))


def test_bird_allocation_in_mcst_core():
    for seed in range(20):
        m = gen_euclidean(7, seed=seed)
        x = bird_allocation(m)
        game = MCSTGame(m)
        assert x.total() == pytest.approx(game.grand_cost)
        assert certify_cos_witness(game, x, 0.0) == []


def test_subcoalition_tree_cost():
    m = gen_euclidean(6, seed=8)
    s = Coalition.from_members([2, 5, 6], 6)
    tree = mst(m, s)
    assert len(tree.edges) == 3
    assert {v for e in tree.edges for v in e} == {0, 2, 5, 6}
    assert tree_cost(m, tree.edges) == pytest.approx(tree.cost)


def test_tree_operations_reject_asymmetric():
    m = gen_asymmetric_metric(4, seed=1)
    with pytest.raises(DomainError):
        mst(m, Coalition.grand(4))
    with pytest.raises(DomainError):
        bird_allocation(m)
    with pytest.raises(DomainError):
        MCSTGame(m)


def test_mcst_game_costs_match_tree():
    m = gen_euclidean(5, seed=2)
    game = MCSTGame(m)
    table = game.all_costs()
    for mask in range(1, 1 << 5):
        assert table[mask] == pytest.approx(mst(m, Coalition(mask, 5)).cost)
    assert np.all(table[1:] > 0)


def test_bird_allocation_exhaustive_up_to_ten_players():
    for n in range(4, 11):
        for seed in range(3):
            m = gen_euclidean(n, seed=seed)
            game = MCSTGame(m)
            x = bird_allocation(m)
            assert x.total() == pytest.approx(game.grand_cost)
            assert certify_cos_witness(game, x, 0.0) == []


def test_vectorized_tree_costs_match_single_trees():
    for seed in range(10):
        m = gen_euclidean(7, seed=seed)
        masks = np.arange(1 << 7)
        bulk = mst_costs(m, masks)
        assert bulk[0] == 0.0
        for mask in range(1, 1 << 7):
            assert bulk[mask] == pytest.approx(mst(m, Coalition(mask, 7)).cost)
        single = np.array([mst_costs(m, [mask])[0] for mask in masks])
        assert np.array_equal(bulk, single)


def test_vectorized_tree_costs_reject_asymmetric():
    with pytest.raises(DomainError):
        mst_costs(gen_asymmetric_metric(4, seed=2), [3])
