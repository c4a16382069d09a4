# routing/trees.py
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Sequence, Tuple

import networkx as nx
import numpy as np

from core.allocation import Allocation
from core.coalition import Coalition
from core.errors import DomainError
from metric.matrix import DistanceMatrix
from routing.tsp import Tour, _check_coalition, tour_cost

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class SpanningTree:
    edges: FrozenSet[Edge]     # неориентированные пары (min, max)
    cost: float

    def parents(self) -> Dict[int, int]:
        """Родитель каждого узла в дереве с корнем в депо 0"""
        return dict(nx.bfs_predecessors(_ordered_tree(self.edges), 0))


def tree_cost(m: DistanceMatrix, edges) -> float:
    return float(sum(m.entries[i, j] for i, j in edges))


def _require_symmetric(m: DistanceMatrix, what: str) -> None:
    # удвоение рёбер дерева требует симметричных весов
    if not m.symmetric:
        raise DomainError(f"{what}: нужна симметричная матрица расстояний")


def _ordered_tree(edges) -> nx.Graph:
    # рёбра вставляются в лексикографическом порядке, соседи обходятся по возрастанию
    tree = nx.Graph()
    tree.add_nodes_from(sorted({v for e in edges for v in e} | {0}))
    tree.add_edges_from(sorted(edges))
    return tree


def mst(m: DistanceMatrix, s: Coalition) -> SpanningTree:
    """
    Минимальное остовное дерево на S ∪ {0} (Крускал из networkx).
    Сортировка рёбер устойчивая, поэтому при равных весах выигрывает
    лексикографически меньшее ребро.
    """
    _require_symmetric(m, "mst")
    nodes = (0,) + _check_coalition(m, s)
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    for a, u in enumerate(nodes):
        for v in nodes[a + 1:]:
            graph.add_edge(u, v, weight=float(m.entries[u, v]))
    tree = nx.minimum_spanning_tree(graph, algorithm="kruskal")
    edges = frozenset((min(u, v), max(u, v)) for u, v in tree.edges())
    return SpanningTree(edges=edges, cost=tree_cost(m, edges))


def mst_costs(m: DistanceMatrix, masks) -> np.ndarray:
    """
    c^st(S) для набора масок разом: алгоритм Прима, векторизованный по маскам.
    Каждая строка считается независимо, поэтому значение для маски не зависит
    от того, с какими масками она посчитана (одна или вся таблица).
    """
    _require_symmetric(m, "mst_costs")
    d = m.entries
    masks = np.asarray(masks, dtype=np.int64).reshape(-1)
    width = m.n + 1
    rows = np.arange(len(masks))
    bits = np.arange(m.n)
    inside = np.ones((len(masks), width), dtype=bool)
    inside[:, 1:] = (masks[:, None] >> bits[None, :]) & 1 == 1
    sizes = inside[:, 1:].sum(axis=1)

    reached = np.zeros_like(inside)
    reached[:, 0] = True
    dist = np.where(inside & ~reached, d[0][None, :], np.inf)
    costs = np.zeros(len(masks))
    for step in range(m.n):
        active = sizes > step
        if not np.any(active):
            break
        # при равных расстояниях берётся узел с меньшим номером
        nxt = np.argmin(dist, axis=1)
        picked = dist[rows, nxt]
        costs[active] += picked[active]
        reached[rows[active], nxt[active]] = True
        dist = np.where(inside & ~reached, np.minimum(dist, d[nxt]), np.inf)
    return costs


def double_tree_tour(m: DistanceMatrix, s: Coalition) -> Tour:
    """
    2-приближение: эйлеров обход удвоенного MST и сокращение повторов.
    Порядок первого появления при обходе удвоенного дерева совпадает
    с прямым порядком DFS из депо.
    """
    _require_symmetric(m, "double_tree_tour")
    tree = mst(m, s)
    preorder = list(nx.dfs_preorder_nodes(_ordered_tree(tree.edges), source=0))
    order = tuple(preorder) + (0,)
    return Tour(order=order, cost=tour_cost(m, order))


def bird_allocation(m: DistanceMatrix) -> Allocation:
    """Каждый игрок платит вес ребра к своему родителю в MST с корнем в депо"""
    _require_symmetric(m, "bird_allocation")
    if m.n < 1:
        raise DomainError("bird_allocation: нужен хотя бы один игрок")
    tree = mst(m, Coalition.grand(m.n))
    parents = tree.parents()
    payments = [float(m.entries[parents[i], i]) for i in m.players()]
    return Allocation.from_vector(payments)


def euler_walk(m: DistanceMatrix, s: Coalition) -> Sequence[int]:
    """Эйлеров цикл на удвоенном MST; его стоимость ровно 2·c^st, сокращение повторов даёт double_tree_tour"""
    _require_symmetric(m, "euler_walk")
    tree = mst(m, s)
    doubled = nx.MultiGraph(_ordered_tree(tree.edges))
    doubled.add_edges_from(sorted(tree.edges))
    walk = [0] + [v for _, v in nx.eulerian_circuit(doubled, source=0)]
    return walk
