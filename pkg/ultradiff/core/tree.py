#!/usr/bin/env python3
"""
Explicit finite ultrametric trees
Leaves are the points; the distance of a pair is the radius at its lowest common ancestor
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .errors import ConfigError, HierarchyError
from .hierarchy import UltrametricHierarchy

# A node is a list of children, [] is a leaf, an int n is a node with n leaf children
Branching = Union[int, List[Any]]

# dense all-pairs work (rate matrices, triple checks) stops here
MAX_ORACLE_POINTS = 4096


class FiniteTree:
    """
    Rooted tree with all leaves at the same depth L.

    Leaves are indexed 0..n-1 in depth-first order, so every subtree owns a
    contiguous leaf range. Level h of a node is its height above the leaves;
    the root sits at level L and two leaves meeting at level h are d_h apart.
    """

    def __init__(self, branching: Branching, level_distance: Sequence[float], name: str = "tree"):
        self.name = name
        self.graph = nx.DiGraph()
        self._leaf_nodes: List[int] = []

        if branching == [] or branching is None:
            raise ConfigError("empty tree description")
        self.root = self._add(branching)
        self.levels = self.graph.nodes[self.root]['height']

        d = [float(x) for x in level_distance]
        if len(d) != self.levels:
            raise ConfigError(f"tree depth is {self.levels} but {len(d)} level distances were given")
        if d[0] <= 0 or any(b <= a for a, b in zip(d, d[1:])):
            raise HierarchyError("level distances must be positive and strictly increasing")
        self.level_distance = np.array([0.0] + d)

        self._ancestors = self._ancestor_table()
        self._leaf_counts = np.array([self.graph.nodes[v]['leaves'] for v in range(len(self.graph))])
        self._first_leaf = np.array([self.graph.nodes[v]['first'] for v in range(len(self.graph))])

    def _add(self, spec: Branching) -> int:
        node = self.graph.number_of_nodes()
        self.graph.add_node(node)

        if isinstance(spec, (bool, float)):
            raise ConfigError(f"unsupported branching entry {spec!r}")
        if isinstance(spec, int):
            if spec < 1:
                raise ConfigError(f"child counts must be >= 1, got {spec}")
            spec = [[] for _ in range(spec)]

        if not spec:
            self.graph.nodes[node].update(height=0, leaves=1, first=len(self._leaf_nodes))
            self._leaf_nodes.append(node)
            return node

        first = len(self._leaf_nodes)
        children = [self._add(child) for child in spec]
        heights = {self.graph.nodes[c]['height'] for c in children}
        if len(heights) != 1:
            raise HierarchyError(f"leaves at different depths below node {node}")
        for child in children:
            self.graph.add_edge(node, child)
        self.graph.nodes[node].update(
            height=heights.pop() + 1,
            leaves=sum(self.graph.nodes[c]['leaves'] for c in children),
            first=first,
        )
        return node

    def _ancestor_table(self) -> np.ndarray:
        table = np.empty((self.levels + 1, self.n_leaves), dtype=np.int64)
        table[0] = self._leaf_nodes
        for h in range(1, self.levels + 1):
            table[h] = [next(self.graph.predecessors(v)) for v in table[h - 1]]
        return table

    @property
    def n_leaves(self) -> int:
        return len(self._leaf_nodes)

    def children(self, node: int) -> List[int]:
        return list(self.graph.successors(node))

    def subtree_leaf_count(self, node: int) -> int:
        return int(self.graph.nodes[node]['leaves'])

    def leaf_range(self, node: int) -> Tuple[int, int]:
        first = self.graph.nodes[node]['first']
        return first, first + self.graph.nodes[node]['leaves']

    def ball_table(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Populations and first leaf of every leaf's level-h ball, both
        shaped (L+1, n). Ball h of leaf x covers first[h, x] .. first[h, x] + size[h, x] - 1.
        """
        return self._leaf_counts[self._ancestors], self._first_leaf[self._ancestors]

    def ancestor(self, leaf: int, level: int) -> int:
        return int(self._ancestors[level, leaf])

    def lca_level(self, x: int, y: int) -> int:
        shared = int(np.sum(self._ancestors[:, x] == self._ancestors[:, y]))
        return self.levels + 1 - shared

    def lca_levels(self) -> np.ndarray:
        """Matrix of LCA levels for all leaf pairs"""
        shared = np.zeros((self.n_leaves, self.n_leaves), dtype=np.int64)
        for row in self._ancestors:
            shared += row[:, None] == row[None, :]
        return self.levels + 1 - shared

    def distance(self, x: int, y: int) -> float:
        return float(self.level_distance[self.lca_level(x, y)])

    def distance_matrix(self) -> np.ndarray:
        return self.level_distance[self.lca_levels()]

    def pair_population_matrix(self) -> np.ndarray:
        """Leaf count of the smallest ball holding each pair"""
        lca = self.lca_levels()
        nodes = self._ancestors[lca, np.arange(self.n_leaves)[:, None]]
        return self._leaf_counts[nodes]

    def sphere_index(self, center: int = 0) -> np.ndarray:
        """Sphere index of every leaf around the center"""
        return self.levels + 1 - np.sum(self._ancestors == self._ancestors[:, [center]], axis=0)

    def induced_hierarchy(self, center: int = 0) -> UltrametricHierarchy:
        """(d_i, N_i) seen from a leaf, read off the ancestor populations"""
        N = [self.subtree_leaf_count(self.ancestor(center, h)) for h in range(self.levels + 1)]
        return UltrametricHierarchy(self.level_distance[1:].tolist(), N,
                                    name=f"{self.name}@{center}")

    def is_homogeneous(self) -> bool:
        """True when every leaf induces the same hierarchy"""
        counts = self._leaf_counts[self._ancestors]
        return bool(np.all(counts == counts[:, :1]))

    def check_ultrametric(self) -> bool:
        """Exhaustive strong triangle inequality over all leaf triples"""
        D = self.distance_matrix()
        bound = np.maximum(D[:, :, None], D[None, :, :])
        return bool(np.all(D[:, None, :] <= bound + 1e-15))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'levels': self.levels,
            'leaves': self.n_leaves,
            'level_distance': self.level_distance[1:].tolist(),
        }


def uniform_branching(p: int, depth: int) -> Branching:
    """Nested description of the complete p-ary tree of the given depth"""
    if depth < 1:
        raise ConfigError("depth must be >= 1")
    if depth == 1:
        return p
    return [uniform_branching(p, depth - 1) for _ in range(p)]


def make_tree(branching: Branching, level_distance: Sequence[float], name: str = "tree") -> FiniteTree:
    """Build a finite tree; the center is leaf 0"""
    return FiniteTree(branching, level_distance, name=name)


def make_uniform_tree(p: int, depth: int, xi: float = 1.0,
                      level_distance: Optional[Sequence[float]] = None) -> FiniteTree:
    """Complete p-ary tree with d_h = xi h unless distances are given"""
    distances = level_distance if level_distance is not None else [xi * h for h in range(1, depth + 1)]
    return FiniteTree(uniform_branching(p, depth), distances, name=f"uniform(p={p}, L={depth})")


def _chain(height: int, leaves: int) -> Branching:
    return leaves if height == 1 else [_chain(height - 1, leaves)]


def hierarchy_tree(h: UltrametricHierarchy, depth: int) -> FiniteTree:
    """
    Finite tree whose leaf 0 sees exactly (d_i, N_i), i <= depth. Each new
    sphere S_i hangs off the center path as a single chain ending in M_i leaves,
    so the tree is inhomogeneous away from the center path.
    """
    if depth < 1 or not h.has_level(depth):
        raise HierarchyError(f"{h.name} cannot be realized to depth {depth}", depth)
    ball: Branching = h.N(1)
    for i in range(2, depth + 1):
        ball = [ball, _chain(i - 1, h.M(i))]
    return FiniteTree(ball, h.radii(depth)[1:].tolist(), name=f"{h.name}[L={depth}]")
