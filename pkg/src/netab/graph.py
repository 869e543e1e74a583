"""Random graphs, treatment assignments, and experiment datasets.

The social network is a simple undirected graph over dense integer node ids
0..n-1.  An experiment dataset bundles K (graph, assignment, response)
triplets, the unit of fitting and bootstrapping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

__all__ = [
    "Graph",
    "Triplet",
    "ExperimentDataset",
    "watts_strogatz",
    "bernoulli_assignment",
    "validate_assignment",
    "save_dataset",
    "load_dataset",
    "save_edgelist",
    "load_edgelist",
]


@dataclass
class Graph:
    """Simple undirected graph: no self-loops, no duplicate edges.

    Edges are stored canonically as sorted (u, v) pairs with u < v, each
    undirected edge exactly once.  Neighbor lists and a CSR view (indptr,
    indices) are derived on construction for fast per-node iteration.
    """

    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    neighbors: list[np.ndarray] = field(init=False, repr=False, compare=False)
    indptr: np.ndarray = field(init=False, repr=False, compare=False)
    indices: np.ndarray = field(init=False, repr=False, compare=False)
    edge_array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.num_nodes
        if n <= 0:
            raise ValidationError(f"num_nodes must be positive, got {n}")
        canonical = []
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValidationError(f"self-loop ({u}, {v}) is not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(
                    f"edge ({u}, {v}) has endpoint outside [0, {n})")
            canonical.append((min(u, v), max(u, v)))
        if len(set(canonical)) != len(canonical):
            seen, dup = set(), None
            for e in canonical:
                if e in seen:
                    dup = e
                    break
                seen.add(e)
            raise ValidationError(f"duplicate edge {dup}")
        self.edges = tuple(sorted(canonical))

        adj = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.neighbors = [np.array(sorted(a), dtype=np.int64) for a in adj]
        degrees = np.array([len(a) for a in adj], dtype=np.int64)
        self.indptr = np.concatenate(([0], np.cumsum(degrees)))
        self.indices = (np.concatenate(self.neighbors)
                        if self.edges else np.empty(0, dtype=np.int64))
        self.edge_array = np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.num_nodes == other.num_nodes and self.edges == other.edges


@dataclass
class Triplet:
    """One experiment: a graph, its 0/1 assignment z, and responses y."""

    graph: Graph
    z: np.ndarray
    y: np.ndarray

    def validate(self):
        n = self.graph.num_nodes
        validate_assignment(self.z, n)
        if len(self.y) != n:
            raise ValidationError(
                f"response length {len(self.y)} != num_nodes {n}")
        if not np.all(np.isfinite(np.asarray(self.y, dtype=float))):
            raise ValidationError("responses must be finite")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Triplet):
            return NotImplemented
        return (self.graph == other.graph
                and np.array_equal(self.z, other.z)
                and np.array_equal(self.y, other.y))


@dataclass
class ExperimentDataset:
    """K (graph, assignment, response) triplets."""

    triplets: list[Triplet]

    def __post_init__(self):
        if len(self.triplets) < 1:
            raise ValidationError("dataset needs at least one triplet")

    @property
    def k(self) -> int:
        return len(self.triplets)

    @property
    def total_nodes(self) -> int:
        return sum(t.graph.num_nodes for t in self.triplets)

    def validate(self):
        for t in self.triplets:
            t.validate()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExperimentDataset):
            return NotImplemented
        return self.triplets == other.triplets


def watts_strogatz(n: int, k: int, p_rewire: float,
                   rng: np.random.Generator) -> Graph:
    """Sample a small-world graph by ring-lattice rewiring.

    Args:
        n: node count.
        k: ring-lattice degree; each node starts adjacent to its k/2
           nearest neighbors on each side.  Must be even and < n.
        p_rewire: probability in [0, 1] of rewiring each lattice edge.
        rng: seeded numpy Generator; output is deterministic given it.

    Returns:
        A Graph with exactly n*k/2 edges: rewiring moves an edge's far
        endpoint to a uniformly chosen node that creates neither a
        self-loop nor a duplicate, so the edge count is preserved.
    """
    if k % 2 != 0:
        raise ValueError(f"k must be even, got {k}")
    if not (2 <= k < n):
        raise ValueError(f"need n > k >= 2, got n={n}, k={k}")
    if not (0.0 <= p_rewire <= 1.0):
        raise ValueError(f"p_rewire must be in [0, 1], got {p_rewire}")

    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(1, k // 2 + 1):
            v = (i + j) % n
            adj[i].add(v)
            adj[v].add(i)

    # Rewire each forward lattice edge (i, i+j) with probability p_rewire,
    # keeping endpoint i and redrawing the other uniformly among nodes that
    # are neither i nor already adjacent to i.
    for j in range(1, k // 2 + 1):
        for i in range(n):
            v = (i + j) % n
            if v not in adj[i]:
                continue  # already rewired away by an earlier pass
            if rng.random() >= p_rewire:
                continue
            if len(adj[i]) >= n - 1:
                continue  # i is adjacent to everyone: nothing valid to pick
            while True:
                w = int(rng.integers(n))
                if w != i and w not in adj[i]:
                    break
            adj[i].remove(v)
            adj[v].remove(i)
            adj[i].add(w)
            adj[w].add(i)

    edges = tuple((i, v) for i in range(n) for v in sorted(adj[i]) if i < v)
    return Graph(num_nodes=n, edges=edges)


def bernoulli_assignment(n: int, p: float,
                         rng: np.random.Generator) -> np.ndarray:
    """Assign each node independently to group B with probability p.

    Returns an int8 vector of 0 (group A) / 1 (group B).
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must be in [0, 1], got {p}")
    return (rng.random(n) < p).astype(np.int8)


def validate_assignment(z: np.ndarray, num_nodes: int):
    z = np.asarray(z)
    if len(z) != num_nodes:
        raise ValidationError(
            f"assignment length {len(z)} != num_nodes {num_nodes}")
    if not np.all((z == 0) | (z == 1)):
        bad = z[(z != 0) & (z != 1)][0]
        raise ValidationError(f"assignment entries must be 0 or 1, got {bad}")


def _encode_y(y: np.ndarray) -> list:
    if np.issubdtype(np.asarray(y).dtype, np.integer):
        return [int(v) for v in y]
    return [float(v) for v in y]


def save_dataset(dataset: ExperimentDataset, path):
    """Write a dataset as a single JSON document.

    Spin responses serialize as -1/+1 integers, real-valued responses as
    decimals; either round-trips exactly through load_dataset.
    """
    doc = {"triplets": [
        {"n": t.graph.num_nodes,
         "edges": [[u, v] for u, v in t.graph.edges],
         "z": [int(v) for v in t.z],
         "y": _encode_y(t.y)}
        for t in dataset.triplets]}
    with open(path, "w") as f:
        json.dump(doc, f)
        f.write("\n")


def load_dataset(path) -> ExperimentDataset:
    """Read and validate a dataset written by save_dataset."""
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(
                f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict) or "triplets" not in doc:
        raise ParseError(f"{path}: missing top-level 'triplets' field")

    triplets = []
    for idx, rec in enumerate(doc["triplets"]):
        where = f"{path}: triplet {idx}"
        for fld in ("n", "edges", "z", "y"):
            if fld not in rec:
                raise ParseError(f"{where}: missing field '{fld}'")
        # any content problem in the file surfaces as ParseError with the
        # triplet index, so callers can catch one type for "bad file"
        try:
            graph = Graph(num_nodes=int(rec["n"]),
                          edges=tuple((e[0], e[1]) for e in rec["edges"]))
        except ValidationError as e:
            raise ParseError(f"{where}: {e}") from e
        z = np.asarray(rec["z"], dtype=np.int8)
        yraw = rec["y"]
        if all(isinstance(v, int) for v in yraw):
            y = np.asarray(yraw, dtype=np.int8)
            if not np.all((y == 1) | (y == -1)):
                raise ParseError(
                    f"{where}: integer responses must be -1 or +1")
        else:
            y = np.asarray(yraw, dtype=np.float64)
        t = Triplet(graph=graph, z=z, y=y)
        try:
            t.validate()
        except ValidationError as e:
            raise ParseError(f"{where}: {e}") from e
        triplets.append(t)
    return ExperimentDataset(triplets=triplets)


def save_edgelist(graph: Graph, path):
    """Write a graph as text: header "n <num_nodes>", then one "u v" per line."""
    with open(path, "w") as f:
        f.write(f"n {graph.num_nodes}\n")
        for u, v in graph.edges:
            f.write(f"{u} {v}\n")


def load_edgelist(path) -> Graph:
    with open(path) as f:
        lines = f.read().splitlines()
    if not lines or not lines[0].startswith("n "):
        raise ParseError(f"{path}: line 1: expected header 'n <num_nodes>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError) as e:
        raise ParseError(f"{path}: line 1: bad header {lines[0]!r}") from e
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(
                f"{path}: line {lineno}: expected 'u v', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as e:
            raise ParseError(
                f"{path}: line {lineno}: non-integer endpoint in {line!r}") from e
    return Graph(num_nodes=n, edges=tuple(edges))
