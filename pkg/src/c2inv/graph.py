"""Graphs with frozen 1-based edge ids, minors, and tree/forest enumeration.

Edge ``i`` is ``edges[i - 1]``.  Polynomial variable indices elsewhere in the
package are these edge ids.  Vertex labels are strings ordered "naturally"
(numeric labels numerically, then the rest lexicographically).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

APEX = "*"


class GraphError(ValueError):
    pass


def vertex_key(label: str):
    return (0, int(label), "") if re.fullmatch(r"-?\d+", label) else (1, 0, label)


class _DSU:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class Graph:
    """Undirected graph; simple unless built as a minor intermediate."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    multi: bool = False
    # old edge id -> new edge id, when this graph was derived from another
    id_map: tuple[tuple[int, int], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices), key=vertex_key)))
        object.__setattr__(self, "edges", tuple((str(u), str(v)) for u, v in self.edges))
        vs = set(self.vertices)
        seen = set()
        for i, (u, v) in enumerate(self.edges, 1):
            if u not in vs or v not in vs:
                raise GraphError(f"edge {i} = {u}{v} references an unknown vertex")
            if self.multi:
                continue
            if u == v:
                raise GraphError(f"edge {i} is a self-loop at {u}")
            pair = frozenset((u, v))
            if pair in seen:
                raise GraphError(f"edge {i} duplicates the pair {u} {v}")
            seen.add(pair)

    @classmethod
    def from_edges(cls, edges: Sequence[tuple], vertices: Iterable = ()) -> Graph:
        edges = tuple((str(u), str(v)) for u, v in edges)
        vs = {str(v) for v in vertices} | {x for e in edges for x in e}
        return cls(tuple(vs), edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def edge_ids(self) -> range:
        return range(1, len(self.edges) + 1)

    def endpoints(self, e: int) -> tuple[str, str]:
        if not 1 <= e <= len(self.edges):
            raise GraphError(f"no edge with id {e}")
        return self.edges[e - 1]

    def degree(self, v: str) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def degrees(self) -> dict[str, int]:
        deg = {v: 0 for v in self.vertices}
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def incident(self, v: str) -> list[int]:
        return [i for i, (a, b) in enumerate(self.edges, 1) if v in (a, b)]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        dsu = _DSU(self.vertices)
        for a, b in self.edges:
            dsu.union(a, b)
        return len({dsu.find(v) for v in self.vertices}) == 1

    def to_text(self) -> str:
        return "".join(f"{a} {b}\n" for a, b in self.edges)


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; ``#`` starts a comment.  Edge ids follow line order."""
    edges = []
    seen: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two vertex names, got {line!r}")
        u, v = parts
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at {u}")
        pair = frozenset((u, v))
        if pair in seen:
            raise GraphError(f"line {lineno}: duplicate edge {u} {v} (first on line {seen[pair]})")
        seen[pair] = lineno
        edges.append((u, v))
    return Graph.from_edges(edges)


def minor(G: Graph, delete: Iterable[int] = (), contract: Iterable[int] = ()) -> Graph:
    """``G \\ delete / contract``.

    Isolated vertices left by deletion are kept.  Contracted classes are named
    by their smallest vertex.  The result may be a multigraph (with loops).
    """
    delete, contract = set(delete), set(contract)
    for e in delete | contract:
        G.endpoints(e)
    if delete & contract:
        raise GraphError(f"edges {sorted(delete & contract)} both deleted and contracted")
    dsu = _DSU(G.vertices)
    for e in sorted(contract):
        a, b = G.endpoints(e)
        if not dsu.union(a, b):
            raise GraphError(f"contracted edges contain a cycle (edge {e})")
    classes: dict[str, list[str]] = {}
    for v in G.vertices:
        classes.setdefault(dsu.find(v), []).append(v)
    name = {v: min(members, key=vertex_key) for members in classes.values() for v in members}
    edges, id_map = [], []
    for e, (a, b) in enumerate(G.edges, 1):
        if e in delete or e in contract:
            continue
        edges.append((name[a], name[b]))
        id_map.append((e, len(edges)))
    H = Graph(tuple(set(name.values())), tuple(edges), multi=True, id_map=tuple(id_map))
    if not _needs_multi(H):
        H = Graph(H.vertices, H.edges, id_map=H.id_map)
    return H


def _needs_multi(G: Graph) -> bool:
    pairs = [frozenset(e) for e in G.edges]
    return any(len(p) == 1 for p in pairs) or len(set(pairs)) != len(pairs)


def decompletion(K: Graph, v: str) -> Graph:
    """``K - v``: drop v and its edges, re-indexing survivors in order."""
    if v not in K.vertices:
        raise GraphError(f"unknown vertex {v!r}")
    edges, id_map = [], []
    for e, (a, b) in enumerate(K.edges, 1):
        if v in (a, b):
            continue
        edges.append((a, b))
        id_map.append((e, len(edges)))
    rest = tuple(x for x in K.vertices if x != v)
    return Graph(rest, tuple(edges), multi=K.multi, id_map=tuple(id_map))


def completion(G: Graph, apex: str = APEX) -> Graph | None:
    """Join a new vertex to each vertex of degree < 4, with multiplicity 4 - deg.

    Returns None when the result would not be simple (some multiplicity > 1)
    or some vertex already has degree > 4.
    """
    if apex in G.vertices:
        raise GraphError(f"apex label {apex!r} already used")
    extra = []
    for v, d in G.degrees().items():
        if d > 4 or 4 - d > 1:
            return None
        if d == 3:
            extra.append((v, apex))
    return Graph(G.vertices + (apex,), G.edges + tuple(extra))


def cut_size(G: Graph, side: set) -> int:
    return sum((a in side) != (b in side) for a, b in G.edges)


def is_internally_6_edge_connected(K: Graph) -> bool:
    """Every bipartition with at least two vertices per side is cut by >= 6 edges.

    Exhaustive over 2^(|V|-1) bipartitions; meant for |V| <= 12 or so.
    """
    vs = K.vertices
    n = len(vs)
    first, rest = vs[0], vs[1:]
    for r in range(1, n - 1):
        # S always contains the first vertex, so each bipartition is seen once
        for others in itertools.combinations(rest, r):
            if len(others) + 1 < 2 or n - len(others) - 1 < 2:
                continue
            if cut_size(K, {first, *others}) < 6:
                return False
    return True


def is_primitive_divergent(G: Graph) -> tuple[bool, Graph | None]:
    """Check G as the decompletion of an internally 6-edge-connected 4-regular graph.

    Returns ``(verdict, K)`` where K is the reconstructed completion, or None
    when no simple completion exists.
    """
    if G.multi:
        raise GraphError("primitive divergence is defined for simple graphs")
    if not G.is_connected():
        raise GraphError("graph is disconnected")
    K = completion(G)
    if K is None:
        return False, None
    if any(d != 4 for d in K.degrees().values()):
        return False, K
    return is_internally_6_edge_connected(K), K


@dataclass(frozen=True)
class VertexPartition:
    parts: tuple[frozenset, ...]

    def __init__(self, parts: Iterable[Iterable[str]]):
        parts = tuple(frozenset(str(v) for v in part) for part in parts)
        if any(not p for p in parts):
            raise GraphError("partition parts must be non-empty")
        seen: set = set()
        for p in parts:
            if seen & p:
                raise GraphError(f"vertex {sorted(seen & p)[0]} in two parts")
            seen |= p
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    def check(self, G: Graph):
        unknown = set().union(*self.parts) - set(G.vertices) if self.parts else set()
        if unknown:
            raise GraphError(f"partition uses unknown vertices {sorted(unknown)}")

    def __str__(self):
        return ", ".join("".join(sorted(p, key=vertex_key)) for p in self.parts)


@dataclass(frozen=True)
class ThreeValentCorner:
    v: str
    edge_1: int
    edge_2: int
    edge_3: int
    a: str
    b: str
    c: str

    @property
    def edges(self) -> tuple[int, int, int]:
        return (self.edge_1, self.edge_2, self.edge_3)


def three_valent_corners(G: Graph) -> list[ThreeValentCorner]:
    """All corners, by vertex order, each with its edges sorted by id."""
    corners = []
    for v in G.vertices:
        inc = G.incident(v)
        if len(inc) != 3:
            continue
        others = []
        for e in inc:
            a, b = G.endpoints(e)
            if a == b:
                break
            others.append(b if a == v else a)
        else:
            corners.append(ThreeValentCorner(v, *inc, *others))
    return corners


def find_three_valent(G: Graph) -> ThreeValentCorner:
    corners = three_valent_corners(G)
    if not corners:
        raise GraphError("no 3-valent vertex: the three-edge c2 formula does not apply")
    return corners[0]


def _acyclic_combinations(G: Graph, size: int):
    """Edge-id tuples of the given size forming a forest, via backtracking."""
    n = len(G.edges)
    out = []

    def rec(start, chosen, dsu_parent):
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        for e in range(start, n + 1 - (size - len(chosen) - 1)):
            a, b = G.edges[e - 1]
            ra, rb = _find(dsu_parent, a), _find(dsu_parent, b)
            if ra == rb:
                continue
            nxt = dict(dsu_parent)
            nxt[rb] = ra
            chosen.append(e)
            rec(e + 1, chosen, nxt)
            chosen.pop()

    rec(1, [], {})
    return out


def _find(parent: dict, x):
    while x in parent:
        x = parent[x]
    return x


def spanning_trees(G: Graph) -> list[frozenset]:
    """All spanning trees as edge-id sets, in lexicographic order of sorted ids."""
    if not G.is_connected():
        return []
    return [frozenset(t) for t in _acyclic_combinations(G, len(G.vertices) - 1)]


def compatible_forests(G: Graph, P: VertexPartition) -> list[frozenset]:
    """Spanning forests with one tree per part, each tree holding exactly one part."""
    P.check(G)
    k = len(P)
    if k == 0:
        return []
    result = []
    for forest in _acyclic_combinations(G, len(G.vertices) - k):
        parent: dict = {}
        for e in forest:
            a, b = G.edges[e - 1]
            ra, rb = _find(parent, a), _find(parent, b)
            parent[rb] = ra
        roots = []
        for part in P.parts:
            rs = {_find(parent, v) for v in part}
            if len(rs) != 1:
                break
            roots.append(rs.pop())
        else:
            if len(set(roots)) == k:
                result.append(frozenset(forest))
    return result


def laplacian_tree_count(G: Graph) -> int:
    """Matrix-tree count: an integer determinant of the reduced Laplacian."""
    from fractions import Fraction

    idx = {v: i for i, v in enumerate(G.vertices)}
    n = len(idx)
    if n <= 1:
        return 1
    L = [[Fraction(0)] * n for _ in range(n)]
    for a, b in G.edges:
        if a == b:
            continue
        i, j = idx[a], idx[b]
        L[i][i] += 1
        L[j][j] += 1
        L[i][j] -= 1
        L[j][i] -= 1
    A = [row[1:] for row in L[1:]]
    m = n - 1
    det = Fraction(1)
    for k in range(m):
        piv = next((r for r in range(k, m) if A[r][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for r in range(k + 1, m):
            f = A[r][k] / A[k][k]
            if f:
                for c in range(k, m):
                    A[r][c] -= f * A[k][c]
    return int(det)


def canonical_form(G: Graph, max_vertices: int = 9) -> tuple:
    """Brute-force canonical edge multiset under all vertex relabellings."""
    n = len(G.vertices)
    if n > max_vertices:
        raise GraphError(f"canonical form by brute force limited to {max_vertices} vertices")
    best = None
    for perm in itertools.permutations(range(n)):
        relabel = dict(zip(G.vertices, perm))
        form = tuple(sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in G.edges))
        if best is None or form < best:
            best = form
    return (n, best)
