"""Simple graphs, complements, and k-tree embeddings.

A k-tree embedding certifies that a graph has treewidth <= k by recording
how a supergraph k-tree is grown: a complete base on k+1 vertices, then one
new vertex per step joined to an existing k-clique.  The search works by
elimination: exact (memoized over eliminated vertex sets) up to 20 vertices,
greedy min-fill beyond that.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple


class GraphFormatError(ValueError):
    pass


class NotPartialKTree(Exception):
    """Exact search exhausted every elimination order: treewidth > k."""


class EmbeddingInconclusive(Exception):
    """Heuristic-only regime (n > 20) failed; treewidth may still be <= k."""


class InstanceTooLarge(ValueError):
    pass


class InvalidEmbedding(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..n; edges stored as (u, v), u < v."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError("graph needs at least one vertex")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise GraphFormatError(f"bad edge ({u},{v}) for n={self.n}")

    @staticmethod
    def from_edges(n: int, pairs) -> "Graph":
        edges = set()
        for u, v in pairs:
            if u == v:
                raise GraphFormatError(f"self-loop at {u}")
            edges.add((min(u, v), max(u, v)))
        return Graph(n, frozenset(edges))

    @staticmethod
    def empty(n: int) -> "Graph":
        return Graph(n, frozenset())

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])

    @staticmethod
    def cycle(n: int) -> "Graph":
        return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph.from_edges(n, combinations(range(1, n + 1), 2))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(u if w == v else w for u, w in self.edges if v in (u, w))

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def complement(g: Graph) -> Graph:
    missing = [
        (u, v)
        for u, v in combinations(range(1, g.n + 1), 2)
        if (u, v) not in g.edges
    ]
    return Graph(g.n, frozenset(missing))


# ---------------------------------------------------------------------------
# text format: first line "n e", then one "u v" line per edge


def parse_graph(text: str) -> Graph:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise GraphFormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"expected 'n e' header, got {lines[0]!r}")
    try:
        n, e = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"non-integer header {lines[0]!r}") from exc
    if len(lines) - 1 != e:
        raise GraphFormatError(f"header promises {e} edges, found {len(lines) - 1} lines")
    edges = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphFormatError(f"non-integer edge line {ln!r}") from exc
        if not (1 <= u < v <= n):
            raise GraphFormatError(f"edge ({u},{v}) violates 1 <= u < v <= {n}")
        if (u, v) in edges:
            raise GraphFormatError(f"duplicate edge ({u},{v})")
        edges.add((u, v))
    return Graph(n, frozenset(edges))


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {len(g.edges)}"]
    lines += [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def load_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def save_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))


# ---------------------------------------------------------------------------
# k-tree embeddings


class Step(NamedTuple):
    z: int
    q: tuple[int, ...]


@dataclass(frozen=True)
class KTreeEmbedding:
    k: int
    base: tuple[int, ...]
    steps: tuple[Step, ...]
    dummies: tuple[int, ...] = ()

    @property
    def n_total(self) -> int:
        return len(self.base) + len(self.steps)

    def placement_order(self) -> tuple[int, ...]:
        """Vertices in the order the construction introduces them."""
        return self.base + tuple(s.z for s in self.steps)


def replay(e: KTreeEmbedding) -> Graph:
    """The k-tree built by completing the base and joining each step vertex."""
    edges = set(combinations(sorted(e.base), 2))
    for z, q in e.steps:
        for u in q:
            edges.add((min(u, z), max(u, z)))
    return Graph.from_edges(e.n_total, edges)


def validate_embedding(e: KTreeEmbedding, g: Graph | None = None) -> None:
    """Check all structural invariants; raise InvalidEmbedding on any failure."""
    if len(set(e.base)) != len(e.base) or len(e.base) != e.k + 1:
        raise InvalidEmbedding("base must be k+1 distinct vertices")
    placed = set(e.base)
    adj: dict[int, set[int]] = {v: set(e.base) - {v} for v in e.base}
    for z, q in e.steps:
        if z in placed:
            raise InvalidEmbedding(f"step vertex {z} appears twice")
        if len(q) != e.k or len(set(q)) != e.k:
            raise InvalidEmbedding(f"step for {z} must attach to exactly k={e.k} vertices")
        if not set(q) <= placed:
            raise InvalidEmbedding(f"step for {z} references vertices not yet placed")
        for u, v in combinations(q, 2):
            if v not in adj[u]:
                raise InvalidEmbedding(f"attachment set for {z} is not a clique ({u},{v} missing)")
        adj[z] = set(q)
        for u in q:
            adj[u].add(z)
        placed.add(z)
    if placed != set(range(1, e.n_total + 1)):
        raise InvalidEmbedding("base and steps must cover exactly vertices 1..n")
    if g is not None:
        if g.n > e.n_total:
            raise InvalidEmbedding("embedding covers fewer vertices than the graph")
        for u, v in g.edges:
            if v not in adj[u]:
                raise InvalidEmbedding(f"graph edge ({u},{v}) missing from the k-tree")
        if set(e.dummies) != set(range(g.n + 1, e.n_total + 1)):
            raise InvalidEmbedding("dummies must be exactly the padding vertices above g.n")


def construction_order(e: KTreeEmbedding) -> tuple[Step, ...]:
    validate_embedding(e)
    return e.steps


@dataclass(frozen=True)
class CliqueSet:
    maximal_cliques: tuple[frozenset[int], ...]
    k_cliques: tuple[frozenset[int], ...]


def enumerate_cliques(e: KTreeEmbedding) -> CliqueSet:
    """Maximal cliques of the k-tree plus all k-subsets of them, deduplicated."""
    maximal = [frozenset(e.base)]
    maximal += [frozenset(q) | {z} for z, q in e.steps]
    seen: dict[frozenset[int], None] = {}
    for m in maximal:
        for sub in combinations(sorted(m), e.k):
            seen.setdefault(frozenset(sub))
    return CliqueSet(tuple(maximal), tuple(seen))


def cliques_containing_new_vertex(e: KTreeEmbedding, step: Step) -> list[frozenset[int]]:
    """All 2^k cliques of the grown k-tree that contain the step's new vertex."""
    if step not in e.steps:
        raise InvalidEmbedding("step does not belong to this embedding")
    out = []
    for size in range(len(step.q) + 1):
        for sub in combinations(step.q, size):
            out.append(frozenset(sub) | {step.z})
    return out


# ---------------------------------------------------------------------------
# embedding search


def _eliminate(adj: dict[int, set[int]], v: int) -> dict[int, set[int]]:
    """Remove v, completing its neighborhood (fill edges)."""
    nb = adj[v]
    out = {u: set(s) for u, s in adj.items() if u != v}
    for u in nb:
        out[u].discard(v)
        out[u] |= nb - {u}
    return out


def _exact_elimination(adj: dict[int, set[int]], k: int) -> list[tuple[int, frozenset[int]]] | None:
    """Search for an elimination order with all degrees <= k, leaving k+1 vertices.

    Highest id is tried first so the base ends up on the lowest ids.  Failed
    remaining-vertex sets are memoized: the filled graph depends only on the
    set of eliminated vertices, not their order.
    """
    failed: set[frozenset[int]] = set()

    def dfs(cur: dict[int, set[int]]) -> list[tuple[int, frozenset[int]]] | None:
        if len(cur) == k + 1:
            return []
        key = frozenset(cur)
        if key in failed:
            return None
        for v in sorted(cur, reverse=True):
            nb = cur[v]
            if len(nb) <= k:
                rest = dfs(_eliminate(cur, v))
                if rest is not None:
                    return [(v, frozenset(nb))] + rest
        failed.add(key)
        return None

    return dfs(adj)


def _greedy_elimination(adj: dict[int, set[int]], k: int) -> list[tuple[int, frozenset[int]]] | None:
    """Min-fill greedy pass; returns None if it gets stuck."""
    cur = {u: set(s) for u, s in adj.items()}
    order: list[tuple[int, frozenset[int]]] = []
    while len(cur) > k + 1:
        best = None
        for v, nb in cur.items():
            if len(nb) > k:
                continue
            fill = sum(1 for a, b in combinations(sorted(nb), 2) if b not in cur[a])
            cand = (fill, len(nb), -v)
            if best is None or cand < best[0]:
                best = (cand, v)
        if best is None:
            return None
        v = best[1]
        order.append((v, frozenset(cur[v])))
        cur = _eliminate(cur, v)
    return order


def _embedding_from_elimination(
    k: int,
    base_vertices,
    elim: list[tuple[int, frozenset[int]]],
    n_real: int,
    dummies: tuple[int, ...],
) -> KTreeEmbedding:
    base = tuple(sorted(base_vertices))
    maximal: list[frozenset[int]] = [frozenset(base)]
    steps: list[Step] = []
    for z, nbrs in reversed(elim):
        q = set(nbrs)
        if len(q) < k:
            # pad from a maximal clique that already contains the (filled)
            # neighborhood; one always exists in a k-tree
            host = next(m for m in maximal if q <= m)
            for u in sorted(host - q):
                if len(q) == k:
                    break
                q.add(u)
        steps.append(Step(z, tuple(sorted(q))))
        maximal.append(frozenset(q) | {z})
    return KTreeEmbedding(k=k, base=base, steps=tuple(steps), dummies=dummies)


_EXACT_LIMIT = 20


def find_ktree_embedding(g: Graph, k: int) -> KTreeEmbedding:
    """Embed g into a k-tree, or prove impossible (n <= 20) / give up (n > 20).

    Graphs with fewer than k+1 vertices are padded with isolated dummy
    vertices so the complete base exists; the dummies are recorded on the
    embedding for later removal.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n_total = max(g.n, k + 1)
    dummies = tuple(range(g.n + 1, n_total + 1))
    adj = g.adjacency()
    for d in dummies:
        adj[d] = set()
    if n_total == k + 1:
        emb = KTreeEmbedding(k=k, base=tuple(range(1, n_total + 1)), steps=(), dummies=dummies)
        validate_embedding(emb, g)
        return emb
    if n_total <= _EXACT_LIMIT:
        elim = _exact_elimination(adj, k)
        if elim is None:
            raise NotPartialKTree(f"treewidth exceeds {k}")
    else:
        elim = _greedy_elimination(adj, k)
        if elim is None:
            raise EmbeddingInconclusive(
                f"greedy elimination stuck with more than {k + 1} vertices left (n > {_EXACT_LIMIT})"
            )
    eliminated = {v for v, _ in elim}
    base_vertices = [v for v in adj if v not in eliminated]
    emb = _embedding_from_elimination(k, base_vertices, elim, g.n, dummies)
    validate_embedding(emb, g)
    return emb


_TW_LIMIT = 10


def exhaustive_treewidth(g: Graph) -> int:
    """Exact treewidth by dynamic programming over eliminated vertex subsets."""
    if g.n > _TW_LIMIT:
        raise InstanceTooLarge(f"exhaustive treewidth limited to {_TW_LIMIT} vertices")
    n = g.n
    adj_bits = [0] * n
    for u, v in g.edges:
        adj_bits[u - 1] |= 1 << (v - 1)
        adj_bits[v - 1] |= 1 << (u - 1)

    def filled_degree(v: int, eliminated: int) -> int:
        # neighbors of v after contracting the eliminated set: reachable
        # through eliminated vertices only
        seen = 1 << v
        stack = [v]
        out = 0
        while stack:
            u = stack.pop()
            rest = adj_bits[u] & ~seen
            while rest:
                low = rest & -rest
                rest ^= low
                w = low.bit_length() - 1
                seen |= low
                if eliminated >> w & 1:
                    stack.append(w)
                else:
                    out |= low
        return bin(out).count("1")

    full = (1 << n) - 1
    dp = [0] * (full + 1)
    for mask in range(1, full + 1):
        best = n  # upper bound; any order achieves <= n-1
        sub = mask
        while sub:
            low = sub & -sub
            sub ^= low
            v = low.bit_length() - 1
            prev = mask ^ low
            cand = max(dp[prev], filled_degree(v, prev))
            if cand < best:
                best = cand
        dp[mask] = best
    return dp[full]


# ---------------------------------------------------------------------------
# embedding JSON


def embedding_to_json(e: KTreeEmbedding) -> dict:
    obj: dict = {
        "k": e.k,
        "base": list(e.base),
        "steps": [{"z": z, "q": list(q)} for z, q in e.steps],
    }
    if e.dummies:
        obj["dummies"] = list(e.dummies)
    return obj


def embedding_from_json(obj: dict) -> KTreeEmbedding:
    try:
        emb = KTreeEmbedding(
            k=int(obj["k"]),
            base=tuple(int(v) for v in obj["base"]),
            steps=tuple(Step(int(s["z"]), tuple(int(v) for v in s["q"])) for s in obj["steps"]),
            dummies=tuple(int(v) for v in obj.get("dummies", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidEmbedding(f"bad embedding JSON: {exc}") from exc
    validate_embedding(emb)
    return emb
