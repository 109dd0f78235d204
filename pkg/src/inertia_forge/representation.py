"""Vertex-by-vertex construction of exact B-orthogonal graph representations.

Each vertex of the (embedded) partial k-tree receives a vector in Q^m that
is B-orthogonal to the vectors of its already-placed graph neighbors and
generic enough to keep a list of exact geometric conditions alive.  Vectors
are drawn as random integer combinations of a basis of the admissible
subspace and accepted only after every condition is verified in rational
arithmetic; a rejected draw is retried with a doubled coordinate bound.

The invariants maintained for the grown k-tree H and its spanning subgraph G:

  pattern              B(v, w) = 0 exactly for distinct adjacent v, w
  clique-nondegenerate every clique of H spans a nondegenerate subspace of
                       full dimension
  kclique-pair         for k-cliques C, D the orthogonal complement of
                       span(C) meets span(D) in dimension <= 1
  kclique-span         no vertex vector lies in the span of a k-clique it
                       does not belong to
  span-dimension       the full vector set spans min(m, |V(H)|) dimensions
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .graphs import Graph, KTreeEmbedding, enumerate_cliques, validate_embedding
from .linalg import (
    BilinearForm,
    Subspace,
    Vec,
    bilinear,
    format_rational,
    intersect,
    is_nondegenerate_set,
    mat,
    orthogonal_complement,
    parse_rational,
    rank,
)

DEFAULT_COORD_BOUND = 1 << 16
DEFAULT_MAX_RETRIES = 64

TAG_ANISOTROPY = "anisotropy"
TAG_PATTERN = "pattern"
TAG_CLIQUE_NONDEG = "clique-nondegenerate"
TAG_PAIR_OLD = "kclique-pair-old"
TAG_PAIR_NEW = "kclique-pair-new"
TAG_SPAN_AVOID = "kclique-span"
TAG_MEMBER_SPAN = "member-span"
TAG_SPAN_GROWTH = "span-growth"

COND_PATTERN = "pattern"
COND_CLIQUE_NONDEG = "clique-nondegenerate"
COND_KCLIQUE_PAIR = "kclique-pair"
COND_KCLIQUE_SPAN = "kclique-span"
COND_SPAN_DIM = "span-dimension"


class DimensionTooSmall(ValueError):
    pass


class EmptySampleSpace(RuntimeError):
    pass


class RetriesExhausted(Exception):
    def __init__(self, vertex: int, trace: "BuildTrace"):
        super().__init__(f"no acceptable vector for vertex {vertex} within the retry budget")
        self.vertex = vertex
        self.trace = trace


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    coord_bound: int = DEFAULT_COORD_BOUND
    max_retries: int = DEFAULT_MAX_RETRIES
    growth: bool = True

    def __post_init__(self):
        if self.coord_bound < 2:
            raise ValueError("coord_bound must be >= 2")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")


@dataclass(frozen=True)
class VertexTrace:
    vertex: int
    subspace_dim: int
    retries: int
    failures: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class BuildTrace:
    per_vertex: tuple[VertexTrace, ...]

    @property
    def total_retries(self) -> int:
        return sum(t.retries for t in self.per_vertex)


@dataclass
class Representation:
    """Vertex -> vector assignment; may be a partial prefix during a build."""

    form: BilinearForm
    graph: Graph
    embedding: KTreeEmbedding
    vectors: dict[int, Vec]

    def placement_prefix(self) -> list[int]:
        """Assigned vertices, validated to be a prefix of the placement order."""
        order = self.embedding.placement_order()
        t = len(self.vectors)
        prefix = list(order[:t])
        if set(prefix) != set(self.vectors):
            raise ValueError("assigned vertices are not a prefix of the placement order")
        return prefix

    def attach_clique(self, z: int) -> tuple[int, ...]:
        """Vertices the construction joins z to (earlier base vertices, or the step's clique)."""
        order = self.embedding.placement_order()
        pos = order.index(z)
        if pos < len(self.embedding.base):
            return order[:pos]
        return self.embedding.steps[pos - len(self.embedding.base)].q


def derive_seed(seed: int, label: str) -> int:
    """Stable per-label stream split of the master seed."""
    digest = hashlib.blake2b(f"{seed}/{label}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _primitive_int_rows(s: Subspace) -> list[tuple[int, ...]]:
    rows = []
    for b in s.basis:
        den = 1
        for x in b:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x.numerator * (den // x.denominator)) for x in b]
        g = 0
        for c in ints:
            g = gcd(g, abs(c))
        rows.append(tuple(c // g for c in ints))
    return rows


def sample_in_subspace(l: Subspace, rng: random.Random, bound: int) -> Vec:
    """Random integer combination of a primitive basis of l; never the zero vector."""
    if l.dim == 0:
        raise EmptySampleSpace("cannot sample from the zero subspace")
    basis = _primitive_int_rows(l)
    while True:
        coeffs = [rng.randint(-bound, bound) for _ in basis]
        if any(coeffs):
            break
    out = [0] * l.ambient
    for c, row in zip(coeffs, basis):
        if c:
            for i, x in enumerate(row):
                out[i] += c * x
    return tuple(Fraction(v) for v in out)


# ---------------------------------------------------------------------------
# per-candidate checks


def _current_cliques(e: KTreeEmbedding, placed: list[int]) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """(maximal cliques, k-cliques) of the k-tree prefix on `placed`."""
    t = len(placed)
    if t <= e.k + 1:
        maximal = [frozenset(placed)] if placed else []
    else:
        placed_set = set(placed)
        maximal = [frozenset(e.base)]
        maximal += [frozenset(s.q) | {s.z} for s in e.steps if s.z in placed_set]
    seen: dict[frozenset[int], None] = {}
    for m_cl in maximal:
        for sub in combinations(sorted(m_cl), e.k):
            seen.setdefault(frozenset(sub))
    return maximal, list(seen)


def _reduce_against(rows: list[list[Fraction]], v) -> list[Fraction]:
    """Eliminate v against reduced rows (each with a leading 1)."""
    resid = list(v)
    for row in rows:
        lead = next(i for i, x in enumerate(row) if x != 0)
        if resid[lead] != 0:
            f = resid[lead]
            resid = [x - f * y for x, y in zip(resid, row)]
    return resid


def _insert_reduced(rows: list[list[Fraction]], v) -> bool:
    """Grow an RREF row set by v; returns False if v was already in the span."""
    resid = _reduce_against(rows, v)
    lead = next((i for i, x in enumerate(resid) if x != 0), None)
    if lead is None:
        return False
    inv = resid[lead]
    resid = [x / inv for x in resid]
    for row in rows:
        if row[lead] != 0:
            f = row[lead]
            row[:] = [x - f * y for x, y in zip(row, resid)]
    rows.append(resid)
    rows.sort(key=lambda r: next(i for i, x in enumerate(r) if x != 0))
    return True


def _is_parallel(a: list[Fraction], b: list[Fraction]) -> bool:
    """True iff a is a scalar multiple of b (zero a counts as parallel)."""
    lead = next((i for i, x in enumerate(b) if x != 0), None)
    if lead is None:
        return all(x == 0 for x in a)
    f = a[lead] / b[lead]
    return all(x == f * y for x, y in zip(a, b))


def _pair_dimension_fast(form: BilinearForm, left, right) -> int:
    """dim(span(left)^perp ∩ span(right)) assuming right is independent."""
    k_right = [tuple(sum(form.matrix[i][j] * r[j] for j in range(form.m)) for i in range(form.m)) for r in right]
    cross = tuple(tuple(sum(l[i] * kr[i] for i in range(form.m)) for kr in k_right) for l in left)
    return len(right) - rank(cross)


def _pair_dimension_literal(form: BilinearForm, left, right) -> int:
    ambient = form.m
    c_span = Subspace.span(left, ambient)
    d_span = Subspace.span(right, ambient)
    return intersect(orthogonal_complement(form, c_span), d_span).dim


def check_new_vertex(rep: Representation, z: int, candidate: Vec) -> frozenset[str]:
    """Evaluate every acceptance condition for placing `candidate` at z.

    Returns the (possibly empty) set of failed tags.  The candidate must
    already be B-orthogonal to the vectors of z's placed graph neighbors;
    that is the sampling subspace's job, and a violation raises ValueError.
    """
    form = rep.form
    placed = rep.placement_prefix()
    if z != rep.embedding.placement_order()[len(placed)]:
        raise ValueError(f"vertex {z} is not the next vertex in placement order")
    q = rep.attach_clique(z)
    g_nbrs = rep.graph.neighbors(z) if z <= rep.graph.n else frozenset()
    for w in placed:
        if w in g_nbrs and bilinear(form, candidate, rep.vectors[w]) != 0:
            raise ValueError(f"candidate is not orthogonal to placed neighbor {w}")

    tags: set[str] = set()
    if bilinear(form, candidate, candidate) == 0:
        tags.add(TAG_ANISOTROPY)
    for w in placed:
        if w not in g_nbrs and bilinear(form, candidate, rep.vectors[w]) == 0:
            tags.add(TAG_PATTERN)
            break

    q_vecs = {v: rep.vectors[v] for v in q}
    for size in range(len(q) + 1):
        for sub in combinations(q, size):
            if not is_nondegenerate_set(form, [q_vecs[v] for v in sub] + [candidate]):
                tags.add(TAG_CLIQUE_NONDEG)
                break
        if TAG_CLIQUE_NONDEG in tags:
            break

    k = rep.embedding.k
    if len(q) == k:
        _, old_kcliques = _current_cliques(rep.embedding, placed)
        old_spans = {cl: Subspace.span([rep.vectors[v] for v in sorted(cl)], form.m) for cl in old_kcliques}
        # the fast pair-dimension route needs independent spanning sets,
        # which the nondegeneracy check above certifies for the new cliques
        pair_dim = _pair_dimension_fast if TAG_CLIQUE_NONDEG not in tags else _pair_dimension_literal
        new_cliques = []
        for drop in q:
            members = [rep.vectors[v] for v in q if v != drop] + [candidate]
            new_cliques.append(members)

        for members in new_cliques:
            for cl in old_kcliques:
                d_vecs = [rep.vectors[v] for v in sorted(cl)]
                if pair_dim(form, members, d_vecs) > 1:
                    tags.add(TAG_PAIR_OLD)
                    break
            if TAG_PAIR_OLD in tags:
                break

        for a_members in new_cliques:
            for b_members in new_cliques:
                if pair_dim(form, a_members, b_members) > 1:
                    tags.add(TAG_PAIR_NEW)
                    break
            if TAG_PAIR_NEW in tags:
                break

        for cl in old_kcliques:
            if old_spans[cl].contains(candidate):
                tags.add(TAG_SPAN_AVOID)
                break

        # membership of old vertices in the new cliques, tested on the z side:
        # z must avoid span((q \ {drop}) ∪ {w}) for every placed w outside
        for drop in q:
            rest_rows: list[list[Fraction]] = []
            for v in q:
                if v != drop:
                    _insert_reduced(rest_rows, rep.vectors[v])
            cand_resid = _reduce_against(rest_rows, candidate)
            for w in placed:
                if w in q and w != drop:
                    continue
                w_resid = _reduce_against(rest_rows, rep.vectors[w])
                if _is_parallel(cand_resid, w_resid):
                    tags.add(TAG_MEMBER_SPAN)
                    break
            if TAG_MEMBER_SPAN in tags:
                break

    if len(placed) < form.m:
        span_rows: list[list[Fraction]] = []
        for w in placed:
            _insert_reduced(span_rows, rep.vectors[w])
        if all(x == 0 for x in _reduce_against(span_rows, candidate)):
            tags.add(TAG_SPAN_GROWTH)

    return frozenset(tags)


def extend_vertex(rep: Representation, z: int, cfg: SamplerConfig, rng: random.Random | None = None,
                  trace_so_far: tuple[VertexTrace, ...] = ()) -> tuple[Vec, VertexTrace]:
    """Sample-and-verify loop for one vertex; the accepted vector is returned."""
    form = rep.form
    placed = rep.placement_prefix()
    g_nbrs = rep.graph.neighbors(z) if z <= rep.graph.n else frozenset()
    anchor_vecs = [rep.vectors[w] for w in placed if w in g_nbrs]
    admissible = orthogonal_complement(form, Subspace.span(anchor_vecs, form.m))
    if admissible.dim == 0:
        raise EmptySampleSpace(f"admissible subspace for vertex {z} is zero")
    if rng is None:
        rng = random.Random(derive_seed(cfg.seed, str(z)))
    bound = cfg.coord_bound
    failures: list[tuple[str, ...]] = []
    retries = 0
    while True:
        candidate = sample_in_subspace(admissible, rng, bound)
        tags = check_new_vertex(rep, z, candidate)
        if not tags:
            return candidate, VertexTrace(z, admissible.dim, retries, tuple(failures))
        failures.append(tuple(sorted(tags)))
        retries += 1
        if retries > cfg.max_retries:
            partial = BuildTrace(trace_so_far + (VertexTrace(z, admissible.dim, retries, tuple(failures)),))
            raise RetriesExhausted(z, partial)
        if cfg.growth:
            bound *= 2


def build_representation(
    g: Graph, e: KTreeEmbedding, form: BilinearForm, cfg: SamplerConfig
) -> tuple[Representation, BuildTrace]:
    """Assign every vertex of the embedded k-tree a vector satisfying all conditions.

    Deterministic for a fixed config: each vertex consumes an independent
    RNG stream derived from cfg.seed.
    """
    if form.m < e.k + 2:
        raise DimensionTooSmall(f"form dimension {form.m} < k+2 = {e.k + 2}")
    validate_embedding(e, g)
    rep = Representation(form=form, graph=g, embedding=e, vectors={})
    traces: list[VertexTrace] = []
    for z in e.placement_order():
        vector, vt = extend_vertex(rep, z, cfg, trace_so_far=tuple(traces))
        rep.vectors[z] = vector
        traces.append(vt)
    return rep, BuildTrace(tuple(traces))


# ---------------------------------------------------------------------------
# full re-verification


@dataclass(frozen=True)
class ConditionResult:
    ok: bool
    witnesses: tuple

    def to_json(self) -> dict:
        return {"ok": self.ok, "witnesses": [list(w) for w in self.witnesses]}


@dataclass(frozen=True)
class ConditionReport:
    conditions: dict[str, ConditionResult]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.conditions.values())

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "conditions": {name: res.to_json() for name, res in self.conditions.items()},
        }


def verify_representation(rep: Representation) -> ConditionReport:
    """Re-check every invariant from scratch, via the literal subspace routes.

    Deliberately avoids the incremental machinery (and its cross-Gram rank
    shortcut) so agreement between the two is meaningful evidence.
    """
    form = rep.form
    e = rep.embedding
    order = e.placement_order()
    if set(rep.vectors) != set(order):
        raise ValueError("verification needs a fully assigned representation")
    g = rep.graph

    def adjacent(u: int, v: int) -> bool:
        return u <= g.n and v <= g.n and g.has_edge(u, v)

    pattern_bad = []
    for u, v in combinations(sorted(order), 2):
        value = bilinear(form, rep.vectors[u], rep.vectors[v])
        if (value == 0) != adjacent(u, v):
            pattern_bad.append((u, v, format_rational(value)))
    for v in sorted(order):
        if bilinear(form, rep.vectors[v], rep.vectors[v]) == 0:
            pattern_bad.append((v, v, "0"))

    cliques = enumerate_cliques(e)
    nondeg_bad = []
    for m_cl in cliques.maximal_cliques:
        members = sorted(m_cl)
        for size in range(1, len(members) + 1):
            for sub in combinations(members, size):
                vecs = [rep.vectors[v] for v in sub]
                if not is_nondegenerate_set(form, vecs) or rank(mat(vecs)) != len(sub):
                    nondeg_bad.append(tuple(sub))

    spans = {
        cl: Subspace.span([rep.vectors[v] for v in sorted(cl)], form.m)
        for cl in cliques.k_cliques
    }
    pair_bad = []
    for i, c_cl in enumerate(cliques.k_cliques):
        perp = orthogonal_complement(form, spans[c_cl])
        for d_cl in cliques.k_cliques[i:]:
            dim = intersect(perp, spans[d_cl]).dim
            limit = 0 if c_cl == d_cl else 1
            if dim > limit:
                pair_bad.append((tuple(sorted(c_cl)), tuple(sorted(d_cl)), dim))

    span_bad = []
    for cl in cliques.k_cliques:
        for v in sorted(order):
            if v not in cl and spans[cl].contains(rep.vectors[v]):
                span_bad.append((tuple(sorted(cl)), v))

    total = rank(mat([rep.vectors[v] for v in order]))
    expected = min(form.m, len(order))
    dim_bad = [] if total == expected else [(total, expected)]

    return ConditionReport(
        conditions={
            COND_PATTERN: ConditionResult(not pattern_bad, tuple(pattern_bad)),
            COND_CLIQUE_NONDEG: ConditionResult(not nondeg_bad, tuple(nondeg_bad)),
            COND_KCLIQUE_PAIR: ConditionResult(not pair_bad, tuple(pair_bad)),
            COND_KCLIQUE_SPAN: ConditionResult(not span_bad, tuple(span_bad)),
            COND_SPAN_DIM: ConditionResult(not dim_bad, tuple(dim_bad)),
        }
    )


# ---------------------------------------------------------------------------
# serialization


def representation_to_json(rep: Representation, seed: int) -> dict:
    return {
        "m": rep.form.m,
        "k": rep.embedding.k,
        "vectors": {str(v): [format_rational(x) for x in vec] for v, vec in sorted(rep.vectors.items())},
        "seed": seed,
    }


def representation_from_json(obj: dict, form: BilinearForm, graph: Graph, embedding: KTreeEmbedding) -> Representation:
    if int(obj["m"]) != form.m:
        raise ValueError("representation JSON dimension does not match the form")
    if int(obj["k"]) != embedding.k:
        raise ValueError("representation JSON width does not match the embedding")
    vectors = {
        int(v): tuple(parse_rational(x) for x in entries)
        for v, entries in obj["vectors"].items()
    }
    return Representation(form=form, graph=graph, embedding=embedding, vectors=vectors)
