"""Covering-code constructions.

Direct sums, randomized partial dominating sets on regular graphs (with a
deterministic greedy fallback), and the recursive construction that splits
[q]^n into a dominated prefix block and a recursively covered suffix block.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heapify, heappop, heappush
from itertools import product
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from .bounds import floor_div_real
from .codes import Code, DensityValue, density
from .errors import DominationFailure, InfeasibleParamsError
from .hamming import (
    DEFAULT_ENUMERATION_GUARD,
    HammingSpace,
    Word,
    ball_volume,
    enumerate_ball,
    expand_within_radius,
    index_word,
    word_index,
)
from .solver import minimal_covering_code

#: Greedy full-space ball covers get their own, tighter guard: the eager
#: scan is quadratic-ish and meant for base cases only.
GREEDY_COVER_GUARD = 1 << 14


@dataclass(frozen=True)
class RegularGraphView:
    """A d-regular graph exposed as vertex count, degree, and a neighbor stream.

    ``cover_mask``, when provided, must return a boolean numpy array over
    vertex ids marking X together with its neighborhood; it exists so large
    vertex sets can be dominated without a per-vertex Python loop.
    """

    m: int
    d: int
    neighbors: Callable[[int], Iterable[int]]
    cover_mask: Optional[Callable[[Iterable[int]], np.ndarray]] = None


def complete_graph_view(m: int) -> RegularGraphView:
    return RegularGraphView(m, m - 1, lambda v: (u for u in range(m) if u != v))


def empty_graph_view(m: int) -> RegularGraphView:
    return RegularGraphView(m, 0, lambda v: iter(()))


def hamming_graph_view(
    space: HammingSpace, radius: int, guard: int = DEFAULT_ENUMERATION_GUARD
) -> RegularGraphView:
    """View [q]^n as the graph joining words at Hamming distance 1..radius.

    The graph is regular of degree V_q(n, radius) - 1.
    """
    space.check_enumerable(guard)
    d = ball_volume(space, radius) - 1

    def neighbors(v: int) -> Iterable[int]:
        w = index_word(space, v)
        for u in enumerate_ball(space, w, radius):
            iu = word_index(space, u)
            if iu != v:
                yield iu

    def cover_mask(vertices: Iterable[int]) -> np.ndarray:
        mask = np.zeros(space.size, dtype=bool)
        ids = list(vertices)
        if ids:
            mask[ids] = True
        return expand_within_radius(space, mask, radius)

    return RegularGraphView(space.size, d, neighbors, cover_mask)


@dataclass(frozen=True)
class DominationResult:
    """A vertex set X with the vertices its closed neighborhood misses."""

    X: frozenset
    N_bar: frozenset
    x_used: float
    trials_used: int


def nbar_of(graph: RegularGraphView, X: Iterable[int]) -> frozenset:
    """Recompute V(G) minus (X and its neighborhood) from the neighbor stream.

    Deliberately ignores ``cover_mask`` so it can serve as the independent
    cross-check on results produced through the fast path.
    """
    covered = set(X)
    for v in list(covered):
        covered.update(graph.neighbors(v))
    return frozenset(v for v in range(graph.m) if v not in covered)


def _uncovered_by(graph: RegularGraphView, X: List[int]) -> frozenset:
    if graph.cover_mask is not None:
        mask = graph.cover_mask(X)
        return frozenset(int(v) for v in np.flatnonzero(~mask))
    return nbar_of(graph, X)


def domination_size_cap(graph: RegularGraphView, x: float) -> int:
    """floor(x*m/(d+1)), the size budget the sampler must stay within."""
    return min(int(math.floor(x * graph.m / (graph.d + 1))), graph.m)


def domination_threshold(graph: RegularGraphView, x: float) -> int:
    """ceil(exp(-x + (d+1)/m) * m), the miss count a trial must not exceed."""
    return math.ceil(math.exp(-x + (graph.d + 1) / graph.m) * graph.m)


def dominating_partial(
    graph: RegularGraphView,
    x: float,
    seed=0,
    max_trials: int = 100,
) -> DominationResult:
    """Sample fixed-size vertex subsets until one dominates all but few vertices.

    Accepts the first subset of size floor(x*m/(d+1)) whose closed
    neighborhood misses at most ceil(exp(-x + (d+1)/m) * m) vertices. The
    expectation of the miss count under a uniform random subset is below the
    threshold, so trials succeed with constant probability; a run of
    ``max_trials`` misses raises DominationFailure carrying the best attempt.
    Deterministic for a fixed seed (per-trial generators are derived from
    ``seed`` and the trial index).
    """
    if x <= 0:
        raise InfeasibleParamsError("requires x > 0")
    if max_trials < 1:
        raise ValueError(f"max_trials must be >= 1, got {max_trials}")
    m = graph.m
    size = domination_size_cap(graph, x)
    threshold = domination_threshold(graph, x)
    if size == 0:
        if threshold < m:
            raise InfeasibleParamsError(
                "requires floor(x*m/(d+1)) >= 1 or x <= (d+1)/m; "
                f"a size-0 set cannot miss at most {threshold} of {m} vertices"
            )
        return DominationResult(frozenset(), frozenset(range(m)), x, 0)

    best: Optional[DominationResult] = None
    for trial in range(max_trials):
        rng = random.Random(f"dominate:{seed}:{trial}")
        X = sorted(rng.sample(range(m), size))
        n_bar = _uncovered_by(graph, X)
        if len(n_bar) <= threshold:
            return DominationResult(frozenset(X), n_bar, x, trial + 1)
        if best is None or len(n_bar) < len(best.N_bar):
            best = DominationResult(frozenset(X), n_bar, x, trial + 1)
    raise DominationFailure(
        f"no trial out of {max_trials} met |N_bar| <= {threshold} "
        f"(best attempt missed {len(best.N_bar)})",
        best=best,
    )


def greedy_dominating_partial(graph: RegularGraphView, size_budget: int) -> DominationResult:
    """Deterministic fallback: repeatedly take the vertex covering the most
    still-uncovered vertices (closed neighborhood), ties to the smallest id."""
    if size_budget < 0:
        raise ValueError(f"size_budget must be >= 0, got {size_budget}")
    m = graph.m
    uncovered = set(range(m))
    chosen: List[int] = []
    for _ in range(min(size_budget, m)):
        if not uncovered:
            break
        best_gain, best_v = -1, -1
        for v in range(m):
            gain = (v in uncovered) + sum(1 for u in graph.neighbors(v) if u in uncovered)
            if gain > best_gain:
                best_gain, best_v = gain, v
        chosen.append(best_v)
        uncovered.discard(best_v)
        uncovered.difference_update(graph.neighbors(best_v))
    x_equiv = size_budget * (graph.d + 1) / m
    return DominationResult(frozenset(chosen), frozenset(uncovered), x_equiv, 0)


def greedy_ball_cover(
    space: HammingSpace, radius: int, guard: int = GREEDY_COVER_GUARD
) -> frozenset:
    """Greedy max-coverage over radius-``radius`` balls until the space is covered.

    Lazy-greedy: stale gains are upper bounds, so a popped candidate whose
    recomputed gain still tops the heap is a true argmax.
    """
    space.check_enumerable(guard)
    m = space.size
    v_ball = ball_volume(space, radius)
    uncovered = set(range(m))
    balls: dict = {}
    heap = [(-v_ball, i) for i in range(m)]
    heapify(heap)
    chosen: List[Word] = []
    while uncovered:
        neg_stale, cand = heappop(heap)
        ball = balls.get(cand)
        if ball is None:
            w = index_word(space, cand)
            ball = [word_index(space, u) for u in enumerate_ball(space, w, radius)]
            balls[cand] = ball
        gain = sum(1 for i in ball if i in uncovered)
        if gain == 0:
            continue
        if heap and gain < -heap[0][0]:
            heappush(heap, (-gain, cand))
            continue
        chosen.append(index_word(space, cand))
        uncovered.difference_update(ball)
    return frozenset(chosen)


def direct_sum(a: Code, b: Code) -> Code:
    """Concatenation set {(u, v) : u in A, v in B} over [q]^(len(A)+len(B))."""
    if a.space.q != b.space.q:
        raise ValueError(f"alphabet mismatch: q={a.space.q} vs q={b.space.q}")
    space = HammingSpace(a.space.q, a.space.n + b.space.n)
    return Code(space, frozenset(u + v for u in a.words for v in b.words))


# ---------------------------------------------------------------------------
# Recursive construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceLevel:
    """One recursion level: split sizes and the exact size bookkeeping.

    ``k_size`` always equals x_size * q^r + nbar_size * k2_size because the
    two parts are keyed by disjoint prefix membership.
    """

    n: int
    r: int
    r_prime: int
    m: int
    d: int
    x_size: int
    nbar_size: int
    k2_size: int
    k_size: int


@dataclass(frozen=True)
class BaseRecord:
    n: int
    method: str  # trivial | exact | exact-incumbent | greedy
    size: int


@dataclass
class ConstructionTrace:
    q: int
    n: int
    radius: int
    x: float
    y: float
    base_policy: str
    seed: object
    levels: List[TraceLevel] = field(default_factory=list)
    base: Optional[BaseRecord] = None
    total_size: int = 0
    density: Optional[DensityValue] = None

    def to_json_dict(self) -> dict:
        dens = self.density.exact if self.density is not None else Fraction(0)
        return {
            "q": self.q,
            "n": self.n,
            "R": self.radius,
            "x": self.x,
            "y": self.y,
            "base_policy": self.base_policy,
            "seed": self.seed,
            "levels": [vars(lv).copy() for lv in self.levels],
            "base": None if self.base is None else vars(self.base).copy(),
            "total_size": self.total_size,
            "density": {
                "numerator": dens.numerator,
                "denominator": dens.denominator,
                "approx": float(dens),
            },
        }


BASE_POLICIES = ("auto", "trivial", "exact", "greedy")


def recursive_construct(
    space: HammingSpace,
    radius: int,
    x: float,
    y: float,
    base_policy: str = "auto",
    seed=0,
    *,
    max_trials: int = 100,
    exact_budget: int = 1 << 12,
    exact_node_budget: int = 200_000,
    guard: int = DEFAULT_ENUMERATION_GUARD,
) -> Tuple[Code, ConstructionTrace]:
    """Build a radius-``radius`` covering code of [q]^n recursively.

    Each level splits n into r = floor(n/y) and r' = n - r, takes a partial
    dominating set X on the distance-<=radius graph of [q]^{r'}, and returns
    (X + every suffix) together with (missed prefixes + a recursive cover of
    [q]^r). Words whose prefix is dominated by X are covered through the X
    part; all other prefixes are missed, so their words are covered through
    the suffix code. The recursion bottoms out at n <= radius (single zero
    word) or r = 0, where ``base_policy`` decides between an exact solve and
    a greedy ball cover ("auto" picks by space size; "trivial" insists on
    the zero-word case and errors if the recursion stops early).

    Requires x > radius * ln(y) with y > 1. Deterministic for a fixed seed.
    """
    if base_policy not in BASE_POLICIES:
        raise ValueError(f"unknown base policy {base_policy!r}; expected one of {BASE_POLICIES}")
    if space.n < 1:
        raise InfeasibleParamsError("requires n >= 1")
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    if not y > 1:
        raise InfeasibleParamsError("requires y > 1")
    if not x > radius * math.log(y):
        raise InfeasibleParamsError("requires x > R*ln(y) (equivalently exp(-x)*y^R < 1)")

    q = space.q
    trace = ConstructionTrace(
        q=q, n=space.n, radius=radius, x=x, y=y, base_policy=base_policy, seed=seed
    )

    def base_cover(sub: HammingSpace) -> frozenset:
        policy = base_policy
        if policy == "trivial":
            raise InfeasibleParamsError(
                f"base policy 'trivial' stopped at [q]^{sub.n} with n > R={radius}; "
                "choose y <= n so the recursion can continue, or a solving policy"
            )
        if policy == "auto":
            policy = "exact" if sub.size <= exact_budget else "greedy"
        if policy == "exact":
            res = minimal_covering_code(
                sub, radius, node_budget=exact_node_budget, guard=exact_budget
            )
            method = "exact" if res.status == "optimal" else "exact-incumbent"
            trace.base = BaseRecord(sub.n, method, len(res.code))
            return res.code.words
        words = greedy_ball_cover(sub, radius)
        trace.base = BaseRecord(sub.n, "greedy", len(words))
        return frozenset(words)

    def build(n: int, depth: int) -> frozenset:
        sub = HammingSpace(q, n)
        if n <= radius:
            trace.base = BaseRecord(n, "trivial", 1)
            return frozenset({sub.zero})
        r = floor_div_real(n, y)
        if r == 0:
            return base_cover(sub)
        r_prime = n - r
        prefix_space = HammingSpace(q, r_prime)
        graph = hamming_graph_view(prefix_space, radius, guard=guard)
        dom = dominating_partial(graph, x, seed=f"{seed}/{depth}", max_trials=max_trials)
        k2 = build(r, depth + 1) if dom.N_bar else frozenset()
        words = set()
        for v in dom.X:
            prefix = index_word(prefix_space, v)
            for suffix in product(range(q), repeat=r):
                words.add(prefix + suffix)
        for v in dom.N_bar:
            prefix = index_word(prefix_space, v)
            for w2 in k2:
                words.add(prefix + w2)
        assert len(words) == len(dom.X) * q**r + len(dom.N_bar) * len(k2)
        trace.levels.append(
            TraceLevel(
                n=n,
                r=r,
                r_prime=r_prime,
                m=graph.m,
                d=graph.d,
                x_size=len(dom.X),
                nbar_size=len(dom.N_bar),
                k2_size=len(k2),
                k_size=len(words),
            )
        )
        return frozenset(words)

    words = build(space.n, 0)
    code = Code(space, words)
    trace.levels.reverse()  # top level first
    trace.total_size = len(code)
    trace.density = density(code, radius)
    return code, trace


def dumps_trace(trace: ConstructionTrace) -> str:
    return json.dumps(trace.to_json_dict(), sort_keys=True, indent=2) + "\n"
