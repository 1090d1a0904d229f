"""Sense-pair relatedness over a thesaurus graph.

The main measure scores a pair of senses by the best connecting path,
where a path is valued by the product of its edge weights (compactness)
times a product of depth factors (path elaboration).  Because every
depth-scaled edge weight lies strictly in (0, 1), the best path is found
with a Dijkstra-style search that minimizes the sum of negative log
weights.  Two compactness-only analysis measures (``pr``: product of raw
weights; ``nwpl``: maximum mean edge weight over simple paths) and four
classic taxonomy baselines are provided alongside, plus an exhaustive
enumeration oracle used to validate the search on small graphs.

All functions are pure over an immutable graph and safe to call
concurrently.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from heapq import heappop, heappush
from pathlib import Path
from typing import Iterable, Sequence

from .thesaurus import (
    EDGE_TYPES,
    DepthTable,
    SenseId,
    ThesaurusGraph,
    ThesaurusError,
    WeightConfig,
    _HYPERNYM_ID,
    _HYPONYM_ID,
)

PATH_MODES = ("sr", "pr", "nwpl")
BASELINE_MODES = ("leacock", "resnik", "jiang_conrath", "lin")

_INF = float("inf")


@dataclass(frozen=True)
class SemanticPath:
    """A witness path: l+1 senses, l typed edges, and its two products."""

    senses: tuple[SenseId, ...]
    edges: tuple[str, ...]
    compactness: float
    elaboration: float

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class SenseRelatedness:
    """A relatedness value with the path that attains it (when one exists)."""

    value: float
    witness: SemanticPath | None
    mode: str


def compactness(path: SemanticPath, weights: WeightConfig) -> float:
    """Product of the path's edge weights; 1 for the empty path."""
    value = 1.0
    for name in path.edges:
        value *= weights.weight(name)
    return value


def path_elaboration(path: SemanticPath, depths: DepthTable) -> float:
    """Product over consecutive senses of their harmonic-mean depth
    scaled by the maximum depth; for a single-sense path, its own
    depth over the maximum."""
    if depths.d_max < 1:
        raise ValueError("depth table has no senses")
    ds = [depths.depth(s) for s in path.senses]
    d_max = depths.d_max
    if not path.edges:
        return ds[0] / d_max
    value = 1.0
    for a, b in zip(ds, ds[1:]):
        value *= (2.0 * a * b) / ((a + b) * d_max)
    return value


def _make_path(graph: ThesaurusGraph, indices: Sequence[int],
               type_ids: Sequence[int]) -> SemanticPath:
    senses = tuple(graph.senses[i] for i in indices)
    edges = tuple(EDGE_TYPES[t] for t in type_ids)
    path = SemanticPath(senses, edges, 1.0, 1.0)
    c = compactness(path, graph.weights)
    e = path_elaboration(path, graph.depths)
    return SemanticPath(senses, edges, c, e)


def _check_sense(graph: ThesaurusGraph, sense: SenseId) -> int:
    if sense not in graph:
        raise ThesaurusError(f"sense not in graph: {sense!r}")
    return sense.index


def _identity(graph: ThesaurusGraph, sense: SenseId, mode: str) -> SenseRelatedness:
    witness = _make_path(graph, [sense.index], [])
    if mode == "sr":
        value = graph.depths.depth(sense) / graph.depths.d_max
    else:
        value = 1.0
    return SenseRelatedness(value, witness, mode)


def _dijkstra(
    graph: ThesaurusGraph,
    source: int,
    targets: set[int] | None,
    mode: str,
    exclude_cross_pos: bool,
    max_path_len: int | None,
):
    """Settle max-product distances from ``source``; stops once every
    target is settled.  Ties in the priority queue break toward the
    lower sense index, which makes witness paths deterministic."""
    n = len(graph.senses)
    dist = [_INF] * n
    pred = [-1] * n
    pred_type = [-1] * n
    hops = [0] * n
    settled = bytearray(n)
    dist[source] = 0.0
    remaining = set(targets) if targets is not None else None
    if remaining is not None:
        remaining.discard(source)
    costs = graph.sr_costs if mode == "sr" else graph.pr_costs
    adjacency = graph.adjacency
    cross = graph.cross_pos
    heap = [(0.0, source)]
    while heap:
        d, u = heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        if remaining is not None:
            remaining.discard(u)
            if not remaining:
                break
        if max_path_len is not None and hops[u] >= max_path_len:
            continue
        row = costs[u]
        for i, (v, t) in enumerate(adjacency[u]):
            if settled[v] or (exclude_cross_pos and cross[t]):
                continue
            nd = d + row[i]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                pred_type[v] = t
                hops[v] = hops[u] + 1
                heappush(heap, (nd, v))
    return dist, pred, pred_type


def _reconstruct(pred, pred_type, source: int, target: int):
    indices = [target]
    types: list[int] = []
    u = target
    while u != source:
        types.append(pred_type[u])
        u = pred[u]
        indices.append(u)
    indices.reverse()
    types.reverse()
    return indices, types


def _graph_max_weight(graph: ThesaurusGraph, exclude_cross_pos: bool) -> float:
    w_max = 0.0
    tw = graph.type_weights
    for u in range(len(graph.senses)):
        for v, t in graph.adjacency[u]:
            if exclude_cross_pos and graph.cross_pos[t]:
                continue
            if tw[t] > w_max:
                w_max = tw[t]
    return w_max


def _nwpl_neighbor_order(graph: ThesaurusGraph):
    tw = graph.type_weights
    order = []
    for u in range(len(graph.senses)):
        row = sorted(graph.adjacency[u], key=lambda e: (-tw[e[1]], e[0], e[1]))
        order.append(row)
    return order


def _nwpl_search(
    graph: ThesaurusGraph,
    source: int,
    target: int,
    exclude_cross_pos: bool,
    cap: int | None,
):
    """Best mean edge weight over simple paths, by depth-capped DFS with
    branch-and-bound pruning.  The default cap (sense count - 1) admits
    every simple path; heavier edges are explored first so a path made
    purely of maximum-weight edges ends the search immediately."""
    n = len(graph.senses)
    if cap is None:
        cap = n - 1
    w_max = _graph_max_weight(graph, exclude_cross_pos)
    if w_max == 0.0:
        return None
    tw = graph.type_weights
    cross = graph.cross_pos
    order = _nwpl_neighbor_order(graph)

    best_value = -1.0
    best_path: tuple[list[int], list[int]] | None = None
    on_path = bytearray(n)
    on_path[source] = 1
    path_nodes = [source]
    path_types: list[int] = []
    path_sum = 0.0

    # Explicit DFS stack of per-node neighbor iterators.
    stack = [iter(order[source])]
    while stack:
        frame = stack[-1]
        advanced = False
        for v, t in frame:
            if on_path[v] or (exclude_cross_pos and cross[t]):
                continue
            w = tw[t]
            s = path_sum + w
            length = len(path_types) + 1
            if v == target:
                value = s / length
                if value > best_value:
                    best_value = value
                    best_path = (path_nodes + [v], path_types + [t])
                    if best_value >= w_max:
                        return best_value, best_path
                continue
            if length >= cap:
                continue
            # Upper bound over any completion of k more edges within cap.
            ub = max((s + w_max) / (length + 1),
                     (s + (cap - length) * w_max) / cap)
            if ub <= best_value:
                continue
            on_path[v] = 1
            path_nodes.append(v)
            path_types.append(t)
            path_sum = s
            stack.append(iter(order[v]))
            advanced = True
            break
        if not advanced:
            stack.pop()
            u = path_nodes.pop()
            on_path[u] = 0
            if path_types:
                path_sum -= tw[path_types.pop()]
    if best_path is None:
        return None
    return best_value, best_path


def max_relatedness(
    graph: ThesaurusGraph,
    s1: SenseId,
    s2: SenseId,
    mode: str = "sr",
    *,
    exclude_cross_pos: bool = False,
    max_path_len: int | None = None,
) -> SenseRelatedness:
    """Best-path relatedness between two senses.

    Mode ``sr`` maximizes compactness times elaboration, ``pr`` maximizes
    compactness alone, and ``nwpl`` maximizes the mean edge weight over
    simple paths.  Returns value 0 with no witness when the senses are
    unconnected; for identical senses, ``sr`` yields depth / d_max and the
    other modes 1.  ``max_path_len`` caps witness length for ``sr``/``pr``
    as a latency approximation (off by default).
    """
    if mode not in PATH_MODES:
        raise ValueError(f"unknown measure mode: {mode!r}")
    u = _check_sense(graph, s1)
    v = _check_sense(graph, s2)
    if u == v:
        return _identity(graph, s1, mode)

    if mode == "nwpl":
        found = _nwpl_search(graph, u, v, exclude_cross_pos, max_path_len)
        if found is None:
            return SenseRelatedness(0.0, None, mode)
        _, (indices, types) = found
        witness = _make_path(graph, indices, types)
        value = math.fsum(graph.type_weights[t] for t in types) / len(types)
        return SenseRelatedness(value, witness, mode)

    dist, pred, pred_type = _dijkstra(
        graph, u, {v}, mode, exclude_cross_pos, max_path_len)
    if dist[v] == _INF:
        return SenseRelatedness(0.0, None, mode)
    indices, types = _reconstruct(pred, pred_type, u, v)
    witness = _make_path(graph, indices, types)
    value = witness.compactness * witness.elaboration if mode == "sr" \
        else witness.compactness
    return SenseRelatedness(value, witness, mode)


def relatedness_to_targets(
    graph: ThesaurusGraph,
    source: SenseId,
    targets: Iterable[SenseId],
    mode: str = "sr",
    *,
    exclude_cross_pos: bool = False,
) -> dict[int, SenseRelatedness]:
    """One search, many targets: relatedness from ``source`` to each
    target, keyed by target index.  Values and witnesses are identical
    to per-pair :func:`max_relatedness` calls."""
    if mode not in PATH_MODES:
        raise ValueError(f"unknown measure mode: {mode!r}")
    u = _check_sense(graph, source)
    target_ids = {_check_sense(graph, t): t for t in targets}
    out: dict[int, SenseRelatedness] = {}
    if u in target_ids:
        out[u] = _identity(graph, target_ids[u], mode)
        del target_ids[u]
    if not target_ids:
        return out
    if mode == "nwpl":
        for v, t_sense in sorted(target_ids.items()):
            out[v] = max_relatedness(
                graph, source, t_sense, mode,
                exclude_cross_pos=exclude_cross_pos)
        return out
    dist, pred, pred_type = _dijkstra(
        graph, u, set(target_ids), mode, exclude_cross_pos, None)
    for v in sorted(target_ids):
        if dist[v] == _INF:
            out[v] = SenseRelatedness(0.0, None, mode)
            continue
        indices, types = _reconstruct(pred, pred_type, u, v)
        witness = _make_path(graph, indices, types)
        value = witness.compactness * witness.elaboration if mode == "sr" \
            else witness.compactness
        out[v] = SenseRelatedness(value, witness, mode)
    return out


def brute_force_relatedness(
    graph: ThesaurusGraph,
    s1: SenseId,
    s2: SenseId,
    mode: str = "sr",
    *,
    exclude_cross_pos: bool = False,
    size_limit: int = 12,
) -> float:
    """Exhaustive-enumeration oracle: the maximum objective over all
    simple paths, evaluated by direct products (no log transform).

    Simple paths suffice for ``sr``/``pr`` because every depth-scaled
    weight is strictly below 1, so revisiting a node cannot raise a
    product; ``nwpl`` is defined over simple paths.  Guarded to small
    graphs; raises beyond ``size_limit`` senses.
    """
    if mode not in PATH_MODES:
        raise ValueError(f"unknown measure mode: {mode!r}")
    n = len(graph.senses)
    if n > size_limit:
        raise ValueError(
            f"graph too large for exhaustive search: {n} > {size_limit}")
    u = _check_sense(graph, s1)
    v = _check_sense(graph, s2)
    if u == v:
        return _identity(graph, s1, mode).value

    depths = graph.depths.by_index
    d_max = graph.depths.d_max
    tw = graph.type_weights
    cross = graph.cross_pos
    best = 0.0
    found = False

    on_path = bytearray(n)
    on_path[u] = 1

    def visit(node: int, weights_so_far: list[float], product: float) -> None:
        nonlocal best, found
        for nxt, t in graph.adjacency[node]:
            if on_path[nxt] or (exclude_cross_pos and cross[t]):
                continue
            w = tw[t]
            if mode == "sr":
                step = w * (2.0 * depths[node] * depths[nxt]) \
                    / ((depths[node] + depths[nxt]) * d_max)
            else:
                step = w
            if nxt == v:
                if mode == "nwpl":
                    value = math.fsum(weights_so_far + [w]) \
                        / (len(weights_so_far) + 1)
                else:
                    value = product * step
                if not found or value > best:
                    best = value
                    found = True
                continue
            on_path[nxt] = 1
            visit(nxt, weights_so_far + [w], product * step)
            on_path[nxt] = 0

    visit(u, [], 1.0)
    return best if found else 0.0


class ICTable:
    """Concept occurrence probabilities with derived information content.

    Probabilities live in (0, 1]; information content is their negative
    natural log.  Child probabilities above an ancestor's are reported
    with a warning, not rejected.
    """

    def __init__(self, probabilities: dict[int, float],
                 graph: ThesaurusGraph | None = None):
        for idx, p in probabilities.items():
            if not (0.0 < p <= 1.0):
                raise ValueError(
                    f"probability outside (0,1] for sense index {idx}: {p}")
        self._p = dict(probabilities)
        if graph is not None:
            self._warn_non_monotone(graph)

    def _warn_non_monotone(self, graph: ThesaurusGraph) -> None:
        violations = 0
        for child in range(len(graph.senses)):
            pc = self._p.get(child)
            if pc is None:
                continue
            for parent, t in graph.adjacency[child]:
                if t != _HYPERNYM_ID:
                    continue
                pp = self._p.get(parent)
                if pp is not None and pp < pc:
                    violations += 1
        if violations:
            warnings.warn(
                f"{violations} hypernym edge(s) have an ancestor "
                "probability below the child's", stacklevel=3)

    def __contains__(self, sense: SenseId) -> bool:
        return sense.index in self._p

    def probability(self, sense: SenseId) -> float:
        try:
            return self._p[sense.index]
        except KeyError:
            raise KeyError(
                f"no probability for sense {sense.key!r}") from None

    def ic(self, sense: SenseId) -> float:
        return -math.log(self.probability(sense))

    def ic_by_index(self, index: int) -> float | None:
        p = self._p.get(index)
        return None if p is None else -math.log(p)


def load_ic_table(path: str | Path, graph: ThesaurusGraph) -> ICTable:
    """Read a ``sense_key<TAB>probability`` TSV against a loaded graph."""
    from .thesaurus import _tsv_rows

    probabilities: dict[int, float] = {}
    for lineno, (key, raw) in _tsv_rows(Path(path), 2):
        try:
            p = float(raw)
        except ValueError:
            raise ThesaurusError(
                f"{path}:{lineno}: malformed line, bad probability {raw!r}")
        if not graph.has_key(key):
            raise ThesaurusError(
                f"{path}:{lineno}: dangling sense reference: {key!r}")
        if not (0.0 < p <= 1.0):
            raise ThesaurusError(
                f"{path}:{lineno}: probability outside (0,1]: {p}")
        probabilities[graph.sense(key).index] = p
    return ICTable(probabilities, graph)


def _hierarchy_hops(graph: ThesaurusGraph, source: int, target: int) -> int | None:
    """Minimum hop count between two senses using hierarchy edges only."""
    if source == target:
        return 0
    from collections import deque

    seen = bytearray(len(graph.senses))
    seen[source] = 1
    queue = deque([(source, 0)])
    while queue:
        u, d = queue.popleft()
        for v, t in graph.adjacency[u]:
            if t != _HYPERNYM_ID and t != _HYPONYM_ID:
                continue
            if v == target:
                return d + 1
            if not seen[v]:
                seen[v] = 1
                queue.append((v, d + 1))
    return None


def _ancestors(graph: ThesaurusGraph, start: int) -> set[int]:
    """The hypernym up-closure of a sense, itself included."""
    from collections import deque

    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v, t in graph.adjacency[u]:
            if t == _HYPERNYM_ID and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _least_common_subsumer(
    graph: ThesaurusGraph, u: int, v: int, ic: ICTable,
) -> int | None:
    """Common hypernym ancestor with maximum information content; ties
    break toward the lower sense index.  Ancestors without a probability
    are skipped."""
    common = _ancestors(graph, u) & _ancestors(graph, v)
    best_idx: int | None = None
    best_ic = -1.0
    for idx in sorted(common):
        value = ic.ic_by_index(idx)
        if value is not None and value > best_ic:
            best_idx = idx
            best_ic = value
    return best_idx


def baseline_similarity(
    measure: str,
    s1: SenseId,
    s2: SenseId,
    graph: ThesaurusGraph,
    ic: ICTable | None = None,
    *,
    jc_max: float = 1e9,
) -> float:
    """Classic taxonomy similarity measures for comparison runs.

    ``leacock``: -log(node count of the shortest hierarchy path / (2 *
    maximum depth)), 0 when the hierarchy does not connect the senses.
    ``resnik``: information content of the most informative common
    hypernym ancestor, 0 without one.  ``jiang_conrath``: inverse of
    IC(s1) + IC(s2) - 2 IC(ancestor), capped at ``jc_max`` when the
    denominator vanishes (identical senses).  ``lin``: 2 IC(ancestor) /
    (IC(s1) + IC(s2)), 1 for identical senses.
    """
    if measure not in BASELINE_MODES:
        raise ValueError(f"unknown baseline measure: {measure!r}")
    u = _check_sense(graph, s1)
    v = _check_sense(graph, s2)

    if measure == "leacock":
        hops = _hierarchy_hops(graph, u, v)
        if hops is None:
            return 0.0
        length = hops + 1
        return -math.log(length / (2.0 * graph.depths.d_max))

    if ic is None:
        raise ValueError(f"measure {measure!r} requires an ICTable")

    if measure == "lin" and u == v:
        return 1.0

    lcs = _least_common_subsumer(graph, u, v, ic)
    ic0 = 0.0 if lcs is None else -math.log(ic._p[lcs])

    if measure == "resnik":
        return ic0

    ic1 = ic.ic(s1)
    ic2 = ic.ic(s2)
    if measure == "jiang_conrath":
        denom = ic1 + ic2 - 2.0 * ic0
        if denom <= 0.0:
            return jc_max
        return 1.0 / denom
    # lin
    if ic1 + ic2 == 0.0:
        return 0.0
    return 2.0 * ic0 / (ic1 + ic2)
