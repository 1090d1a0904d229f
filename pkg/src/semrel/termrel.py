"""Term-pair relatedness: the sense-level measure lifted to raw words.

A term maps to its sense set through the lexicon (all parts of speech
by default); the pair score is the maximum over the cross product of
the two sense sets.  Out-of-vocabulary handling is part of the measure:
two identical unknown terms score 1, a known/unknown mixed pair scores
0.  A persistent pair cache can stand in for live path searches; sense
pairs are always evaluated from the lower index to the higher so cached
and live values agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pathfinder import (
    BASELINE_MODES,
    PATH_MODES,
    ICTable,
    SenseRelatedness,
    baseline_similarity,
    max_relatedness,
    relatedness_to_targets,
)
from .thesaurus import SenseId, ThesaurusGraph, senses_of


class CacheMismatchError(RuntimeError):
    """The pair cache was built against a different graph or settings."""


@dataclass(frozen=True)
class TermPairScore:
    """Relatedness of two raw terms with the sense pair that attains it."""

    value: float
    best_pair: tuple[SenseId, SenseId] | None
    t1_in_vocabulary: bool
    t2_in_vocabulary: bool


def _check_cache(graph: ThesaurusGraph, cache, exclude_cross_pos: bool):
    if cache is None:
        return None
    if cache.fingerprint != graph.fingerprint:
        raise CacheMismatchError(
            "pair cache fingerprint does not match the loaded thesaurus")
    if cache.simple != exclude_cross_pos:
        return None
    return cache


def pair_relatedness(
    graph: ThesaurusGraph,
    a: SenseId,
    b: SenseId,
    cache=None,
    *,
    exclude_cross_pos: bool = False,
) -> SenseRelatedness:
    """Sense-pair relatedness, canonically evaluated from the lower
    sense index and served from the cache when possible."""
    cache = _check_cache(graph, cache, exclude_cross_pos)
    lo, hi = (a, b) if a.index <= b.index else (b, a)
    if cache is not None and lo.index != hi.index:
        hit = cache.lookup(lo, hi)
        if hit is not None:
            return SenseRelatedness(hit, None, "sr")
        if cache.covers_all_pairs:
            return SenseRelatedness(0.0, None, "sr")
    return max_relatedness(graph, lo, hi, "sr",
                           exclude_cross_pos=exclude_cross_pos)


def term_relatedness(
    t1: str,
    t2: str,
    graph: ThesaurusGraph,
    cache=None,
    *,
    mode: str = "sr",
    ic: ICTable | None = None,
    pos: str | None = None,
    identical_term_unity: bool = False,
    exclude_cross_pos: bool = False,
) -> TermPairScore:
    """Relatedness between two raw terms.

    Both terms in vocabulary: the maximum over all sense pairs (for two
    identical terms this includes same-sense pairs, which score by sense
    depth, not 1; pass ``identical_term_unity`` to force 1 instead).
    Both out of vocabulary: 1 if the lowercased terms are equal, else 0.
    Exactly one in vocabulary: 0.  ``pos`` restricts sense sets to one
    part of speech; baseline modes need ``ic`` except ``leacock``.
    """
    if mode not in PATH_MODES and mode not in BASELINE_MODES:
        raise ValueError(f"unknown measure mode: {mode!r}")
    x1 = senses_of(t1, graph, pos)
    x2 = senses_of(t2, graph, pos)
    in1, in2 = bool(x1), bool(x2)
    identical = t1.lower() == t2.lower()

    if not in1 and not in2:
        return TermPairScore(1.0 if identical else 0.0, None, in1, in2)
    if in1 != in2:
        return TermPairScore(0.0, None, in1, in2)
    if identical and identical_term_unity:
        return TermPairScore(1.0, None, in1, in2)

    if mode in BASELINE_MODES:
        return _baseline_term_pair(mode, x1, x2, graph, ic, in1, in2)

    # Canonical orientation and deduplication of the sense cross product.
    pairs: dict[tuple[int, int], tuple[SenseId, SenseId]] = {}
    for a in sorted(x1, key=lambda s: s.index):
        for b in sorted(x2, key=lambda s: s.index):
            lo, hi = (a, b) if a.index <= b.index else (b, a)
            pairs.setdefault((lo.index, hi.index), (lo, hi))

    cache = _check_cache(graph, cache, exclude_cross_pos)
    values: dict[tuple[int, int], float] = {}
    missing: dict[int, list[SenseId]] = {}
    for (i, j), (lo, hi) in sorted(pairs.items()):
        if i == j:
            values[(i, j)] = max_relatedness(
                graph, lo, hi, mode,
                exclude_cross_pos=exclude_cross_pos).value
            continue
        if cache is not None:
            hit = cache.lookup(lo, hi)
            if hit is not None:
                values[(i, j)] = hit
                continue
            if cache.covers_all_pairs:
                values[(i, j)] = 0.0
                continue
        missing.setdefault(i, []).append(hi)

    for i, his in sorted(missing.items()):
        lo = graph.senses[i]
        found = relatedness_to_targets(
            graph, lo, his, mode, exclude_cross_pos=exclude_cross_pos)
        for j, rel in found.items():
            values[(i, j)] = rel.value

    best_key: tuple[int, int] | None = None
    best = -1.0
    for key in sorted(values):
        if values[key] > best:
            best = values[key]
            best_key = key
    assert best_key is not None
    lo, hi = pairs[best_key]
    if lo in x1 and hi in x2:
        best_pair = (lo, hi)
    else:
        best_pair = (hi, lo)
    return TermPairScore(best, best_pair, in1, in2)


def _baseline_term_pair(measure, x1, x2, graph, ic, in1, in2) -> TermPairScore:
    best = None
    best_pair = None
    for a in sorted(x1, key=lambda s: s.index):
        for b in sorted(x2, key=lambda s: s.index):
            value = baseline_similarity(measure, a, b, graph, ic)
            if best is None or value > best:
                best = value
                best_pair = (a, b)
    return TermPairScore(best, best_pair, in1, in2)
