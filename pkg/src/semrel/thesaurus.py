"""Weighted lexical thesaurus graph.

A thesaurus is a set of word senses connected by typed, weighted semantic
edges.  This module parses the neutral TSV input format (a lexicon file
mapping lemmas to senses, and an edge list), synthesizes missing inverse
edges so the graph is inverse-closed, computes a depth table over the
hypernym hierarchy, and exposes lemma lookup with light morphological
normalization.

The loaded :class:`ThesaurusGraph` is immutable and safe for unlimited
concurrent readers.
"""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

NOUN = "noun"
VERB = "verb"
ADJECTIVE = "adjective"
ADVERB = "adverb"

POS_VALUES = (NOUN, VERB, ADJECTIVE, ADVERB)

_POS_ALIASES = {
    "n": NOUN, "noun": NOUN,
    "v": VERB, "verb": VERB,
    "a": ADJECTIVE, "adj": ADJECTIVE, "adjective": ADJECTIVE, "s": ADJECTIVE,
    "r": ADVERB, "adv": ADVERB, "adverb": ADVERB,
}

# Edge-type vocabulary.  Inverse pairs share one weight; every other type
# is its own inverse (the synthesized reverse edge carries the same name).
INVERSE_TYPE = {
    "hypernym": "hyponym",
    "hyponym": "hypernym",
    "part_meronym": "part_holonym",
    "part_holonym": "part_meronym",
    "member_meronym": "member_holonym",
    "member_holonym": "member_meronym",
    "substance_meronym": "substance_holonym",
    "substance_holonym": "substance_meronym",
    "nominalization": "nominalization",
    "category_domain": "category_domain",
    "region_domain": "region_domain",
    "similar": "similar",
    "usage_domain": "usage_domain",
    "antonym": "antonym",
    "verb_group": "verb_group",
    "also_see": "also_see",
    "attribute": "attribute",
    "entailment": "entailment",
    "cause": "cause",
    "derived": "derived",
    "participle_of": "participle_of",
}

# Default weights: relative frequency of each relation category in a
# full noun/verb/adjective/adverb thesaurus, one shared value per
# inverse pair.  Seventeen categories, listed by descending weight.
DEFAULT_CATEGORY_WEIGHTS = {
    "hypernym": 0.61,
    "nominalization": 0.147,
    "category_domain": 0.094,
    "part_meronym": 0.0367,
    "region_domain": 0.0238,
    "similar": 0.02,
    "usage_domain": 0.016,
    "member_meronym": 0.014,
    "antonym": 0.0105,
    "verb_group": 0.01,
    "also_see": 0.0091,
    "attribute": 0.00414,
    "entailment": 0.00195,
    "cause": 0.00158,
    "substance_meronym": 0.00089,
    "derived": 0.0003,
    "participle_of": 3.4e-06,
}

EDGE_TYPES: tuple[str, ...] = tuple(sorted(INVERSE_TYPE))
_TYPE_ID = {name: i for i, name in enumerate(EDGE_TYPES)}
_INVERSE_ID = tuple(_TYPE_ID[INVERSE_TYPE[t]] for t in EDGE_TYPES)

# Hierarchy edges: hypernym points toward the root, hyponym away from it.
_HYPERNYM_ID = _TYPE_ID["hypernym"]
_HYPONYM_ID = _TYPE_ID["hyponym"]
_DERIVED_ID = _TYPE_ID["derived"]


class ThesaurusError(ValueError):
    """Malformed thesaurus input: bad line, unknown type, bad weight,
    or a dangling sense reference."""


def canonical_type_name(name: str) -> str:
    """Representative name of an edge type's category (pair minimum
    by weight-table membership, e.g. both hypernym and hyponym map to
    ``hypernym``)."""
    if name not in INVERSE_TYPE:
        raise ThesaurusError(f"unknown edge type: {name!r}")
    if name in DEFAULT_CATEGORY_WEIGHTS:
        return name
    return INVERSE_TYPE[name]


@dataclass(frozen=True)
class SenseId:
    """One thesaurus sense: a dense index, an opaque key, and a POS."""

    index: int
    key: str
    pos: str

    def __repr__(self) -> str:
        return f"SenseId({self.index}, {self.key!r}, {self.pos!r})"


class WeightConfig:
    """Edge-type weights, all strictly inside (0, 1).

    Setting a weight updates the inverse partner too, so inverse pairs
    can never drift apart.
    """

    def __init__(self, overrides: dict[str, float] | None = None):
        self._weights = {
            name: DEFAULT_CATEGORY_WEIGHTS[canonical_type_name(name)]
            for name in EDGE_TYPES
        }
        for name, w in (overrides or {}).items():
            self.set_weight(name, w)

    def weight(self, name: str) -> float:
        try:
            return self._weights[name]
        except KeyError:
            raise ThesaurusError(f"unknown edge type: {name!r}") from None

    def set_weight(self, name: str, w: float) -> None:
        if name not in INVERSE_TYPE:
            raise ThesaurusError(f"unknown edge type: {name!r}")
        if not (0.0 < w < 1.0):
            raise ThesaurusError(
                f"weight outside (0,1) for edge type {name!r}: {w}")
        self._weights[name] = w
        self._weights[INVERSE_TYPE[name]] = w

    def by_type_id(self) -> tuple[float, ...]:
        return tuple(self._weights[t] for t in EDGE_TYPES)

    def dump(self) -> list[tuple[str, float]]:
        """The seventeen category weights, descending, for golden checks."""
        rows = [(c, self._weights[c]) for c in DEFAULT_CATEGORY_WEIGHTS]
        rows.sort(key=lambda r: (-r[1], r[0]))
        return rows


@dataclass(frozen=True)
class DepthTable:
    """Hierarchy depth per sense (root depth = 1) and the global maximum."""

    by_index: tuple[int, ...]
    d_max: int

    def depth(self, sense: SenseId) -> int:
        return self.by_index[sense.index]


class ThesaurusGraph:
    """Immutable sense graph with typed weighted edges and a lemma lexicon.

    ``adjacency[i]`` lists ``(target_index, type_id)`` pairs sorted by
    target then type; the graph is inverse-closed, so every edge has a
    reverse of equal weight.  Composite search costs are precomputed per
    directed edge at build time.
    """

    __slots__ = (
        "senses", "adjacency", "lexicon", "depths", "weights",
        "cross_pos", "fingerprint", "_key_to_index", "type_weights",
        "sr_costs", "pr_costs",
    )

    def __init__(self, senses, adjacency, lexicon, depths, weights, cross_pos):
        self.senses: tuple[SenseId, ...] = senses
        self.adjacency: tuple[tuple[tuple[int, int], ...], ...] = adjacency
        self.lexicon: dict[str, tuple[int, ...]] = lexicon
        self.depths: DepthTable = depths
        self.weights: WeightConfig = weights
        self.cross_pos: tuple[bool, ...] = cross_pos
        self._key_to_index = {s.key: s.index for s in senses}
        self.type_weights = weights.by_type_id()
        self.sr_costs, self.pr_costs = self._edge_costs()
        self.fingerprint = self._fingerprint()

    def __len__(self) -> int:
        return len(self.senses)

    def __contains__(self, sense: SenseId) -> bool:
        return (0 <= sense.index < len(self.senses)
                and self.senses[sense.index] == sense)

    def sense(self, key: str) -> SenseId:
        try:
            return self.senses[self._key_to_index[key]]
        except KeyError:
            raise ThesaurusError(f"unknown sense key: {key!r}") from None

    def has_key(self, key: str) -> bool:
        return key in self._key_to_index

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def _edge_costs(self):
        # -log of the depth-scaled weight (for max-product relatedness
        # search) and of the raw weight (for compactness-only search),
        # per directed edge, parallel to adjacency.
        depths = self.depths.by_index
        d_max = self.depths.d_max
        tw = self.type_weights
        log = math.log
        sr_costs = []
        pr_costs = []
        for u, neighbors in enumerate(self.adjacency):
            du = depths[u]
            sr_row = []
            pr_row = []
            for v, t in neighbors:
                dv = depths[v]
                w = tw[t]
                composite = w * (2.0 * du * dv) / ((du + dv) * d_max)
                sr_row.append(-log(composite))
                pr_row.append(-log(w))
            sr_costs.append(tuple(sr_row))
            pr_costs.append(tuple(pr_row))
        return tuple(sr_costs), tuple(pr_costs)

    def _fingerprint(self) -> bytes:
        h = hashlib.sha256()
        h.update(str(len(self.senses)).encode())
        for s in self.senses:
            h.update(f"|{s.key}/{s.pos}".encode())
        for u, neighbors in enumerate(self.adjacency):
            for v, t in neighbors:
                h.update(f"|{u}>{EDGE_TYPES[t]}>{v}".encode())
        for t, w in zip(EDGE_TYPES, self.type_weights):
            h.update(f"|{t}={w!r}".encode())
        h.update(("|" + ",".join(map(str, self.depths.by_index))).encode())
        h.update(f"|dmax={self.depths.d_max}".encode())
        return h.digest()[:16]


def build_graph(
    lexicon_rows: Iterable[tuple[str, str, str]],
    edge_rows: Iterable[tuple[str, str, str]],
    weight_overrides: dict[str, float] | None = None,
    depth_overrides: dict[str, int] | None = None,
) -> ThesaurusGraph:
    """Assemble a graph from (lemma, pos, sense_key) and
    (source_key, type, target_key) rows.

    Sense indices follow first appearance in the lexicon rows.  Missing
    inverse edges are synthesized; duplicate edges collapse.  Depths are
    computed from the hypernym hierarchy unless overridden per key.
    """
    weights = WeightConfig(weight_overrides)

    senses: list[SenseId] = []
    key_to_index: dict[str, int] = {}
    lexicon: dict[str, list[int]] = {}
    for lemma, pos, key in lexicon_rows:
        pos_name = _POS_ALIASES.get(pos.lower())
        if pos_name is None:
            raise ThesaurusError(f"unknown part of speech: {pos!r}")
        idx = key_to_index.get(key)
        if idx is None:
            idx = len(senses)
            key_to_index[key] = idx
            senses.append(SenseId(idx, key, pos_name))
        elif senses[idx].pos != pos_name:
            raise ThesaurusError(
                f"sense {key!r} listed with conflicting POS "
                f"{senses[idx].pos!r} and {pos_name!r}")
        lemma_norm = lemma.lower()
        entry = lexicon.setdefault(lemma_norm, [])
        if idx not in entry:
            entry.append(idx)

    directed: set[tuple[int, int, int]] = set()
    cross_pos = [False] * len(EDGE_TYPES)
    for src_key, type_name, dst_key in edge_rows:
        t = _TYPE_ID.get(type_name)
        if t is None:
            raise ThesaurusError(f"unknown edge type: {type_name!r}")
        try:
            u = key_to_index[src_key]
            v = key_to_index[dst_key]
        except KeyError as exc:
            raise ThesaurusError(
                f"dangling sense reference: {exc.args[0]!r}") from None
        directed.add((u, t, v))
        directed.add((v, _INVERSE_ID[t], u))
        if senses[u].pos != senses[v].pos:
            cross_pos[t] = True
            cross_pos[_INVERSE_ID[t]] = True

    adjacency_lists: list[list[tuple[int, int]]] = [[] for _ in senses]
    for u, t, v in sorted(directed):
        adjacency_lists[u].append((v, t))
    sense_tuple = tuple(senses)
    adjacency = tuple(tuple(a) for a in adjacency_lists)

    depths = _depths_from_adjacency(sense_tuple, adjacency)
    if depth_overrides:
        by_index = list(depths.by_index)
        for key, d in depth_overrides.items():
            if key not in key_to_index:
                raise ThesaurusError(f"dangling sense reference: {key!r}")
            if d < 1:
                raise ThesaurusError(f"depth must be >= 1 for {key!r}: {d}")
            by_index[key_to_index[key]] = d
        depths = DepthTable(tuple(by_index), max(by_index))
    return ThesaurusGraph(
        senses=sense_tuple,
        adjacency=adjacency,
        lexicon={k: tuple(sorted(v)) for k, v in lexicon.items()},
        depths=depths,
        weights=weights,
        cross_pos=tuple(cross_pos),
    )


def compute_depths(graph: ThesaurusGraph) -> DepthTable:
    """Depth table over the hypernym hierarchy.

    A root is a sense with no outgoing hypernym edge; roots sit at depth 1
    and every other sense at 1 + its minimum hop count to a root.  Adverbs
    take the depth of a linked stem adjective when one exists.  Senses the
    hierarchy never reaches (including hypernym cycles) fall back to 1.
    """
    return _depths_from_adjacency(graph.senses, graph.adjacency)


def _depths_from_adjacency(
    senses: Sequence[SenseId],
    adjacency: Sequence[Sequence[tuple[int, int]]],
) -> DepthTable:
    n = len(senses)
    children: list[list[int]] = [[] for _ in range(n)]
    has_parent = [False] * n
    for u in range(n):
        for v, t in adjacency[u]:
            if t == _HYPERNYM_ID:
                has_parent[u] = True
                children[v].append(u)

    depth = [0] * n
    queue: deque[int] = deque()
    for u in range(n):
        if not has_parent[u]:
            depth[u] = 1
            queue.append(u)
    while queue:
        u = queue.popleft()
        for v in children[u]:
            if depth[v] == 0:
                depth[v] = depth[u] + 1
                queue.append(v)

    for u in range(n):
        if depth[u] == 0:
            depth[u] = 1

    for u in range(n):
        if senses[u].pos != ADVERB:
            continue
        stem_depths = [
            depth[v] for v, t in adjacency[u]
            if t == _DERIVED_ID and senses[v].pos == ADJECTIVE
        ]
        if stem_depths:
            depth[u] = min(stem_depths)

    return DepthTable(tuple(depth), max(depth) if depth else 1)


def _tsv_rows(path: Path, n_fields: int) -> Iterable[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != n_fields:
                raise ThesaurusError(
                    f"{path}:{lineno}: malformed line, expected "
                    f"{n_fields} tab-separated fields: {line!r}")
            yield lineno, fields


def load_weight_overrides(path: str | Path) -> dict[str, float]:
    overrides: dict[str, float] = {}
    for lineno, (name, raw) in _tsv_rows(Path(path), 2):
        try:
            w = float(raw)
        except ValueError:
            raise ThesaurusError(
                f"{path}:{lineno}: malformed line, bad weight {raw!r}")
        if name not in INVERSE_TYPE:
            raise ThesaurusError(
                f"{path}:{lineno}: unknown edge type: {name!r}")
        if not (0.0 < w < 1.0):
            raise ThesaurusError(
                f"{path}:{lineno}: weight outside (0,1) "
                f"for edge type {name!r}: {w}")
        overrides[name] = w
    return overrides


def load_depth_overrides(path: str | Path) -> dict[str, int]:
    overrides: dict[str, int] = {}
    for lineno, (key, raw) in _tsv_rows(Path(path), 2):
        try:
            d = int(raw)
        except ValueError:
            raise ThesaurusError(
                f"{path}:{lineno}: malformed line, bad depth {raw!r}")
        overrides[key] = d
    return overrides


def load_thesaurus(
    lexicon_file: str | Path,
    edges_file: str | Path,
    weight_overrides: str | Path | None = None,
    depth_overrides: str | Path | None = None,
) -> ThesaurusGraph:
    """Load a graph from the TSV lexicon and edge-list files.

    Lexicon rows are ``lemma<TAB>pos<TAB>sense_key``; edge rows are
    ``source_key<TAB>type<TAB>target_key``.  Lines starting with ``#``
    and blank lines are skipped.  Errors carry file and line number.
    """
    lex_rows = [
        (lemma, pos, key)
        for _, (lemma, pos, key) in _tsv_rows(Path(lexicon_file), 3)
    ]
    edge_rows = [
        (src, t, dst)
        for _, (src, t, dst) in _tsv_rows(Path(edges_file), 3)
    ]
    w_over = load_weight_overrides(weight_overrides) if weight_overrides else None
    d_over = load_depth_overrides(depth_overrides) if depth_overrides else None
    return build_graph(lex_rows, edge_rows, w_over, d_over)


# Suffix-stripping rules tried in order after the raw lowercased form:
# noun plural endings, verb inflections (with doubled-consonant repair),
# then adjective comparison endings.  First lexicon hit wins.
def normalization_candidates(token: str) -> list[str]:
    t = token.lower()
    out = [t]

    def add(form: str) -> None:
        if form and form not in out:
            out.append(form)

    if t.endswith("ies") and len(t) > 3:
        add(t[:-3] + "y")
    if t.endswith("es") and len(t) > 2:
        add(t[:-2])
    if t.endswith("s") and len(t) > 1:
        add(t[:-1])
    if t.endswith("ed") and len(t) > 2:
        stem = t[:-2]
        add(stem)
        if len(stem) >= 2 and stem[-1] == stem[-2]:
            add(stem[:-1])
    if t.endswith("ing") and len(t) > 3:
        stem = t[:-3]
        add(stem)
        if len(stem) >= 2 and stem[-1] == stem[-2]:
            add(stem[:-1])
    if t.endswith("er") and len(t) > 2:
        add(t[:-2])
    if t.endswith("est") and len(t) > 3:
        add(t[:-3])
    return out


def senses_of(
    term: str,
    graph: ThesaurusGraph,
    pos: str | None = None,
) -> set[SenseId]:
    """Senses of a raw token after morphological normalization.

    The first candidate form present in the lexicon decides the entry;
    an empty set signals an out-of-vocabulary term.  ``pos`` optionally
    restricts the result to one part of speech.
    """
    if pos is not None:
        pos = _POS_ALIASES.get(pos.lower(), pos)
    for candidate in normalization_candidates(term):
        indices = graph.lexicon.get(candidate)
        if indices:
            found = {graph.senses[i] for i in indices}
            if pos is not None:
                found = {s for s in found if s.pos == pos}
            return found
    return set()
