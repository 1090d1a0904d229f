import itertools
from pathlib import Path

import numpy as np
import pytest

from semrel import build_graph, load_thesaurus

DATA = Path(__file__).parent / "data"

# One category per random pair edge, so each edge can carry its own
# uniform weight; inverse pairs share the weight by construction.
RANDOM_EDGE_CATEGORIES = (
    "hypernym", "nominalization", "category_domain", "part_meronym",
    "region_domain", "similar", "usage_domain", "member_meronym",
    "antonym", "verb_group", "also_see", "attribute", "entailment",
    "cause", "substance_meronym", "derived", "participle_of",
)


@pytest.fixture(scope="session")
def fig3_graph():
    """Car/accelerator/autobus subtree: a deep hypernym hierarchy plus a
    direct part-meronym edge between car and accelerator."""
    return load_thesaurus(DATA / "fig3_lexicon.tsv", DATA / "fig3_edges.tsv")


@pytest.fixture
def tiny_graph():
    """Three nouns: car IS-A vehicle, wheel PART-OF car."""
    return build_graph(
        [("car", "noun", "car-n"),
         ("vehicle", "noun", "vehicle-n"),
         ("wheel", "noun", "wheel-n")],
        [("car-n", "hypernym", "vehicle-n"),
         ("wheel-n", "part_meronym", "car-n")],
    )


def make_random_graph_spec(rng: np.random.Generator, max_nodes=10,
                           max_pair_edges=12, max_depth=6):
    """Build arguments for an inverse-closed random graph: up to
    ``max_pair_edges`` undirected edges, each with its own category and
    a uniform weight in (0.05, 0.95); depths uniform in 1..max_depth."""
    n = int(rng.integers(2, max_nodes + 1))
    lexicon_rows = [(f"w{i}", "noun", f"s{i:03d}-n") for i in range(n)]
    all_pairs = list(itertools.combinations(range(n), 2))
    k = int(rng.integers(1, min(max_pair_edges, len(all_pairs)) + 1))
    picks = rng.choice(len(all_pairs), size=k, replace=False)
    edges = []
    weights = {}
    for slot, pick in enumerate(sorted(int(p) for p in picks)):
        u, v = all_pairs[pick]
        category = RANDOM_EDGE_CATEGORIES[slot]
        weights[category] = float(rng.uniform(0.05, 0.95))
        edges.append((f"s{u:03d}-n", category, f"s{v:03d}-n"))
    depth_overrides = {
        f"s{i:03d}-n": int(rng.integers(1, max_depth + 1)) for i in range(n)
    }
    return lexicon_rows, edges, weights, depth_overrides


def make_random_graph(rng: np.random.Generator, **kwargs):
    return build_graph(*make_random_graph_spec(rng, **kwargs))
