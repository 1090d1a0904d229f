"""Convert a WordNet 2.0 distribution to the neutral TSV formats.

Reads the ``data.{noun,verb,adj,adv}`` database files (found either
directly in the given directory or under a ``dict/`` subdirectory) and
writes ``lexicon.tsv`` and ``edges.tsv``.  Sense keys are
``<offset>-<pos letter>`` with adjective satellites folded into ``a``.
Lemma-level pointers are lifted to synset level; glosses are dropped.

This importer is a standalone utility: the core loader only ever sees
the TSV formats it produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

_DATA_FILES = (
    ("noun", "n"),
    ("verb", "v"),
    ("adj", "a"),
    ("adv", "r"),
)

_POS_NAMES = {"n": "noun", "v": "verb", "a": "adjective", "r": "adverb"}

_SS_TYPE = {"n": "n", "v": "v", "a": "a", "s": "a", "r": "r"}

_POINTER_TYPES = {
    "!": "antonym",
    "@": "hypernym",
    "~": "hyponym",
    "#m": "member_holonym",
    "#s": "substance_holonym",
    "#p": "part_holonym",
    "%m": "member_meronym",
    "%s": "substance_meronym",
    "%p": "part_meronym",
    "=": "attribute",
    "+": "nominalization",
    ";c": "category_domain",
    "-c": "category_domain",
    ";r": "region_domain",
    "-r": "region_domain",
    ";u": "usage_domain",
    "-u": "usage_domain",
    "*": "entailment",
    ">": "cause",
    "^": "also_see",
    "$": "verb_group",
    "&": "similar",
    "<": "participle_of",
    "\\": "derived",
}


class WordNetImportError(ValueError):
    pass


@dataclass
class ImportCounts:
    senses: int = 0
    lexicon_rows: int = 0
    edges: int = 0
    skipped_pointers: int = 0


def _strip_marker(word: str) -> str:
    # Adjective words may carry a syntactic position marker, e.g. "alone(p)".
    if word.endswith(")") and "(" in word:
        word = word[:word.index("(")]
    return word


def _parse_data_line(line: str, lineno: int, path: Path):
    head = line.split(" | ", 1)[0]
    fields = head.split()
    try:
        offset = int(fields[0])
        ss_type = _SS_TYPE[fields[2]]
        w_cnt = int(fields[3], 16)
        words = []
        pos = 4
        for _ in range(w_cnt):
            words.append(_strip_marker(fields[pos]).lower())
            pos += 2  # word, lex_id
        p_cnt = int(fields[pos])
        pos += 1
        pointers = []
        for _ in range(p_cnt):
            symbol, target_offset, target_pos, _source = fields[pos:pos + 4]
            pointers.append((symbol, int(target_offset), target_pos))
            pos += 4
    except (IndexError, KeyError, ValueError) as exc:
        raise WordNetImportError(
            f"{path}:{lineno}: cannot parse data line: {exc}") from None
    return offset, ss_type, words, pointers


def _key(offset: int, pos_letter: str) -> str:
    return f"{offset:08d}-{pos_letter}"


def _find_data_file(wordnet_dir: Path, name: str) -> Path | None:
    for candidate in (wordnet_dir / f"data.{name}",
                      wordnet_dir / "dict" / f"data.{name}"):
        if candidate.is_file():
            return candidate
    return None


def import_wordnet(wordnet_dir: Path, out_dir: Path) -> ImportCounts:
    """Write ``lexicon.tsv`` and ``edges.tsv`` under ``out_dir``."""
    wordnet_dir = Path(wordnet_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    counts = ImportCounts()
    seen_keys: set[str] = set()
    lexicon_rows: list[tuple[str, str, str]] = []
    edge_rows: list[tuple[str, str, str]] = []
    found_any = False

    for name, pos_letter in _DATA_FILES:
        path = _find_data_file(wordnet_dir, name)
        if path is None:
            continue
        found_any = True
        with open(path, encoding="utf-8", errors="replace") as fh:
            for lineno, line in enumerate(fh, start=1):
                if line.startswith("  ") or not line.strip():
                    continue  # license header
                offset, ss_type, words, pointers = _parse_data_line(
                    line.rstrip("\n"), lineno, path)
                key = _key(offset, ss_type)
                if key not in seen_keys:
                    seen_keys.add(key)
                    counts.senses += 1
                for word in words:
                    lexicon_rows.append((word, _POS_NAMES[ss_type], key))
                    counts.lexicon_rows += 1
                for symbol, target_offset, target_pos in pointers:
                    edge_type = _POINTER_TYPES.get(symbol)
                    if edge_type is None:
                        counts.skipped_pointers += 1
                        continue
                    target_key = _key(target_offset,
                                      _SS_TYPE.get(target_pos, target_pos))
                    edge_rows.append((key, edge_type, target_key))
                    counts.edges += 1

    if not found_any:
        raise WordNetImportError(
            f"no data.* files found under {wordnet_dir} (or its dict/)")

    with open(out_dir / "lexicon.tsv", "w", encoding="utf-8") as out:
        out.write("# lemma\tpos\tsense_key\n")
        for row in lexicon_rows:
            out.write("\t".join(row) + "\n")
    with open(out_dir / "edges.tsv", "w", encoding="utf-8") as out:
        out.write("# source_key\tedge_type\ttarget_key\n")
        for row in edge_rows:
            out.write("\t".join(row) + "\n")
    return counts
