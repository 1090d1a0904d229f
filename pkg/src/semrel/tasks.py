"""Evaluation harness: datasets, task protocols, and statistics.

Covers five task families over the relatedness measures: word-pair
similarity ranked against human gold scores, multiple-choice synonym
identification, word-analogy questions scored by horizontal and
vertical relatedness alignment, sentence-pair similarity, and binary
paraphrase detection with a decision threshold.  Correlation and
significance statistics live here too.

Every argmax-style decision breaks ties toward the lowest index and
flags the tie, so reported accuracies are reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .termrel import term_relatedness
from .textrel import (
    build_corpus_stats,
    default_stopwords,
    preprocess,
    text_relatedness,
)
from .thesaurus import ThesaurusError, ThesaurusGraph


@dataclass(frozen=True)
class ChoiceQuestion:
    """A stem (word or word pair) with ordered candidates and the gold index."""

    stem: str | tuple[str, str]
    candidates: tuple
    gold_index: int

    def __post_init__(self):
        if not (0 <= self.gold_index < len(self.candidates)):
            raise ValueError(
                f"gold index {self.gold_index} out of range for "
                f"{len(self.candidates)} candidates")


@dataclass
class EvalReport:
    """Metrics plus the per-item details they were computed from."""

    task: str
    metrics: dict[str, float]
    items: list[dict]
    flags: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# dataset files

def _data_rows(path: Path, n_fields: int):
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


def load_word_pairs(path: str | Path) -> list[tuple[str, str, float]]:
    """``word1<TAB>word2<TAB>gold_score`` rows."""
    pairs = []
    for lineno, (w1, w2, raw) in _data_rows(Path(path), 3):
        try:
            gold = float(raw)
        except ValueError:
            raise ThesaurusError(f"{path}:{lineno}: bad gold score {raw!r}")
        if not math.isfinite(gold):
            raise ThesaurusError(f"{path}:{lineno}: non-finite gold score")
        pairs.append((w1, w2, gold))
    return pairs


def load_choice_questions(path: str | Path) -> list[ChoiceQuestion]:
    """``stem<TAB>cand1;cand2;...<TAB>gold_index`` rows."""
    questions = []
    for lineno, (stem, cands, raw) in _data_rows(Path(path), 3):
        candidates = tuple(c for c in cands.split(";") if c)
        try:
            questions.append(ChoiceQuestion(stem, candidates, int(raw)))
        except ValueError as exc:
            raise ThesaurusError(f"{path}:{lineno}: {exc}")
    return questions


def load_analogy_questions(path: str | Path) -> list[ChoiceQuestion]:
    """``w1<TAB>w2<TAB>w1k:w2k;...<TAB>gold_index`` rows."""
    questions = []
    for lineno, (w1, w2, cands, raw) in _data_rows(Path(path), 4):
        candidates = []
        for chunk in cands.split(";"):
            if not chunk:
                continue
            parts = chunk.split(":")
            if len(parts) != 2:
                raise ThesaurusError(
                    f"{path}:{lineno}: bad candidate pair {chunk!r}")
            candidates.append((parts[0], parts[1]))
        try:
            questions.append(
                ChoiceQuestion((w1, w2), tuple(candidates), int(raw)))
        except ValueError as exc:
            raise ThesaurusError(f"{path}:{lineno}: {exc}")
    return questions


def load_text_pairs(path: str | Path) -> list[tuple[float, str, str]]:
    """``label<TAB>textA<TAB>textB`` rows; labels may be binary or real."""
    rows = []
    for lineno, (raw, a, b) in _data_rows(Path(path), 3):
        try:
            label = float(raw)
        except ValueError:
            raise ThesaurusError(f"{path}:{lineno}: bad label {raw!r}")
        rows.append((label, a, b))
    return rows


# ---------------------------------------------------------------------------
# statistics

def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    sorted_values = values[order]
    i = 0
    n = len(values)
    while i < n:
        j = i
        while j + 1 < n and sorted_values[j + 1] == sorted_values[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j + 2) / 2.0  # 1-based average rank
        i = j + 1
    return ranks


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero variance: correlation undefined")
    return float(dx @ dy) / (sx * sy)


def rank_correlations(
    pred: Sequence[float], gold: Sequence[float],
) -> tuple[float, float]:
    """Spearman rho (Pearson on average ranks) and Pearson r."""
    x = np.asarray(pred, dtype=float)
    y = np.asarray(gold, dtype=float)
    if len(x) != len(y):
        raise ValueError("prediction and gold lengths differ")
    if len(x) < 3:
        raise ValueError("need at least 3 points")
    rho = _pearson(_average_ranks(x), _average_ranks(y))
    r = _pearson(x, y)
    return rho, r


def fisher_z_test(r1: float, n1: int, r2: float, n2: int) -> float:
    """Two-tailed p-value for the difference of two correlations via the
    variance-stabilizing z-transformation."""
    for r, n in ((r1, n1), (r2, n2)):
        if not abs(r) < 1.0:
            raise ValueError(f"|r| must be < 1, got {r}")
        if n <= 3:
            raise ValueError(f"sample size must exceed 3, got {n}")
    z1 = math.atanh(r1)
    z2 = math.atanh(r2)
    statistic = (z1 - z2) / math.sqrt(1.0 / (n1 - 3) + 1.0 / (n2 - 3))
    return math.erfc(abs(statistic) / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# word-level tasks

def _argmax_with_tie(scores: Sequence[float]) -> tuple[int, bool]:
    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best]:
            best = i
    tie = any(scores[i] == scores[best] for i in range(len(scores))
              if i != best)
    return best, tie


@dataclass(frozen=True)
class ChoiceResult:
    index: int
    scores: tuple[float, ...]
    tie: bool


def synonym_choice(
    stem: str,
    candidates: Sequence[str],
    graph: ThesaurusGraph,
    cache=None,
    **term_kwargs,
) -> ChoiceResult:
    """Candidate with the highest term relatedness to the stem; ties go
    to the lowest index and are flagged."""
    if len(candidates) < 2:
        raise ValueError("need at least 2 candidates")
    scores = tuple(
        term_relatedness(stem, c, graph, cache, **term_kwargs).value
        for c in candidates
    )
    index, tie = _argmax_with_tie(scores)
    return ChoiceResult(index, scores, tie)


def analogy_scores(
    stem: tuple[str, str],
    candidate: tuple[str, str],
    graph: ThesaurusGraph,
    cache=None,
    **term_kwargs,
) -> tuple[float, float, float]:
    """Horizontal alignment s1, vertical alignment s2, and their mean.

    s1 compares within-pair relatedness of stem and candidate; s2
    compares the relatedness across pairs of same-position words.  All
    three lie in [0, 1].
    """
    def sr(a, b):
        return term_relatedness(a, b, graph, cache, **term_kwargs).value

    w1, w2 = stem
    c1, c2 = candidate
    s1 = 1.0 - abs(sr(w1, w2) - sr(c1, c2))
    s2 = 1.0 - abs(sr(w1, c1) - sr(w2, c2))
    return s1, s2, (s1 + s2) / 2.0


@dataclass(frozen=True)
class AnalogyResult:
    index: int
    tie: bool
    s1: tuple[float, ...]
    s2: tuple[float, ...]
    s: tuple[float, ...]
    features: dict[str, float]


def analogy_answer(
    question: ChoiceQuestion,
    graph: ThesaurusGraph,
    mode: str = "s",
    cache=None,
    **term_kwargs,
) -> AnalogyResult:
    """Answer one analogy question by the selected score (``s``, ``s1``
    or ``s2``) and report the six per-question summary features
    (min, max, spread of s1 and of s2) for external learners."""
    if mode not in ("s", "s1", "s2"):
        raise ValueError(f"unknown analogy score mode: {mode!r}")
    triples = [
        analogy_scores(question.stem, c, graph, cache, **term_kwargs)
        for c in question.candidates
    ]
    s1 = tuple(t[0] for t in triples)
    s2 = tuple(t[1] for t in triples)
    s = tuple(t[2] for t in triples)
    chosen = {"s": s, "s1": s1, "s2": s2}[mode]
    index, tie = _argmax_with_tie(chosen)
    features = {
        "s1_min": min(s1), "s1_max": max(s1), "s1_diff": max(s1) - min(s1),
        "s2_min": min(s2), "s2_max": max(s2), "s2_diff": max(s2) - min(s2),
    }
    return AnalogyResult(index, tie, s1, s2, s, features)


# ---------------------------------------------------------------------------
# text-level tasks

def paraphrase_decide(score: float, threshold: float) -> bool:
    """Paraphrase iff the score strictly exceeds the threshold."""
    if not (0.0 <= threshold <= 1.0):
        raise ValueError(f"threshold outside [0,1]: {threshold}")
    return score > threshold


THRESHOLD_GRID = tuple(i * 0.005 for i in range(201))


def tune_threshold_from_scores(
    scores: Sequence[float],
    labels: Sequence[bool],
    objective: str = "accuracy",
) -> float:
    """Exhaustive sweep of the [0, 1] grid in 0.005 steps; the lowest
    threshold attaining the best objective wins."""
    if objective not in ("accuracy", "f1"):
        raise ValueError(f"unknown objective: {objective!r}")
    labels = [bool(x) for x in labels]
    if len(scores) != len(labels):
        raise ValueError("score and label lengths differ")
    if all(labels) or not any(labels):
        raise ValueError("need at least one positive and one negative label")
    best_t = THRESHOLD_GRID[0]
    best_value = -1.0
    for t in THRESHOLD_GRID:
        predictions = [s > t for s in scores]
        report = classification_metrics(predictions, labels)
        value = report.metrics["accuracy"] if objective == "accuracy" \
            else report.metrics["f_measure"]
        if value > best_value:
            best_value = value
            best_t = t
    return best_t


def tune_threshold(
    pairs: Sequence[tuple[float, str, str]],
    graph: ThesaurusGraph,
    objective: str = "accuracy",
    **text_kwargs,
) -> float:
    """Score every labeled text pair, then sweep the threshold grid."""
    scores, labels = _score_text_pairs(pairs, graph, **text_kwargs)
    return tune_threshold_from_scores(scores, labels, objective)


def classification_metrics(
    predictions: Sequence[bool],
    labels: Sequence[bool],
) -> EvalReport:
    """Accuracy, precision, recall and F-measure with the paraphrase
    (positive) class as reference; undefined ratios report 0 with a flag."""
    if len(predictions) != len(labels):
        raise ValueError("prediction and label lengths differ")
    tp = fp = tn = fn = 0
    for p, y in zip(predictions, labels):
        if p and y:
            tp += 1
        elif p and not y:
            fp += 1
        elif not p and y:
            fn += 1
        else:
            tn += 1
    total = tp + fp + tn + fn
    flags: list[str] = []
    accuracy = (tp + tn) / total if total else 0.0
    if tp + fp == 0:
        precision = 0.0
        flags.append("precision undefined (no positive predictions)")
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        recall = 0.0
        flags.append("recall undefined (no positive labels)")
    else:
        recall = tp / (tp + fn)
    if precision + recall == 0.0:
        f_measure = 0.0
        if not flags:
            flags.append("f-measure undefined (zero precision and recall)")
    else:
        f_measure = 2.0 * precision * recall / (precision + recall)
    items = [{"index": i, "predicted": bool(p), "label": bool(y)}
             for i, (p, y) in enumerate(zip(predictions, labels))]
    return EvalReport(
        task="classification",
        metrics={"accuracy": accuracy, "precision": precision,
                 "recall": recall, "f_measure": f_measure,
                 "true_positive": tp, "false_positive": fp,
                 "true_negative": tn, "false_negative": fn},
        items=items,
        flags=flags,
    )


# ---------------------------------------------------------------------------
# dataset-level evaluation

def evaluate_word_similarity(
    pairs: Sequence[tuple[str, str, float]],
    graph: ThesaurusGraph,
    cache=None,
    **term_kwargs,
) -> EvalReport:
    items = []
    for i, (w1, w2, gold) in enumerate(pairs):
        score = term_relatedness(w1, w2, graph, cache, **term_kwargs)
        items.append({
            "index": i, "word1": w1, "word2": w2,
            "gold": gold, "predicted": score.value,
            "in_vocabulary": [score.t1_in_vocabulary, score.t2_in_vocabulary],
        })
    rho, r = rank_correlations(
        [it["predicted"] for it in items], [it["gold"] for it in items])
    return EvalReport(
        task="wordsim",
        metrics={"spearman_rho": rho, "pearson_r": r, "n": len(items)},
        items=items,
    )


def evaluate_synonym_choice(
    questions: Sequence[ChoiceQuestion],
    graph: ThesaurusGraph,
    cache=None,
    **term_kwargs,
) -> EvalReport:
    items = []
    correct = ties = 0
    for i, q in enumerate(questions):
        result = synonym_choice(q.stem, q.candidates, graph, cache,
                                **term_kwargs)
        ok = result.index == q.gold_index
        correct += ok
        ties += result.tie
        items.append({
            "index": i, "stem": q.stem, "chosen": result.index,
            "gold": q.gold_index, "correct": bool(ok), "tie": result.tie,
            "scores": list(result.scores),
        })
    n = len(items)
    return EvalReport(
        task="synonym",
        metrics={"accuracy": correct / n if n else 0.0,
                 "correct": correct, "ties": ties, "n": n},
        items=items,
    )


def evaluate_analogy(
    questions: Sequence[ChoiceQuestion],
    graph: ThesaurusGraph,
    cache=None,
    **term_kwargs,
) -> EvalReport:
    """Answer every question under all three score modes; the
    upper-bound metric counts a question as solvable when the s1 answer
    or the s2 answer is correct."""
    items = []
    correct = {"s": 0, "s1": 0, "s2": 0, "upper_bound": 0}
    for i, q in enumerate(questions):
        result = analogy_answer(q, graph, "s", cache, **term_kwargs)
        idx_s1, _ = _argmax_with_tie(result.s1)
        idx_s2, _ = _argmax_with_tie(result.s2)
        correct["s"] += result.index == q.gold_index
        correct["s1"] += idx_s1 == q.gold_index
        correct["s2"] += idx_s2 == q.gold_index
        correct["upper_bound"] += (idx_s1 == q.gold_index
                                   or idx_s2 == q.gold_index)
        items.append({
            "index": i, "stem": list(q.stem),
            "chosen_s": result.index, "chosen_s1": idx_s1,
            "chosen_s2": idx_s2, "gold": q.gold_index,
            "correct": bool(result.index == q.gold_index),
            "tie": result.tie,
            "s1": list(result.s1), "s2": list(result.s2),
            "s": list(result.s), "features": result.features,
        })
    n = len(items)
    metrics = {f"accuracy_{k}": v / n if n else 0.0
               for k, v in correct.items()}
    metrics.update({f"correct_{k}": v for k, v in correct.items()})
    metrics["n"] = n
    return EvalReport(task="sat", metrics=metrics, items=items)


def _score_text_pairs(pairs, graph, *, corpus=None, stopwords=None,
                      cache=None, **text_kwargs):
    stop = default_stopwords() if stopwords is None else stopwords
    if corpus is None:
        texts = []
        for _, a, b in pairs:
            texts.append(preprocess(a, stop))
            texts.append(preprocess(b, stop))
        corpus = build_corpus_stats(texts)
    scores = []
    labels = []
    for label, a, b in pairs:
        score = text_relatedness(a, b, graph, corpus=corpus, stopwords=stop,
                                 cache=cache, **text_kwargs)
        scores.append(score.value)
        labels.append(label)
    return scores, labels


def evaluate_sentence_similarity(
    pairs: Sequence[tuple[float, str, str]],
    graph: ThesaurusGraph,
    **text_kwargs,
) -> EvalReport:
    scores, labels = _score_text_pairs(pairs, graph, **text_kwargs)
    rho, r = rank_correlations(scores, labels)
    items = [{"index": i, "gold": labels[i], "predicted": scores[i]}
             for i in range(len(scores))]
    return EvalReport(
        task="sentence",
        metrics={"spearman_rho": rho, "pearson_r": r, "n": len(items)},
        items=items,
    )


def evaluate_paraphrase(
    pairs: Sequence[tuple[float, str, str]],
    graph: ThesaurusGraph,
    threshold: float = 0.2,
    **text_kwargs,
) -> EvalReport:
    scores, labels = _score_text_pairs(pairs, graph, **text_kwargs)
    bool_labels = [bool(x) for x in labels]
    predictions = [paraphrase_decide(s, threshold) for s in scores]
    report = classification_metrics(predictions, bool_labels)
    items = [{"index": i, "score": scores[i], "predicted": predictions[i],
              "label": bool_labels[i]} for i in range(len(scores))]
    metrics = dict(report.metrics)
    metrics["threshold"] = threshold
    metrics["n"] = len(items)
    return EvalReport(task="paraphrase", metrics=metrics, items=items,
                      flags=report.flags)


# ---------------------------------------------------------------------------
# report serialization

def _format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, (list, tuple)):
        return ";".join(_format_value(v) for v in value)
    if isinstance(value, dict):
        return ";".join(f"{k}={_format_value(v)}"
                        for k, v in sorted(value.items()))
    return str(value)


def report_to_tsv(report: EvalReport) -> str:
    """One row per item, then one summary row per metric."""
    lines = []
    for item in report.items:
        cells = [f"{k}={_format_value(v)}" for k, v in item.items()
                 if k != "index"]
        lines.append("\t".join(["item", str(item.get("index", ""))] + cells))
    for name in sorted(report.metrics):
        lines.append(
            "\t".join(["summary", name, _format_value(report.metrics[name])]))
    for flag in report.flags:
        lines.append("\t".join(["flag", flag]))
    return "\n".join(lines) + "\n"


def report_to_jsonl(report: EvalReport) -> str:
    """Line-delimited structured records: items first, then the summary."""
    lines = [json.dumps({"record": "item", **item}, sort_keys=True)
             for item in report.items]
    lines.append(json.dumps(
        {"record": "summary", "task": report.task,
         "metrics": report.metrics, "flags": report.flags},
        sort_keys=True))
    return "\n".join(lines) + "\n"
