import json
import math

import numpy as np
import pytest

from semrel import (
    ChoiceQuestion,
    ThesaurusError,
    analogy_answer,
    analogy_scores,
    build_graph,
    classification_metrics,
    evaluate_analogy,
    evaluate_paraphrase,
    evaluate_synonym_choice,
    evaluate_word_similarity,
    fisher_z_test,
    paraphrase_decide,
    rank_correlations,
    synonym_choice,
    term_relatedness,
    tune_threshold,
    tune_threshold_from_scores,
)
from semrel.tasks import (
    THRESHOLD_GRID,
    load_analogy_questions,
    load_choice_questions,
    load_text_pairs,
    load_word_pairs,
    report_to_jsonl,
    report_to_tsv,
)

from conftest import make_random_graph


class TestRankCorrelations:
    def test_identical_vectors(self):
        rho, r = rank_correlations([1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0])
        assert rho == pytest.approx(1.0, abs=1e-12)
        assert r == pytest.approx(1.0, abs=1e-12)

    def test_reversed_ranking(self):
        rho, _ = rank_correlations([4.0, 3.0, 2.0, 1.0], [1.0, 2.0, 3.0, 4.0])
        assert rho == pytest.approx(-1.0, abs=1e-12)

    def test_tied_values_use_average_ranks(self):
        # pred ranks: 1, 2.5, 2.5, 4, 5 against gold ranks 1..5; Pearson
        # of those rank vectors is 9.5 / sqrt(9.5 * 10) = sqrt(0.95)
        rho, _ = rank_correlations([1.0, 2.0, 2.0, 4.0, 5.0],
                                   [1.0, 2.0, 3.0, 4.0, 5.0])
        assert rho == pytest.approx(math.sqrt(0.95), rel=1e-12)

    def test_rho_invariant_under_monotone_transform(self):
        pred = [0.1, 0.5, 0.2, 0.9, 0.7]
        gold = [1.0, 3.0, 2.0, 5.0, 4.0]
        rho_base, r_base = rank_correlations(pred, gold)
        rho_sq, r_sq = rank_correlations([p * p for p in pred], gold)
        assert rho_sq == pytest.approx(rho_base, abs=1e-12)
        assert r_sq != pytest.approx(r_base, abs=1e-12)

    def test_zero_variance_rejected(self):
        with pytest.raises(ValueError, match="zero variance"):
            rank_correlations([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_short_input_rejected(self):
        with pytest.raises(ValueError, match="at least 3"):
            rank_correlations([1.0, 2.0], [1.0, 2.0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="lengths differ"):
            rank_correlations([1.0, 2.0, 3.0], [1.0, 2.0])


class TestFisherZ:
    def test_equal_correlations_give_p_one(self):
        assert fisher_z_test(0.5, 30, 0.5, 40) == pytest.approx(1.0)

    def test_large_gap_is_significant(self):
        assert fisher_z_test(0.9, 30, 0.3, 30) < 0.01

    def test_symmetric_in_arguments(self):
        assert fisher_z_test(0.9, 30, 0.3, 25) \
            == fisher_z_test(0.3, 25, 0.9, 30)

    def test_hand_value(self):
        # z1 = atanh(0.9), z2 = atanh(0.3), se = sqrt(2/27)
        z1, z2 = math.atanh(0.9), math.atanh(0.3)
        stat = (z1 - z2) / math.sqrt(2.0 / 27.0)
        expected = math.erfc(abs(stat) / math.sqrt(2.0))
        assert fisher_z_test(0.9, 30, 0.3, 30) \
            == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("r1,n1", [(1.0, 30), (-1.0, 30), (0.5, 3)])
    def test_preconditions(self, r1, n1):
        with pytest.raises(ValueError):
            fisher_z_test(r1, n1, 0.2, 30)


class TestSynonymChoice:
    def test_identical_oov_candidate_wins(self, fig3_graph):
        result = synonym_choice("xyzzy", ["car", "xyzzy", "autobus"],
                                fig3_graph)
        assert result.index == 1
        assert result.scores[1] == 1.0

    def test_all_unreachable_flags_tie(self):
        graph = build_graph(
            [("a", "noun", "a-n"), ("b", "noun", "b-n"),
             ("c", "noun", "c-n")], [])
        result = synonym_choice("a", ["b", "c"], graph)
        assert result.index == 0
        assert result.tie

    def test_three_candidates_take_largest(self, fig3_graph):
        candidates = ["autobus", "accelerator", "artifact"]
        result = synonym_choice("car", candidates, fig3_graph)
        expected = [term_relatedness("car", c, fig3_graph).value
                    for c in candidates]
        assert result.scores == tuple(expected)
        assert result.index == expected.index(max(expected))
        assert not result.tie

    def test_needs_two_candidates(self, fig3_graph):
        with pytest.raises(ValueError, match="at least 2"):
            synonym_choice("car", ["autobus"], fig3_graph)


class TestAnalogy:
    def test_candidate_equal_to_stem_has_unit_horizontal_score(
            self, fig3_graph):
        s1, _, _ = analogy_scores(("car", "accelerator"),
                                  ("car", "accelerator"), fig3_graph)
        assert s1 == 1.0

    def test_combined_score_is_mean(self, fig3_graph):
        s1, s2, s = analogy_scores(("car", "accelerator"),
                                   ("autobus", "vehicle"), fig3_graph)
        assert s == (s1 + s2) / 2

    def test_scores_stay_in_unit_interval(self):
        rng = np.random.default_rng(500)
        for _ in range(20):
            graph = make_random_graph(rng)
            n = len(graph.senses)
            words = [f"w{int(rng.integers(0, n))}" for _ in range(4)]
            s1, s2, s = analogy_scores((words[0], words[1]),
                                       (words[2], words[3]), graph)
            assert 0.0 <= s1 <= 1.0
            assert 0.0 <= s2 <= 1.0
            assert 0.0 <= s <= 1.0

    def test_vertical_score_from_term_oracle(self, fig3_graph):
        stem = ("car", "accelerator")
        cand = ("autobus", "control")
        sr = lambda a, b: term_relatedness(a, b, fig3_graph).value
        _, s2, _ = analogy_scores(stem, cand, fig3_graph)
        assert s2 == pytest.approx(
            1.0 - abs(sr("car", "autobus") - sr("accelerator", "control")),
            rel=1e-12)

    def test_identical_candidate_chosen_under_s1(self, fig3_graph):
        question = ChoiceQuestion(
            ("car", "accelerator"),
            (("autobus", "vehicle"), ("car", "accelerator")),
            gold_index=1)
        result = analogy_answer(question, fig3_graph, "s1")
        assert result.index == 1

    def test_tie_resolves_to_lowest_index(self):
        graph = build_graph(
            [("a", "noun", "a-n"), ("b", "noun", "b-n"),
             ("c", "noun", "c-n"), ("d", "noun", "d-n")], [])
        question = ChoiceQuestion(("a", "b"), (("c", "d"), ("d", "c")), 0)
        result = analogy_answer(question, graph)
        assert result.index == 0
        assert result.tie

    def test_two_candidate_argmax(self, fig3_graph):
        cands = (("autobus", "vehicle"), ("device", "mechanism"))
        question = ChoiceQuestion(("car", "accelerator"), cands, 0)
        result = analogy_answer(question, fig3_graph, "s")
        expected = [analogy_scores(question.stem, c, fig3_graph)[2]
                    for c in cands]
        assert result.s == tuple(expected)
        assert result.index == expected.index(max(expected))

    def test_features_summarize_scores(self, fig3_graph):
        question = ChoiceQuestion(
            ("car", "accelerator"),
            (("autobus", "vehicle"), ("device", "mechanism")), 0)
        result = analogy_answer(question, fig3_graph)
        assert result.features["s1_min"] == min(result.s1)
        assert result.features["s1_max"] == max(result.s1)
        assert result.features["s1_diff"] \
            == max(result.s1) - min(result.s1)
        assert result.features["s2_min"] == min(result.s2)
        assert set(result.features) == {
            "s1_min", "s1_max", "s1_diff", "s2_min", "s2_max", "s2_diff"}

    def test_upper_bound_dominates_single_modes(self):
        rng = np.random.default_rng(501)
        graph = make_random_graph(rng, max_nodes=8)
        n = len(graph.senses)
        questions = []
        for _ in range(12):
            words = [f"w{int(rng.integers(0, n))}" for _ in range(6)]
            questions.append(ChoiceQuestion(
                (words[0], words[1]),
                ((words[2], words[3]), (words[4], words[5])),
                int(rng.integers(0, 2))))
        report = evaluate_analogy(questions, graph)
        assert report.metrics["accuracy_upper_bound"] >= max(
            report.metrics["accuracy_s1"], report.metrics["accuracy_s2"])


class TestParaphraseDecision:
    def test_above_threshold(self):
        assert paraphrase_decide(0.25, 0.2) is True

    def test_boundary_is_strict(self):
        assert paraphrase_decide(0.2, 0.2) is False

    def test_zero_score(self):
        assert paraphrase_decide(0.0, 0.3) is False

    def test_threshold_range_checked(self):
        with pytest.raises(ValueError, match="threshold"):
            paraphrase_decide(0.5, 1.5)


class TestTuneThreshold:
    def grid_oracle(self, scores, labels, objective):
        best_t, best_v = None, -1.0
        for t in THRESHOLD_GRID:
            tp = sum(1 for s, y in zip(scores, labels) if s > t and y)
            fp = sum(1 for s, y in zip(scores, labels) if s > t and not y)
            fn = sum(1 for s, y in zip(scores, labels) if s <= t and y)
            tn = len(scores) - tp - fp - fn
            if objective == "accuracy":
                v = (tp + tn) / len(scores)
            else:
                p = tp / (tp + fp) if tp + fp else 0.0
                r = tp / (tp + fn) if tp + fn else 0.0
                v = 2 * p * r / (p + r) if p + r else 0.0
            if v > best_v:
                best_t, best_v = t, v
        return best_t

    def test_separable_scores(self):
        scores = [0.8, 0.9, 0.7, 0.1, 0.2, 0.3]
        labels = [True, True, True, False, False, False]
        t = tune_threshold_from_scores(scores, labels)
        # the decision is strict, so the top negative's own grid value
        # is already separating; ties resolve to the lowest threshold
        assert t == 0.3
        predictions = [s > t for s in scores]
        assert predictions == labels

    def test_degenerate_labels_rejected(self):
        with pytest.raises(ValueError, match="positive and one negative"):
            tune_threshold_from_scores([0.5, 0.6], [True, True])

    @pytest.mark.parametrize("objective", ["accuracy", "f1"])
    def test_matches_grid_oracle(self, objective):
        rng = np.random.default_rng(502)
        for _ in range(20):
            n = int(rng.integers(4, 20))
            scores = [float(x) for x in rng.uniform(0, 1, size=n)]
            labels = [bool(x) for x in rng.integers(0, 2, size=n)]
            if all(labels) or not any(labels):
                continue
            assert tune_threshold_from_scores(scores, labels, objective) \
                == self.grid_oracle(scores, labels, objective)

    def test_six_pair_fixture(self):
        scores = [0.05, 0.45, 0.31, 0.72, 0.31, 0.9]
        labels = [False, True, False, True, True, True]
        for objective in ("accuracy", "f1"):
            assert tune_threshold_from_scores(scores, labels, objective) \
                == self.grid_oracle(scores, labels, objective)

    def test_end_to_end_over_text_pairs(self, fig3_graph):
        pairs = [
            (1.0, "the car and the autobus", "a motor vehicle"),
            (1.0, "car accelerator pedal", "accelerator of a car"),
            (0.0, "xyzzy plugh", "car vehicle"),
            (0.0, "quux gargle", "instrumentality"),
        ]
        t = tune_threshold(pairs, fig3_graph, "accuracy")
        from semrel.tasks import _score_text_pairs
        scores, labels = _score_text_pairs(pairs, fig3_graph)
        assert t == tune_threshold_from_scores(
            scores, [bool(x) for x in labels], "accuracy")


class TestClassificationMetrics:
    def test_all_correct(self):
        report = classification_metrics([True, False], [True, False])
        assert report.metrics["accuracy"] == 1.0
        assert report.metrics["f_measure"] == 1.0

    def test_predict_all_positive_on_balanced_data(self):
        report = classification_metrics(
            [True, True, True, True], [True, True, False, False])
        assert report.metrics["recall"] == 1.0
        assert report.metrics["precision"] == 0.5

    def test_eight_item_confusion(self):
        # tp=3, fn=1, fp=1, tn=3 by hand
        labels = [True, True, True, True, False, False, False, False]
        predictions = [True, True, True, False, True, False, False, False]
        report = classification_metrics(predictions, labels)
        assert report.metrics["true_positive"] == 3
        assert report.metrics["false_negative"] == 1
        assert report.metrics["false_positive"] == 1
        assert report.metrics["true_negative"] == 3
        assert report.metrics["accuracy"] == 0.75
        assert report.metrics["precision"] == 0.75
        assert report.metrics["recall"] == 0.75
        assert report.metrics["f_measure"] == pytest.approx(0.75)

    def test_undefined_precision_flagged(self):
        report = classification_metrics([False, False], [True, False])
        assert report.metrics["precision"] == 0.0
        assert any("precision" in f for f in report.flags)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            classification_metrics([True], [True, False])


class TestDatasetLoading:
    def test_word_pairs(self, tmp_path):
        path = tmp_path / "pairs.tsv"
        path.write_text("# c\ncar\tauto\t3.92\nrock\tstone\t3.5\n",
                        encoding="utf-8")
        assert load_word_pairs(path) == [("car", "auto", 3.92),
                                         ("rock", "stone", 3.5)]

    def test_word_pairs_bad_score(self, tmp_path):
        path = tmp_path / "pairs.tsv"
        path.write_text("car\tauto\thigh\n", encoding="utf-8")
        with pytest.raises(ThesaurusError, match="bad gold score"):
            load_word_pairs(path)

    def test_choice_questions(self, tmp_path):
        path = tmp_path / "choice.tsv"
        path.write_text("stem\ta;b;c\t2\n", encoding="utf-8")
        [q] = load_choice_questions(path)
        assert q.stem == "stem"
        assert q.candidates == ("a", "b", "c")
        assert q.gold_index == 2

    def test_choice_gold_out_of_range(self, tmp_path):
        path = tmp_path / "choice.tsv"
        path.write_text("stem\ta;b\t5\n", encoding="utf-8")
        with pytest.raises(ThesaurusError, match="out of range"):
            load_choice_questions(path)

    def test_analogy_questions(self, tmp_path):
        path = tmp_path / "sat.tsv"
        path.write_text("ostrich\tbird\tlion:cat;goose:flock\t0\n",
                        encoding="utf-8")
        [q] = load_analogy_questions(path)
        assert q.stem == ("ostrich", "bird")
        assert q.candidates == (("lion", "cat"), ("goose", "flock"))

    def test_text_pairs(self, tmp_path):
        path = tmp_path / "texts.tsv"
        path.write_text("1\tthe car\tan automobile\n0\ta\tb\n",
                        encoding="utf-8")
        assert load_text_pairs(path) == [
            (1.0, "the car", "an automobile"), (0.0, "a", "b")]


class TestEvaluation:
    def test_word_similarity_report(self, fig3_graph):
        pairs = [("car", "autobus", 3.9), ("car", "accelerator", 2.0),
                 ("car", "xyzzy", 0.1), ("vehicle", "device", 1.5)]
        report = evaluate_word_similarity(pairs, fig3_graph)
        assert report.metrics["n"] == 4
        predicted = [it["predicted"] for it in report.items]
        gold = [it["gold"] for it in report.items]
        rho, r = rank_correlations(predicted, gold)
        assert report.metrics["spearman_rho"] == rho
        assert report.metrics["pearson_r"] == r

    def test_synonym_report(self, fig3_graph):
        questions = [
            ChoiceQuestion("car", ("autobus", "device"), 0),
            ChoiceQuestion("vehicle", ("conveyance", "accelerator"), 0),
        ]
        report = evaluate_synonym_choice(questions, fig3_graph)
        assert report.metrics["n"] == 2
        assert report.metrics["accuracy"] \
            == report.metrics["correct"] / 2

    def test_paraphrase_report_recomputable(self, fig3_graph):
        pairs = [
            (1.0, "the car engine", "a motor vehicle"),
            (0.0, "xyzzy", "car"),
            (1.0, "autobus stop", "bus vehicle"),
            (0.0, "plugh quux", "gargle"),
        ]
        report = evaluate_paraphrase(pairs, fig3_graph, threshold=0.2)
        assert report.metrics["threshold"] == 0.2
        recomputed = classification_metrics(
            [it["predicted"] for it in report.items],
            [it["label"] for it in report.items])
        for key in ("accuracy", "precision", "recall", "f_measure"):
            assert report.metrics[key] == recomputed.metrics[key]
        for item in report.items:
            assert item["predicted"] == (item["score"] > 0.2)


class TestReportFormats:
    def make_report(self, fig3_graph):
        pairs = [("car", "autobus", 3.9), ("car", "device", 1.0),
                 ("car", "xyzzy", 0.0)]
        return evaluate_word_similarity(pairs, fig3_graph)

    def test_tsv_has_items_and_summary(self, fig3_graph):
        text = report_to_tsv(self.make_report(fig3_graph))
        lines = text.strip().split("\n")
        assert sum(1 for l in lines if l.startswith("item\t")) == 3
        assert any(l.startswith("summary\tspearman_rho") for l in lines)

    def test_jsonl_round_trips(self, fig3_graph):
        text = report_to_jsonl(self.make_report(fig3_graph))
        records = [json.loads(line) for line in text.strip().split("\n")]
        assert records[-1]["record"] == "summary"
        assert len([r for r in records if r["record"] == "item"]) == 3

    def test_deterministic(self, fig3_graph):
        report = self.make_report(fig3_graph)
        assert report_to_tsv(report) == report_to_tsv(report)
        assert report_to_jsonl(report) == report_to_jsonl(report)
