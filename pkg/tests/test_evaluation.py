"""Group-agreement metrics, evaluation protocol, and the planted corpus."""

import math
import random

import numpy as np
import pytest

from psight.annotations import AnnotationCorpus, PatternAnnotation
from psight.chart.parse import parse_chart
from psight.errors import NoHumanPatterns, NoModelGroups
from psight.evaluation import (
    PlantedConfig,
    ac,
    association_matrix,
    distinct_annotated_patterns,
    ega,
    evaluate_chart,
    evaluate_corpus,
    generate_planted_corpus,
    pcr,
)

F = frozenset
ABCD = ["a", "b", "c", "d"]


def tiny_corpus(svg: str, annotated: tuple[str, ...]) -> AnnotationCorpus:
    doc = parse_chart(svg)
    return AnnotationCorpus(
        charts={"chart": doc},
        annotations=[PatternAnnotation("chart", "a1", annotated, 5, 5)],
        rng_seed=0)


class TestMetricHandCases:
    """Every case is hand-derivable from the Jaccard / co-membership
    definitions; tolerances are 1e-12."""

    def test_identical_lists(self):
        assert ega([F("ab")], [F("ab")]) == pytest.approx(1.0, abs=1e-12)
        assert pcr([F("ab")], [F("ab")]) == pytest.approx(1.0, abs=1e-12)
        assert ac([F("ab")], [F("ab")], ABCD) == pytest.approx(1.0, abs=1e-12)

    def test_ega_split_against_merged(self):
        # J({a,b},{a,b,c}) = 2/3 and J({c},{a,b,c}) = 1/3 average to 1/2
        assert ega([F("ab"), F("c")], [F("abc")]) == pytest.approx(0.5, abs=1e-12)

    def test_ega_takes_best_match(self):
        assert ega([F("ab")], [F("ab"), F("cd")]) == pytest.approx(1.0, abs=1e-12)

    def test_ega_disjoint(self):
        assert ega([F("ab")], [F("cd")]) == pytest.approx(0.0, abs=1e-12)

    def test_pcr_uncovered_pattern(self):
        assert pcr([F("ab")], [F("ab"), F("cd")]) == pytest.approx(0.5, abs=1e-12)

    def test_pcr_extra_model_groups_free(self):
        assert pcr([F("ab"), F("cd")], [F("ab")]) == pytest.approx(1.0, abs=1e-12)

    def test_direction_swap_identity(self):
        m = [F("ab"), F("bc")]
        h = [F("abc"), F("d")]
        assert ega(m, h) == pytest.approx(pcr(h, m), abs=1e-12)

    def test_partial_overlap_value(self):
        # J({a,b},{b,c}) = 1/3
        assert ega([F("ab")], [F("bc")]) == pytest.approx(1 / 3, abs=1e-12)

    def test_ac_split_pair_chain(self):
        # model pairs {ab, bc}; human pairs {ab, ac, bc} -> 2 / (sqrt2*sqrt3)
        value = ac([F("ab"), F("bc")], [F("abc")], ABCD)
        assert value == pytest.approx(2 / math.sqrt(6), abs=1e-12)

    def test_ac_merged_against_split(self):
        # model co-members all 6 pairs; human only ab and cd
        value = ac([F("abcd")], [F("ab"), F("cd")], ABCD)
        assert value == pytest.approx(2 / math.sqrt(12), abs=1e-12)

    def test_ac_duplicate_group_invariant(self):
        # repeating a group scales its matrix, and cosine ignores scale
        assert ac([F("ab"), F("ab")], [F("ab")], ABCD) == pytest.approx(1.0, abs=1e-12)

    def test_ac_disjoint_pairs(self):
        assert ac([F("ab")], [F("cd")], ABCD) == pytest.approx(0.0, abs=1e-12)

    def test_ac_zero_matrix_guard(self):
        # singleton groups contribute no pairs -> all-zero matrix -> 0
        assert ac([F("a")], [F("ab")], ABCD) == 0.0

    def test_ega_requires_human_patterns(self):
        with pytest.raises(NoHumanPatterns):
            ega([F("ab")], [])

    def test_ega_requires_model_groups(self):
        with pytest.raises(NoModelGroups):
            ega([], [F("ab")])

    def test_pcr_requires_both_sides(self):
        with pytest.raises(NoHumanPatterns):
            pcr([F("ab")], [])
        with pytest.raises(NoModelGroups):
            pcr([], [F("ab")])


class TestMetricProperties:
    def test_bounds_on_randomized_lists(self):
        rng = random.Random(99)
        universe = [f"e{i}" for i in range(8)]
        for _ in range(1000):
            model_groups = [F(rng.sample(universe, rng.randint(1, 5)))
                            for _ in range(rng.randint(1, 4))]
            human_patterns = [F(rng.sample(universe, rng.randint(1, 5)))
                              for _ in range(rng.randint(1, 4))]
            for value in (ega(model_groups, human_patterns),
                          pcr(model_groups, human_patterns),
                          ac(model_groups, human_patterns, universe)):
                assert 0.0 <= value <= 1.0 + 1e-12
            assert ega(model_groups, human_patterns) == pytest.approx(
                pcr(human_patterns, model_groups), abs=1e-12)

    def test_perfect_match_randomized(self):
        rng = random.Random(5)
        universe = [f"e{i}" for i in range(8)]
        for _ in range(50):
            groups = [F(rng.sample(universe, rng.randint(2, 5)))
                      for _ in range(rng.randint(1, 3))]
            assert ega(groups, groups) == pytest.approx(1.0, abs=1e-12)
            assert ac(groups, groups, universe) == pytest.approx(1.0, abs=1e-12)


class TestAssociationMatrix:
    def test_counts(self):
        matrix = association_matrix([F("abc"), F("ab")], ABCD)
        assert matrix[0, 1] == 2  # a-b co-grouped twice
        assert matrix[0, 2] == 1 and matrix[1, 2] == 1
        assert matrix[0, 3] == 0

    def test_symmetric_zero_diagonal(self):
        matrix = association_matrix([F("abc"), F("bd")], ABCD)
        assert np.array_equal(matrix, matrix.T)
        assert np.all(np.diag(matrix) == 0)

    def test_ignores_unknown_elements(self):
        matrix = association_matrix([F({"a", "b", "zz"})], ABCD)
        assert matrix[0, 1] == 1
        assert matrix.sum() == 2


class TestDistinctPatterns:
    def test_first_seen_dedup(self):
        corpus = AnnotationCorpus(
            charts={}, rng_seed=0,
            annotations=[
                PatternAnnotation("c", "a1", ("x", "y"), 5, 5),
                PatternAnnotation("c", "a2", ("y", "x"), 4, 4),   # same set
                PatternAnnotation("c", "a1", ("z", "w"), 5, 5),
                PatternAnnotation("other", "a1", ("q", "r"), 5, 5),
            ])
        patterns = distinct_annotated_patterns(corpus, "c")
        assert patterns == [F({"x", "y"}), F({"z", "w"})]


class TestEvaluateChart:
    def test_no_model_groups_forces_zero(self, fixture_model):
        svg = ('<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100">'
               '<rect id="r" x="5" y="5" width="20" height="20" fill="#ff0000"/>'
               '<text id="t" x="80" y="90" font-size="8" fill="#0000ff">z</text>'
               '</svg>')
        run = evaluate_chart(fixture_model, tiny_corpus(svg, ("r", "t")), "chart")
        assert run.model_groups == ()
        assert (run.ega, run.pcr, run.ac) == (0.0, 0.0, 0.0)
        assert "no model groups; metrics forced to 0" in run.flags

    def test_whole_chart_cluster_skipped(self, fixture_model):
        svg = ('<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100">'
               '<rect id="p" x="5" y="5" width="20" height="20" fill="#ff0000"/>'
               '<rect id="q" x="60" y="5" width="20" height="20" fill="#ff0000"/>'
               '</svg>')
        run = evaluate_chart(fixture_model, tiny_corpus(svg, ("p", "q")), "chart")
        assert "whole-chart group skipped in ranking" in run.flags
        assert run.model_groups == ()

    def test_single_element_chart_flagged(self, fixture_model):
        svg = ('<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100">'
               '<rect id="solo" x="5" y="5" width="20" height="20" fill="#ff0000"/>'
               '</svg>')
        run = evaluate_chart(fixture_model, tiny_corpus(svg, ("solo",)), "chart")
        assert "too few elements for identification" in run.flags
        assert run.ega == 0.0

    def test_missing_annotations_raise(self, fixture_model, planted_corpus):
        chart_id = sorted(planted_corpus.charts)[0]
        stripped = AnnotationCorpus(charts=planted_corpus.charts,
                                    annotations=[], rng_seed=0)
        with pytest.raises(NoHumanPatterns):
            evaluate_chart(fixture_model, stripped, chart_id)

    def test_top_k_protocol(self, fixture_model, planted_corpus):
        chart_id = sorted(planted_corpus.charts)[0]
        run = evaluate_chart(fixture_model, planted_corpus, chart_id)
        assert run.k == len(run.human_patterns)
        assert len(run.model_groups) <= run.k
        assert run.chart_id == chart_id
        for metric in (run.ega, run.pcr, run.ac):
            assert 0.0 <= metric <= 1.0


class TestEvaluateCorpus:
    def test_population_statistics(self, fixture_model, planted_corpus, split_ids):
        _, held_out = split_ids
        report = evaluate_corpus(fixture_model, planted_corpus, held_out)
        egas = [r.ega for r in report.runs]
        assert report.mean_ega == pytest.approx(np.mean(egas), abs=1e-12)
        assert report.std_ega == pytest.approx(np.std(egas), abs=1e-12)  # ddof=0
        assert [r.chart_id for r in report.runs] == held_out

    def test_defaults_to_all_charts(self, fixture_model):
        corpus = generate_planted_corpus(PlantedConfig(n_charts=3, seed=1))
        report = evaluate_corpus(fixture_model, corpus)
        assert len(report.runs) == 3

    def test_reference_model_on_held_out_charts(self, fixture_model,
                                                planted_corpus, split_ids):
        _, held_out = split_ids
        report = evaluate_corpus(fixture_model, planted_corpus, held_out)
        assert report.mean_ega == pytest.approx(1.0, abs=1e-9)
        assert report.mean_pcr == pytest.approx(1.0, abs=1e-9)
        assert report.mean_ac == pytest.approx(1.0, abs=1e-9)


class TestPlantedCorpus:
    def test_counts_and_structure(self, planted_corpus):
        assert len(planted_corpus.charts) == 20
        for chart_id, doc in planted_corpus.charts.items():
            patterns = distinct_annotated_patterns(planted_corpus, chart_id)
            assert 2 <= len(patterns) <= 3
            ids = {e.id for e in doc.elements}
            for pattern in patterns:
                assert 3 <= len(pattern) <= 6
                assert pattern <= ids

    def test_deterministic(self):
        a = generate_planted_corpus(PlantedConfig(n_charts=4, seed=12))
        b = generate_planted_corpus(PlantedConfig(n_charts=4, seed=12))
        assert sorted(a.charts) == sorted(b.charts)
        for cid in a.charts:
            assert a.charts[cid].source_text == b.charts[cid].source_text
        assert [(x.chart_id, x.element_ids) for x in a.annotations] == \
               [(x.chart_id, x.element_ids) for x in b.annotations]

    def test_seed_changes_layout(self):
        a = generate_planted_corpus(PlantedConfig(n_charts=2, seed=1))
        b = generate_planted_corpus(PlantedConfig(n_charts=2, seed=2))
        assert any(a.charts[x].source_text != b.charts[y].source_text
                   for x, y in zip(sorted(a.charts), sorted(b.charts)))

    @pytest.mark.parametrize("channel", ["fill_hue", "bbox_top", "size"])
    def test_grouping_channels_produce_valid_corpora(self, channel):
        corpus = generate_planted_corpus(
            PlantedConfig(n_charts=2, grouping_channel=channel, seed=3))
        assert len(corpus.charts) == 2
        for annotation in corpus.annotations:
            doc = corpus.charts[annotation.chart_id]
            ids = {e.id for e in doc.elements}
            assert set(annotation.element_ids) <= ids

    def test_split_arithmetic(self, planted_corpus, split_ids):
        train_ids, held_out = split_ids
        assert len(train_ids) == 16 and len(held_out) == 4
        assert sorted(train_ids + held_out) == sorted(planted_corpus.charts)
        assert not set(train_ids) & set(held_out)
