"""Suggestion generation, conflict rules, usage summaries, and edit application."""

import re

import pytest

from psight.advisor import (
    CONFLICT_RULES,
    DimensionUsage,
    apply_suggestion,
    document_fingerprint,
    generate_suggestions,
    passes_conflict_rules,
    usage_summary,
)
from psight.chart.parse import parse_chart
from psight.effects import extract_features
from psight.errors import EmptyScope, StaleSuggestion, WholeChartGroup
from psight.model import load_model
from psight.patterns import salience
from tests.conftest import ADVISOR_CASES, load_fixture_doc


@pytest.fixture(scope="module")
def advisor_runs(fixture_model):
    runs = {}
    for name, group in ADVISOR_CASES.items():
        doc = load_fixture_doc(name)
        feats = extract_features(doc)
        runs[name] = (doc, feats, list(group),
                      generate_suggestions(fixture_model, doc, feats, list(group)))
    return runs


def usage_map(doc, scope=None):
    return {u.dim: u for u in usage_summary(doc, scope)}


class TestUsageSummary:
    def test_counts_and_ordering(self):
        doc = load_fixture_doc("bars6.svg")
        usage = usage_summary(doc)
        assert len(usage) == 21
        # six distinct bars on every geometric and hue channel; ties broken
        # alphabetically
        assert [u.dim for u in usage[:4]] == [
            "area", "bbox_height", "bbox_left", "bbox_right"]
        counts = [u.distinct_values for u in usage]
        assert counts == sorted(counts, reverse=True)
        m = usage_map(doc)
        assert m["fill_hue"].distinct_values == 6
        assert m["fill_hue"].in_use and not m["fill_hue"].low_diversity
        assert m["bbox_width"].distinct_values == 1  # uniform bar width
        assert not m["bbox_width"].in_use
        # unpainted strokes are masked out entirely, not counted as a value
        assert m["stroke_width"].distinct_values == 0
        assert not m["stroke_width"].in_use

    def test_low_diversity_flag(self):
        doc = load_fixture_doc("advisor_lowdiv.svg")
        m = usage_map(doc)
        assert m["fill_hue"].distinct_values == 2
        assert m["fill_hue"].in_use and m["fill_hue"].low_diversity

    def test_scope_restricts_counts(self):
        doc = load_fixture_doc("advisor_lowdiv.svg")
        m = usage_map(doc, ["a0", "a1", "a2"])
        assert m["fill_hue"].distinct_values == 1
        assert not m["fill_hue"].in_use

    def test_empty_scope_rejected(self):
        doc = load_fixture_doc("bars6.svg")
        with pytest.raises(EmptyScope):
            usage_summary(doc, [])

    def test_value_tolerance(self):
        svg = ('<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100">'
               '<rect id="r1" x="10" y="10" width="20" height="{h1}" fill="red"/>'
               '<rect id="r2" x="50" y="10" width="20" height="{h2}" fill="red"/>'
               '</svg>')
        near = parse_chart(svg.format(h1="10", h2="10.0000000001"))
        assert usage_map(near)["bbox_height"].distinct_values == 1
        far = parse_chart(svg.format(h1="10", h2="10.1"))
        assert usage_map(far)["bbox_height"].distinct_values == 2


class TestConflictRules:
    def _usage(self, in_use):
        names = {dim for rule in CONFLICT_RULES for dim in rule}
        return {name: DimensionUsage(dim=name, distinct_values=2 if name in in_use else 0,
                                     in_use=name in in_use, low_diversity=False)
                for name in names}

    def test_partner_in_use_blocks(self):
        usage = self._usage({"bbox_top"})
        assert not passes_conflict_rules("bbox_height", usage)
        assert not passes_conflict_rules("bbox_bottom", usage)
        assert passes_conflict_rules("bbox_width", usage)

    def test_area_spans_both_extents(self):
        assert not passes_conflict_rules("area", self._usage({"bbox_width"}))
        assert not passes_conflict_rules("area", self._usage({"bbox_height"}))
        assert passes_conflict_rules("area", self._usage(set()))

    def test_unrelated_channel_always_passes(self):
        assert passes_conflict_rules("fill_hue", self._usage({"bbox_top", "area"}))

    def test_generated_recruits_respect_rules(self, advisor_runs):
        for name, (doc, _, _, suggestions) in advisor_runs.items():
            usage = usage_map(doc)
            for s in suggestions:
                if s.kind == "add_dimension":
                    assert passes_conflict_rules(s.dim, usage), (name, s.dim)


class TestSuggestionContent:
    def test_bluebars_recruits_and_modifies(self, advisor_runs):
        _, _, _, suggestions = advisor_runs["advisor_bluebars.svg"]
        by_dim = {(s.kind, s.dim): s for s in suggestions}
        best = suggestions[0]
        assert (best.kind, best.dim, best.proposed_value) == (
            "add_dimension", "stroke_width", 2.0)
        assert best.code_expression == "stroke-width → 2"
        lightness = by_dim[("modify_effect", "fill_lightness")]
        assert lightness.proposed_value == 0.75
        assert re.fullmatch(r"fill → rgb\(\d+, \d+, \d+\)", lightness.code_expression)
        # hue contrast never clears a positive gain on this chart
        assert ("modify_effect", "fill_hue") not in by_dim

    def test_misaligned_alignment_and_hue_contrast(self, advisor_runs):
        _, _, _, suggestions = advisor_runs["advisor_misaligned.svg"]
        top3 = suggestions[:3]
        assert [s.dim for s in top3] == ["bbox_bottom", "bbox_top", "centroid_y"]
        gains = {s.predicted_salience_gain for s in top3}
        assert len(gains) == 1  # equal-gain trio, ordered alphabetically
        align = next(s for s in top3 if s.dim == "centroid_y")
        assert align.kind == "modify_effect"
        assert align.proposed_value == 40.0
        assert align.code_expression == "transform → align centroid_y at 40"
        hue = next(s for s in suggestions
                   if s.kind == "modify_effect" and s.dim == "fill_hue")
        assert hue.proposed_value == 240.0
        assert hue.code_expression == "fill → rgb(68, 68, 173)"

    def test_greencircles_recruits_stroke(self, advisor_runs):
        _, _, _, suggestions = advisor_runs["advisor_greencircles.svg"]
        width = next(s for s in suggestions
                     if s.kind == "add_dimension" and s.dim == "stroke_width")
        assert width.proposed_value == 1.0
        assert width.code_expression == "stroke-width → 1"
        # recruiting a stroke channel must supply a paint for the new stroke
        hue = next(s for s in suggestions
                   if s.kind == "add_dimension" and s.dim == "stroke_hue")
        assert any(cmd.name == "stroke" for cmd in hue.edit_commands)

    def test_strokes_modal_color(self, advisor_runs):
        _, _, _, suggestions = advisor_runs["advisor_strokes.svg"]
        modal = next(s for s in suggestions
                     if s.kind == "modify_effect" and s.dim == "stroke_hue")
        assert modal.proposed_value == pytest.approx(30.1676, abs=1e-3)
        assert modal.code_expression == "stroke → rgb(217, 128, 38)"
        per_element = next(s for s in suggestions
                           if s.kind == "add_dimension" and s.dim == "stroke_lightness")
        assert per_element.code_expression == "stroke → lightness 0.75 (per element)"

    def test_ranking_key(self, advisor_runs):
        for name, (_, _, _, suggestions) in advisor_runs.items():
            keys = [(-s.predicted_salience_gain, s.dim or "", str(s.proposed_value))
                    for s in suggestions]
            assert keys == sorted(keys), name

    def test_positive_gains_except_annotation(self, advisor_runs):
        for name, (_, _, _, suggestions) in advisor_runs.items():
            for s in suggestions[:-1]:
                if s.kind == "modify_effect" and s.dim in (
                        "fill_hue", "fill_saturation", "fill_lightness",
                        "stroke_hue", "stroke_saturation", "stroke_lightness"):
                    continue  # modal re-alignments may be emitted at any gain
                if s.kind in ("add_dimension",):
                    assert s.predicted_salience_gain > 0.0, (name, s.dim)

    def test_expression_formats(self, advisor_runs):
        patterns = (
            r"fill → rgb\(\d+, \d+, \d+\)",
            r"stroke → rgb\(\d+, \d+, \d+\)",
            r"stroke → (lightness|saturation) 0\.\d+ \(per element\)",
            r"stroke-width → \d+(\.\d+)?",
            r"transform → align \w+ at -?\d+(\.\d+)?",
            r"annotation → (surrounding rect|connecting polyline)",
        )
        for name, (_, _, _, suggestions) in advisor_runs.items():
            for s in suggestions:
                assert any(re.fullmatch(p, s.code_expression) for p in patterns), \
                    (name, s.code_expression)


class TestAnnotationSuggestion:
    def test_always_last_with_zero_gain(self, advisor_runs):
        for name, (_, _, _, suggestions) in advisor_runs.items():
            last = suggestions[-1]
            assert last.kind == "add_annotation", name
            assert last.predicted_salience_gain == 0.0
            assert last.conflicts_checked is False
            assert sum(s.kind == "add_annotation" for s in suggestions) == 1

    def test_disconnected_group_gets_polyline(self, advisor_runs):
        _, _, _, suggestions = advisor_runs["advisor_lowdiv.svg"]
        last = suggestions[-1]
        assert last.proposed_value == "connecting_polyline"
        assert last.code_expression == "annotation → connecting polyline"
        (cmd,) = last.edit_commands
        assert cmd.kind == "polyline"

    def test_touching_group_gets_surrounding_rect(self, fixture_model, bars6_doc,
                                                  bars6_features):
        suggestions = generate_suggestions(
            fixture_model, bars6_doc, bars6_features,
            ["/svg/rect[1]", "/svg/rect[2]"])
        last = suggestions[-1]
        assert last.proposed_value == "surrounding_rect"
        assert last.code_expression == "annotation → surrounding rect"
        (cmd,) = last.edit_commands
        assert cmd.kind == "rect"
        # 1% of the canvas diagonal pads the union bbox (x: 10..34, y: 60..90)
        diag = (120.0 ** 2 + 100.0 ** 2) ** 0.5
        pad = 0.01 * diag
        assert cmd.geometry["x"] == pytest.approx(10.0 - pad, abs=1e-9)
        assert cmd.geometry["y"] == pytest.approx(60.0 - pad, abs=1e-9)
        assert cmd.geometry["width"] == pytest.approx(24.0 + 2 * pad, abs=1e-9)
        assert cmd.style["stroke"] == "rgb(51, 51, 51)"
        assert cmd.style["stroke-dasharray"] == "4 2"


class TestApply:
    def test_apply_reaches_every_group_member(self, fixture_model, advisor_runs):
        doc, _, group, suggestions = advisor_runs["advisor_bluebars.svg"]
        width = next(s for s in suggestions if s.dim == "stroke_width")
        edited = apply_suggestion(doc, width)
        for eid in group:
            line = next(l for l in edited.source_text.splitlines()
                        if f'id="{eid}"' in l)
            assert 'stroke-width="2"' in line
            assert "stroke=" in line  # derived paint accompanies the width

    def test_applied_channel_not_recruited_again(self, fixture_model, advisor_runs):
        doc, _, group, suggestions = advisor_runs["advisor_bluebars.svg"]
        width = next(s for s in suggestions if s.dim == "stroke_width")
        edited = apply_suggestion(doc, width)
        refreshed = generate_suggestions(
            fixture_model, edited, extract_features(edited), group)
        assert not any(s.kind == "add_dimension" and s.dim == "stroke_width"
                       for s in refreshed)

    def test_gain_fidelity(self, fixture_model, advisor_runs):
        doc, feats, group, suggestions = advisor_runs["advisor_bluebars.svg"]
        base = salience(fixture_model, set(group), feats).display
        for s in suggestions:
            if s.kind == "add_annotation":
                continue
            edited = apply_suggestion(doc, s)
            actual = salience(fixture_model, set(group),
                              extract_features(edited)).display
            assert actual - base == pytest.approx(
                s.predicted_salience_gain, abs=1e-6), (s.kind, s.dim)

    def test_stale_suggestion_rejected(self, fixture_model, advisor_runs):
        doc, _, _, suggestions = advisor_runs["advisor_bluebars.svg"]
        modified = parse_chart(doc.source_text.replace("#4682b4", "#4682b5"))
        assert document_fingerprint(modified) != document_fingerprint(doc)
        with pytest.raises(StaleSuggestion):
            apply_suggestion(modified, suggestions[0])

    def test_annotation_applies_as_final_element(self, fixture_model, advisor_runs):
        doc, _, _, suggestions = advisor_runs["advisor_lowdiv.svg"]
        edited = apply_suggestion(doc, suggestions[-1])
        assert edited.elements[-1].kind == "polyline"
        assert len(edited.elements) == len(doc.elements) + 1


class TestScopeErrors:
    def test_empty_group(self, fixture_model, bars6_doc, bars6_features):
        with pytest.raises(EmptyScope):
            generate_suggestions(fixture_model, bars6_doc, bars6_features, [])

    def test_whole_chart_group(self, fixture_model, bars6_doc, bars6_features):
        with pytest.raises(WholeChartGroup):
            generate_suggestions(fixture_model, bars6_doc, bars6_features,
                                 list(bars6_features.element_ids))
