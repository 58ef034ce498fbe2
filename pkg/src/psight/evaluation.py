"""Model evaluation metrics and a synthetic planted-grouping corpus.

Three metrics compare the model's identified groups against human-annotated
patterns: element-group accuracy (each model group vs its best-matching
human pattern), pattern coverage rate (the reverse direction), and
association consistency (cosine of the two co-membership matrices). The
planted corpus generator builds synthetic charts whose elements group
cleanly on one chosen channel, standing in for a human-annotated corpus at
desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .annotations import AnnotationCorpus, PatternAnnotation, chart_rng
from .chart.parse import parse_chart
from .chart.color import hsl_to_rgb
from .effects import extract_features
from .errors import NoHumanPatterns, NoModelGroups, TooFewElements
from .model import PerceptionModel
from .patterns import identify_patterns, jaccard, salience
from .errors import WholeChartGroup

ElementSet = frozenset[str]


def _directed_mean_jaccard(sources: list[ElementSet],
                           targets: list[ElementSet]) -> float:
    return float(np.mean([max(jaccard(s, t) for t in targets) for s in sources]))


def ega(model_groups: list[ElementSet], human_patterns: list[ElementSet]) -> float:
    """Mean over model groups of the best Jaccard match among human patterns."""
    if not human_patterns:
        raise NoHumanPatterns("no human patterns to compare against")
    if not model_groups:
        raise NoModelGroups("no model groups to score")
    return _directed_mean_jaccard(model_groups, human_patterns)


def pcr(model_groups: list[ElementSet], human_patterns: list[ElementSet]) -> float:
    """Mean over human patterns of the best Jaccard match among model groups."""
    if not human_patterns:
        raise NoHumanPatterns("no human patterns to cover")
    if not model_groups:
        raise NoModelGroups("no model groups to compare against")
    return _directed_mean_jaccard(human_patterns, model_groups)


def association_matrix(groups: list[ElementSet],
                       element_ids: list[str]) -> np.ndarray:
    """Counts how often each element pair shares a group."""
    index = {eid: i for i, eid in enumerate(element_ids)}
    n = len(element_ids)
    matrix = np.zeros((n, n), dtype=int)
    for group in groups:
        members = sorted(index[eid] for eid in group if eid in index)
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = members[a], members[b]
                matrix[i, j] += 1
                matrix[j, i] += 1
    return matrix


def ac(model_groups: list[ElementSet], human_patterns: list[ElementSet],
       element_ids: list[str]) -> float:
    """Cosine similarity of the two co-membership matrices (upper triangles),
    after Frobenius normalization; 0 when either matrix is all-zero."""
    model_matrix = association_matrix(model_groups, element_ids)
    human_matrix = association_matrix(human_patterns, element_ids)
    iu = np.triu_indices(len(element_ids), k=1)
    a_vec = model_matrix[iu].astype(float)
    b_vec = human_matrix[iu].astype(float)
    na, nb = np.linalg.norm(a_vec), np.linalg.norm(b_vec)
    if na == 0 or nb == 0:
        return 0.0
    # counts are non-negative, so the true value lies in [0, 1]; clip the
    # floating-point residue
    return float(np.clip(np.dot(a_vec / na, b_vec / nb), 0.0, 1.0))


@dataclass(frozen=True)
class EvaluationRun:
    chart_id: str
    human_patterns: tuple[ElementSet, ...]
    model_groups: tuple[ElementSet, ...]
    k: int
    ega: float
    pcr: float
    ac: float
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class EvaluationReport:
    runs: tuple[EvaluationRun, ...]
    mean_ega: float
    mean_pcr: float
    mean_ac: float
    std_ega: float
    std_pcr: float
    std_ac: float


def distinct_annotated_patterns(corpus: AnnotationCorpus,
                                chart_id: str) -> list[ElementSet]:
    """Unique annotated element sets for a chart, in first-seen order."""
    seen: list[ElementSet] = []
    for annotation in corpus.annotations:
        if annotation.chart_id != chart_id:
            continue
        group = frozenset(annotation.element_ids)
        if group not in seen:
            seen.append(group)
    return seen


def evaluate_chart(model: PerceptionModel, corpus: AnnotationCorpus,
                   chart_id: str) -> EvaluationRun:
    """Top-k protocol: take the k most salient identified groups, where k is
    the chart's distinct annotated-pattern count."""
    doc = corpus.charts[chart_id]
    human = distinct_annotated_patterns(corpus, chart_id)
    if not human:
        raise NoHumanPatterns(f"chart {chart_id!r} has no annotations")
    k = len(human)
    features = extract_features(doc)
    flags: list[str] = []
    try:
        groups = identify_patterns(model, features)
    except TooFewElements:
        groups = []
        flags.append("too few elements for identification")

    ranked: list[tuple[float, ElementSet]] = []
    for group in groups:
        try:
            score = salience(model, group.element_ids, features)
        except WholeChartGroup:
            flags.append("whole-chart group skipped in ranking")
            continue
        ranked.append((score.display, group.element_ids))
    ranked.sort(key=lambda item: (-item[0], sorted(item[1])))
    top = [group for _, group in ranked[:k]]

    if not top:
        flags.append("no model groups; metrics forced to 0")
        ega_score = pcr_score = ac_score = 0.0
    else:
        ega_score = ega(top, human)
        pcr_score = pcr(top, human)
        ac_score = ac(top, human, list(features.element_ids))
    return EvaluationRun(
        chart_id=chart_id, human_patterns=tuple(human),
        model_groups=tuple(top), k=k, ega=ega_score, pcr=pcr_score,
        ac=ac_score, flags=tuple(flags))


def evaluate_corpus(model: PerceptionModel, corpus: AnnotationCorpus,
                    chart_ids: list[str] | None = None) -> EvaluationReport:
    if chart_ids is None:
        chart_ids = list(corpus.charts)
    runs = tuple(evaluate_chart(model, corpus, cid) for cid in chart_ids)
    egas = np.array([r.ega for r in runs])
    pcrs = np.array([r.pcr for r in runs])
    acs = np.array([r.ac for r in runs])
    return EvaluationReport(
        runs=runs,
        mean_ega=float(egas.mean()), mean_pcr=float(pcrs.mean()),
        mean_ac=float(acs.mean()),
        std_ega=float(egas.std()), std_pcr=float(pcrs.std()),
        std_ac=float(acs.std()))


# ---------------------------------------------------------------------------
# planted corpus


@dataclass(frozen=True)
class PlantedConfig:
    n_charts: int = 20
    n_groups_per_chart: int | tuple[int, int] = (2, 3)
    elements_per_group: int | tuple[int, int] = (3, 6)
    grouping_channel: str = "fill_hue"  # "fill_hue" | "bbox_top" | "size"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.grouping_channel not in ("fill_hue", "bbox_top", "size"):
            raise ValueError(f"unknown grouping channel {self.grouping_channel!r}")
        for name in ("n_charts",):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


CANVAS_W, CANVAS_H = 400.0, 300.0


def _pick(rng: np.random.Generator, value: int | tuple[int, int]) -> int:
    if isinstance(value, tuple):
        lo, hi = value
        return int(rng.integers(lo, hi + 1))
    return int(value)


def _planted_chart(config: PlantedConfig, chart_index: int,
                   ) -> tuple[str, str, list[list[str]]]:
    """One synthetic chart; returns (chart_id, svg, element ids per group)."""
    chart_id = f"planted-{config.grouping_channel}-{chart_index:03d}"
    rng = chart_rng(config.seed, chart_id)
    n_groups = _pick(rng, config.n_groups_per_chart)
    sizes = [_pick(rng, config.elements_per_group) for _ in range(n_groups)]
    total = sum(sizes)

    assignment = np.repeat(np.arange(n_groups), sizes)
    rng.shuffle(assignment)

    hue_offset = float(rng.uniform(0, 360))
    group_hues = [(hue_offset + g * 360.0 / n_groups) % 360.0
                  for g in range(n_groups)]

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'width="{CANVAS_W:g}" height="{CANVAS_H:g}">']
    groups: list[list[str]] = [[] for _ in range(n_groups)]

    if config.grouping_channel == "fill_hue":
        # a bar row: group membership encoded purely in hue, geometry noisy
        margin, baseline = 20.0, 280.0
        slot = (CANVAS_W - 2 * margin) / total
        width = round(slot * 0.45, 2)
        for i in range(total):
            g = int(assignment[i])
            x = round(margin + i * slot + slot * 0.275, 2)
            height = round(float(rng.uniform(60, 240)), 2)
            r, gg, b = hsl_to_rgb(group_hues[g], 0.75, 0.5)
            eid = f"e{i}"
            parts.append(
                f'<rect id="{eid}" x="{x}" y="{round(baseline - height, 2)}" '
                f'width="{width}" height="{height}" fill="rgb({r},{gg},{b})"/>')
            groups[g].append(eid)
    else:
        # scatter circles on a jittered grid (no accidental contact)
        cols = int(np.ceil(np.sqrt(total)))
        rows_n = int(np.ceil(total / cols))
        cell_w = (CANVAS_W - 40) / cols
        cell_h = (CANVAS_H - 40) / rows_n
        cells = [(c, r) for r in range(rows_n) for c in range(cols)]
        rng.shuffle(cells)
        group_tops = [round(float(rng.uniform(30, CANVAS_H - 60)), 2)
                      for _ in range(n_groups)]
        group_radii = [round(float(rng.uniform(4, 16)), 2) for _ in range(n_groups)]
        for i in range(total):
            g = int(assignment[i])
            col, row = cells[i]
            jitter_x = float(rng.uniform(0.3, 0.7))
            jitter_y = float(rng.uniform(0.3, 0.7))
            cx = round(20 + (col + jitter_x) * cell_w, 2)
            cy = round(20 + (row + jitter_y) * cell_h, 2)
            radius = round(float(rng.uniform(4, 16)), 2)
            hue = float(rng.uniform(0, 360))
            if config.grouping_channel == "bbox_top":
                radius = 8.0
                cy = round(group_tops[g] + radius, 2)
            else:  # size
                radius = group_radii[g]
            r, gg, b = hsl_to_rgb(hue, 0.75, 0.5)
            eid = f"e{i}"
            parts.append(
                f'<circle id="{eid}" cx="{cx}" cy="{cy}" r="{radius}" '
                f'fill="rgb({r},{gg},{b})"/>')
            groups[g].append(eid)
    parts.append("</svg>")
    return chart_id, "\n".join(parts), groups


def generate_planted_corpus(config: PlantedConfig) -> AnnotationCorpus:
    """Synthetic charts partitioned on one channel, with one annotation per
    planted group (consistency 5, distinctness 3). Deterministic per seed."""
    charts = {}
    annotations: list[PatternAnnotation] = []
    for index in range(config.n_charts):
        chart_id, svg, groups = _planted_chart(config, index)
        charts[chart_id] = parse_chart(svg)
        for members in groups:
            annotations.append(PatternAnnotation(
                chart_id=chart_id, annotator_id="planted",
                element_ids=tuple(members), consistency_rating=5,
                distinctness_rating=3))
    return AnnotationCorpus(charts=charts, annotations=annotations,
                            rng_seed=config.seed)
