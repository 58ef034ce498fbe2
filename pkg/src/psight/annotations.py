"""Human pattern-annotation corpus and contrastive pair derivation.

A corpus is one JSON document naming charts (by SVG path) and group
annotations with two 1-5 ratings: intra-group consistency and boundary
distinctness. Positive training pairs come from top-consistency groups;
negative pairs are sampled across each group's boundary with a
distance-decaying Gaussian kernel, plus every adjacent outside neighbor.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chart.parse import parse_chart
from .chart.types import ChartDocument
from .effects import ChartFeatureTable, build_relationship_matrices

TOP_CONSISTENCY = 5

# Gaussian kernel bandwidth for negative sampling, as a fraction of the
# canvas diagonal
NEGATIVE_SIGMA_RATIO = 0.15


@dataclass(frozen=True)
class PatternAnnotation:
    chart_id: str
    annotator_id: str
    element_ids: tuple[str, ...]
    consistency_rating: int
    distinctness_rating: int

    def __post_init__(self) -> None:
        if not self.element_ids:
            raise ValueError("annotation has no elements")
        for rating in (self.consistency_rating, self.distinctness_rating):
            if not 1 <= rating <= 5:
                raise ValueError(f"rating {rating} outside 1-5")


@dataclass
class AnnotationCorpus:
    charts: dict[str, ChartDocument]
    annotations: list[PatternAnnotation]
    rng_seed: int
    chart_paths: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class TrainingPair:
    chart_id: str
    element_a: str
    element_b: str
    polarity: str  # "positive" | "negative"

    def __post_init__(self) -> None:
        if self.element_a == self.element_b:
            raise ValueError("pair endpoints must differ")


def load_corpus(path: str | Path) -> AnnotationCorpus:
    """Read a corpus JSON file; SVG paths resolve relative to the file."""
    path = Path(path)
    data = json.loads(path.read_text())
    charts: dict[str, ChartDocument] = {}
    chart_paths: dict[str, str] = {}
    for entry in data["charts"]:
        svg_path = Path(entry["svg_path"])
        if not svg_path.is_absolute():
            svg_path = path.parent / svg_path
        charts[entry["id"]] = parse_chart(svg_path.read_text())
        chart_paths[entry["id"]] = entry["svg_path"]
    annotations: list[PatternAnnotation] = []
    for raw in data["annotations"]:
        annotation = PatternAnnotation(
            chart_id=raw["chart"],
            annotator_id=raw["annotator"],
            element_ids=tuple(raw["elements"]),
            consistency_rating=int(raw["consistency"]),
            distinctness_rating=int(raw["distinctness"]),
        )
        if annotation.chart_id not in charts:
            raise ValueError(f"annotation references unknown chart {annotation.chart_id!r}")
        doc = charts[annotation.chart_id]
        for eid in annotation.element_ids:
            if not doc.has_element(eid):
                raise ValueError(
                    f"annotation on {annotation.chart_id!r} references unknown element {eid!r}")
        annotations.append(annotation)
    return AnnotationCorpus(charts=charts, annotations=annotations,
                            rng_seed=int(data.get("seed", 0)),
                            chart_paths=chart_paths)


def save_corpus(corpus: AnnotationCorpus, path: str | Path,
                svg_dir_name: str = "charts") -> None:
    """Write the corpus JSON plus its SVG files under a sibling directory."""
    path = Path(path)
    svg_dir = path.parent / svg_dir_name
    svg_dir.mkdir(parents=True, exist_ok=True)
    chart_entries = []
    for chart_id, doc in corpus.charts.items():
        rel = corpus.chart_paths.get(chart_id, f"{svg_dir_name}/{chart_id}.svg")
        target = Path(rel)
        if not target.is_absolute():
            target = path.parent / target
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(doc.source_text)
        chart_entries.append({"id": chart_id, "svg_path": rel})
    data = {
        "seed": corpus.rng_seed,
        "charts": chart_entries,
        "annotations": [
            {
                "chart": a.chart_id,
                "annotator": a.annotator_id,
                "elements": list(a.element_ids),
                "consistency": a.consistency_rating,
                "distinctness": a.distinctness_rating,
            }
            for a in corpus.annotations
        ],
    }
    path.write_text(json.dumps(data, indent=2) + "\n")


def _ordered_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def extract_positive_pairs(corpus: AnnotationCorpus) -> list[TrainingPair]:
    """All unordered within-group pairs from top-consistency annotations,
    deduplicated per chart across annotators."""
    seen: set[tuple[str, str, str]] = set()
    pairs: list[TrainingPair] = []
    for annotation in corpus.annotations:
        if annotation.consistency_rating != TOP_CONSISTENCY:
            continue
        ids = list(annotation.element_ids)
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                a, b = _ordered_pair(ids[i], ids[j])
                key = (annotation.chart_id, a, b)
                if key in seen:
                    continue
                seen.add(key)
                pairs.append(TrainingPair(annotation.chart_id, a, b, "positive"))
    return pairs


def chart_rng(rng_seed: int, chart_id: str) -> np.random.Generator:
    """Independent deterministic stream per (seed, chart)."""
    chart_key = zlib.crc32(chart_id.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([rng_seed, chart_key]))


def sample_negative_pairs(
    corpus: AnnotationCorpus,
    features: dict[str, ChartFeatureTable],
    seed: int | None = None,
) -> tuple[list[TrainingPair], list[str]]:
    """Boundary-crossing negative pairs for every annotation.

    For each in-group element, distinctness_rating outside elements are drawn
    without replacement with probability proportional to
    exp(-d^2 / (2 sigma^2)) over centroid distance d, and every outside
    contact-graph neighbor is force-included. Returns (pairs, warnings).
    """
    if seed is None:
        seed = corpus.rng_seed
    warnings: list[str] = []
    pairs: list[TrainingPair] = []
    seen: set[tuple[str, str, str]] = set()
    streams: dict[str, np.random.Generator] = {}
    contact_cache: dict[str, np.ndarray] = {}

    for annotation in corpus.annotations:
        chart_id = annotation.chart_id
        table = features[chart_id]
        doc = corpus.charts[chart_id]
        ids = list(table.element_ids)
        index = {eid: i for i, eid in enumerate(ids)}
        group = [eid for eid in annotation.element_ids if eid in index]
        outside = [eid for eid in ids if eid not in set(annotation.element_ids)]
        if not outside:
            warnings.append(
                f"annotation by {annotation.annotator_id!r} covers all of "
                f"{chart_id!r}; no negatives emitted")
            continue
        if chart_id not in streams:
            streams[chart_id] = chart_rng(seed, chart_id)
        rng = streams[chart_id]
        if chart_id not in contact_cache:
            scoped = [doc.element(eid) for eid in ids]
            contact_cache[chart_id] = build_relationship_matrices(doc, scoped).contact
        contact = contact_cache[chart_id]

        centroids = table.raw[:, 13:15]
        sigma = NEGATIVE_SIGMA_RATIO * doc.canvas_diagonal
        outside_idx = np.array([index[eid] for eid in outside])

        def emit(a: str, b: str) -> None:
            lo, hi = _ordered_pair(a, b)
            key = (chart_id, lo, hi)
            if key not in seen:
                seen.add(key)
                pairs.append(TrainingPair(chart_id, lo, hi, "negative"))

        for eid in group:
            i = index[eid]
            # forced: adjacent outside neighbors are always negatives
            for j in outside_idx[contact[i, outside_idx] > 0]:
                emit(eid, ids[int(j)])
            # sampled: Gaussian kernel over centroid distance
            d = np.linalg.norm(centroids[outside_idx] - centroids[i], axis=1)
            weights = np.exp(-(d ** 2) / (2.0 * sigma ** 2))
            total = weights.sum()
            if total <= 0:
                probabilities = np.full(len(outside_idx), 1.0 / len(outside_idx))
            else:
                probabilities = weights / total
            n_draw = min(annotation.distinctness_rating, len(outside_idx))
            drawn = rng.choice(len(outside_idx), size=n_draw, replace=False,
                               p=probabilities)
            for k in drawn:
                emit(eid, ids[int(outside_idx[k])])
    return pairs, warnings
