"""Shared fixtures: SVG fixture loading, the planted corpus, and the frozen
reference model.

The binary model fixture (``tests/fixtures/model.bin``) was produced once by
the deterministic recipe in ``train_reference_model`` below; tests that need
a realistic trained model load the frozen copy for speed, and a dedicated
test re-runs the recipe to prove the frozen bytes are reproducible.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from psight.annotations import (
    AnnotationCorpus,
    extract_positive_pairs,
    sample_negative_pairs,
)
from psight.chart import parse_chart
from psight.chart.types import ChartDocument
from psight.effects import ChartFeatureTable, extract_features
from psight.evaluation import PlantedConfig, generate_planted_corpus
from psight.model import ModelConfig, PerceptionModel, load_model, train

FIXTURES = Path(__file__).parent / "fixtures"

PARITY_FIXTURES = (
    "bars6.svg",
    "bars18.svg",
    "scatter.svg",
    "grouped.svg",
    "mixed.svg",
)

# fixture file -> the element group the advisor tests target
ADVISOR_CASES: dict[str, tuple[str, ...]] = {
    "advisor_bluebars.svg": ("b0", "b1", "b2", "b3"),
    "advisor_greencircles.svg": ("g0", "g1", "g2", "g3", "g4"),
    "advisor_misaligned.svg": ("m0", "m1", "m2", "m3", "m4"),
    "advisor_lowdiv.svg": ("a0", "a1", "a2"),
    "advisor_strokes.svg": ("s0", "s1", "s2"),
}

PLANTED_SEED = 42
MODEL_SEED = 7
TRAIN_SPLIT = 16


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


def load_fixture_doc(name: str) -> ChartDocument:
    return parse_chart(fixture_text(name))


def make_planted_corpus() -> AnnotationCorpus:
    return generate_planted_corpus(
        PlantedConfig(n_charts=20, grouping_channel="fill_hue",
                      seed=PLANTED_SEED))


def train_reference_model(
    corpus: AnnotationCorpus,
    features: dict[str, ChartFeatureTable],
    train_ids: list[str],
    seed: int = MODEL_SEED,
) -> tuple[PerceptionModel, list[float]]:
    """The exact recipe that produced tests/fixtures/model.bin."""
    subset = AnnotationCorpus(
        charts={cid: corpus.charts[cid] for cid in train_ids},
        annotations=[a for a in corpus.annotations
                     if a.chart_id in set(train_ids)],
        rng_seed=corpus.rng_seed,
    )
    positives = extract_positive_pairs(subset)
    negatives, _ = sample_negative_pairs(subset, features)
    return train(ModelConfig(seed=seed), positives + negatives, features)


@pytest.fixture(scope="session")
def planted_corpus() -> AnnotationCorpus:
    return make_planted_corpus()


@pytest.fixture(scope="session")
def corpus_features(planted_corpus) -> dict[str, ChartFeatureTable]:
    return {cid: extract_features(doc)
            for cid, doc in planted_corpus.charts.items()}


@pytest.fixture(scope="session")
def split_ids(planted_corpus) -> tuple[list[str], list[str]]:
    ordered = sorted(planted_corpus.charts)
    return ordered[:TRAIN_SPLIT], ordered[TRAIN_SPLIT:]


@pytest.fixture(scope="session")
def model_path() -> Path:
    return FIXTURES / "model.bin"


@pytest.fixture(scope="session")
def fixture_model(model_path) -> PerceptionModel:
    return load_model(model_path)


@pytest.fixture(scope="session")
def bars6_doc() -> ChartDocument:
    return load_fixture_doc("bars6.svg")


@pytest.fixture(scope="session")
def bars6_features(bars6_doc) -> ChartFeatureTable:
    return extract_features(bars6_doc)
