"""Pattern identification, salience scoring, and report assembly.

Candidate groups come from average-linkage agglomerative clustering of
element representations under five similarity metrics: the full embedding
and each of its four sub-representations. Each group is scored with the
ratio of mean in-group consistency to mean boundary consistency, mapped to
a bounded 0-100 display scale.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .effects import DIMENSION_NAMES, ChartFeatureTable
from .errors import TooFewElements, WholeChartGroup
from .model import PerceptionModel, consistency_matrix

# clusters are cut where average cosine similarity falls below this
SIMILARITY_THRESHOLD = 0.9

# similar-pattern link when Jaccard overlap strictly exceeds this
OVERLAP_THRESHOLD = 0.8

# floor for the boundary-consistency denominator
EPSILON = 1e-9

# normalized in-group variance divides by the maximum possible variance of
# values confined to [0,1]
MAX_VARIANCE = 0.25

TOP_CONTRIBUTING = 5


@dataclass(frozen=True)
class ElementGroup:
    element_ids: frozenset[str]
    origin: str  # "model_full" | "model_subrep(k)" | "user_selection" | "annotation"


@dataclass(frozen=True)
class SalienceScore:
    ratio: float
    display: float  # 100 * ratio / (1 + ratio)
    intra_avg: float
    inter_avg: float


@dataclass(frozen=True)
class Pattern:
    group: ElementGroup
    salience: SalienceScore | None  # None: group covers the whole scope
    contributing_dims: tuple[str, ...]
    type_counts: dict[str, int]


@dataclass(frozen=True)
class PatternReport:
    patterns: tuple[Pattern, ...]          # sorted by display salience desc
    core_patterns: tuple[frozenset[str], ...]
    similar_links: tuple[tuple[int, int], ...]  # indices into patterns


def _cosine_condensed(x: np.ndarray) -> np.ndarray:
    """Condensed cosine-distance matrix; all-zero rows are distance 1 from
    everything (similarity 0)."""
    norms = np.linalg.norm(x, axis=1)
    safe = np.where(norms < EPSILON, 1.0, norms)
    unit = x / safe[:, None]
    sim = np.clip(unit @ unit.T, -1.0, 1.0)
    zero = norms < EPSILON
    sim[zero, :] = 0.0
    sim[:, zero] = 0.0
    np.fill_diagonal(sim, 1.0)
    dist = 1.0 - sim
    iu = np.triu_indices(len(x), k=1)
    return np.maximum(dist[iu], 0.0)


def _cluster_groups(x: np.ndarray, ids: tuple[str, ...]) -> list[frozenset[str]]:
    if len(ids) < 2:
        return []
    condensed = _cosine_condensed(x)
    tree = linkage(condensed, method="average")
    labels = fcluster(tree, t=1.0 - SIMILARITY_THRESHOLD, criterion="distance")
    groups: dict[int, list[str]] = {}
    for label, eid in zip(labels, ids):
        groups.setdefault(int(label), []).append(eid)
    return [frozenset(members) for label, members in sorted(groups.items())
            if len(members) >= 2]


def identify_patterns(model: PerceptionModel,
                      features: ChartFeatureTable) -> list[ElementGroup]:
    """Cluster under the full embedding and each sub-representation; union
    the resulting size->=2 clusters, deduplicating identical element sets."""
    if len(features.element_ids) < 2:
        raise TooFewElements("pattern identification needs at least 2 elements")
    embeddings = model.embed(features.values)
    metrics: list[tuple[str, np.ndarray]] = [("model_full", embeddings)]
    k = model.config.subrep_dim
    for s in range(model.config.n_subreps):
        metrics.append((f"model_subrep({s})", embeddings[:, s * k:(s + 1) * k]))

    out: list[ElementGroup] = []
    seen: set[frozenset[str]] = set()
    for origin, x in metrics:
        for members in _cluster_groups(x, features.element_ids):
            if members not in seen:
                seen.add(members)
                out.append(ElementGroup(element_ids=members, origin=origin))
    return out


def salience(model: PerceptionModel, group: frozenset[str] | set[str],
             features: ChartFeatureTable) -> SalienceScore:
    """Ratio of mean in-group consistency to mean boundary consistency.

    Singleton groups take intra_avg = 1. Raises WholeChartGroup when no
    element lies outside the group (the ratio has no boundary to compare
    against).
    """
    ids = features.element_ids
    inside = [i for i, eid in enumerate(ids) if eid in group]
    outside = [i for i, eid in enumerate(ids) if eid not in group]
    if not inside:
        raise ValueError("group has no featured elements")
    if not outside:
        raise WholeChartGroup("group covers the whole chart; salience undefined")

    matrix = consistency_matrix(model, features.values)
    if len(inside) == 1:
        intra = 1.0
    else:
        rows = np.array(inside)
        sub = matrix[np.ix_(rows, rows)]
        iu = np.triu_indices(len(inside), k=1)
        intra = float(sub[iu].mean())
    inter = float(matrix[np.ix_(np.array(inside), np.array(outside))].mean())
    ratio = intra / max(inter, EPSILON)
    return SalienceScore(ratio=ratio, display=100.0 * ratio / (1.0 + ratio),
                         intra_avg=intra, inter_avg=inter)


def contributing_dimensions(model: PerceptionModel,
                            group: frozenset[str] | set[str],
                            features: ChartFeatureTable,
                            top: int = TOP_CONTRIBUTING) -> tuple[str, ...]:
    """Rank dimensions by mean in-group weighted value, discounted by the
    dimension's normalized in-group variance."""
    inside = [i for i, eid in enumerate(features.element_ids) if eid in group]
    rows = features.values[inside]
    weights = np.abs(model.weight(rows))
    mean_weighted = (weights * rows).mean(axis=0)
    variance = rows.var(axis=0)  # population variance
    contribution = mean_weighted * (1.0 - variance / MAX_VARIANCE)
    order = sorted(range(len(DIMENSION_NAMES)),
                   key=lambda d: (-contribution[d], DIMENSION_NAMES[d]))
    return tuple(DIMENSION_NAMES[d] for d in order[:top])


def jaccard(a: frozenset[str] | set[str], b: frozenset[str] | set[str]) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 1.0


def summarize(model: PerceptionModel, features: ChartFeatureTable,
              groups: list[ElementGroup],
              kinds_by_id: dict[str, str] | None = None) -> PatternReport:
    """Score, sort, and cross-link the groups into a report.

    Group pairs with Jaccard overlap strictly above the threshold become
    similar_links; their intersections are recorded as core patterns.
    """
    scored: list[Pattern] = []
    for group in groups:
        try:
            score: SalienceScore | None = salience(model, group.element_ids, features)
        except WholeChartGroup:
            score = None  # no boundary to compare against; rank last
        dims = contributing_dimensions(model, group.element_ids, features)
        counts: Counter[str] = Counter()
        if kinds_by_id:
            for eid in group.element_ids:
                counts[kinds_by_id[eid]] += 1
        scored.append(Pattern(group=group, salience=score,
                              contributing_dims=dims,
                              type_counts=dict(counts)))
    scored.sort(key=lambda p: (-(p.salience.display if p.salience else -1.0),
                               sorted(p.group.element_ids)))

    links: list[tuple[int, int]] = []
    cores: list[frozenset[str]] = []
    seen_cores: set[frozenset[str]] = set()
    for i in range(len(scored)):
        for j in range(i + 1, len(scored)):
            a = scored[i].group.element_ids
            b = scored[j].group.element_ids
            if jaccard(a, b) > OVERLAP_THRESHOLD:
                links.append((i, j))
                core = frozenset(a & b)
                if core and core not in seen_cores:
                    seen_cores.add(core)
                    cores.append(core)
    return PatternReport(patterns=tuple(scored), core_patterns=tuple(cores),
                         similar_links=tuple(links))
