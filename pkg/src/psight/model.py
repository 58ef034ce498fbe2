"""Contrastive perception model.

A small MLP encoder maps each 23-dim effect vector to a 32-dim embedding
(four contiguous 8-dim sub-representations), and a parallel head emits a
per-element perceptual weight vector in (0,1) over the 23 input dimensions.
Training pulls annotated-group pairs together and pushes sampled boundary
pairs apart, both in embedding space and under the weighted-feature
consistency measure, with exact analytic gradients and full-batch descent.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .annotations import TrainingPair
from .effects import ChartFeatureTable
from .errors import CorruptFile, EmptyPairSet, NonFiniteLoss, VersionMismatch

MAGIC = b"PSIM"
FORMAT_VERSION = 1

_ZERO_NORM = 1e-12
PARAM_ORDER = ("W1", "b1", "W2", "b2", "Ww", "bw")


@dataclass(frozen=True)
class ModelConfig:
    input_dim: int = 23
    hidden_dim: int = 64
    embed_dim: int = 32
    n_subreps: int = 4
    margin: float = 0.5
    aux_weight: float = 0.5
    learning_rate: float = 1e-2
    epochs: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if self.embed_dim % self.n_subreps != 0:
            raise ValueError("embed_dim must be divisible by n_subreps")
        for name in ("input_dim", "hidden_dim", "embed_dim", "n_subreps",
                     "margin", "aux_weight", "learning_rate"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")

    @property
    def subrep_dim(self) -> int:
        return self.embed_dim // self.n_subreps


@dataclass(frozen=True)
class ElementRepresentation:
    embedding: np.ndarray            # (embed_dim,)
    subreps: tuple[np.ndarray, ...]  # n_subreps slices of the embedding
    weights: np.ndarray              # (input_dim,), each in (0,1)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    ex = np.exp(x[~positive])
    out[~positive] = ex / (1.0 + ex)
    return out


@dataclass
class PerceptionModel:
    config: ModelConfig
    params: dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def initialize(cls, config: ModelConfig) -> "PerceptionModel":
        """Seeded uniform(-0.1, 0.1) init, parameters drawn in PARAM_ORDER."""
        rng = np.random.default_rng(config.seed)
        shapes = cls._shapes(config)
        params = {name: rng.uniform(-0.1, 0.1, size=shapes[name])
                  for name in PARAM_ORDER}
        return cls(config=config, params=params)

    @staticmethod
    def _shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
        return {
            "W1": (config.input_dim, config.hidden_dim),
            "b1": (config.hidden_dim,),
            "W2": (config.hidden_dim, config.embed_dim),
            "b2": (config.embed_dim,),
            "Ww": (config.input_dim, config.input_dim),
            "bw": (config.input_dim,),
        }

    def embed(self, values: np.ndarray) -> np.ndarray:
        """Encode one or many effect vectors into embeddings."""
        v = np.atleast_2d(np.asarray(values, dtype=float))
        hidden = np.tanh(v @ self.params["W1"] + self.params["b1"])
        out = hidden @ self.params["W2"] + self.params["b2"]
        return out if np.asarray(values).ndim > 1 else out[0]

    def weight(self, values: np.ndarray) -> np.ndarray:
        """Perceptual weight vector(s) in (0,1) for effect vector(s)."""
        v = np.atleast_2d(np.asarray(values, dtype=float))
        out = _sigmoid(v @ self.params["Ww"] + self.params["bw"])
        return out if np.asarray(values).ndim > 1 else out[0]

    def forward(self, values: np.ndarray) -> ElementRepresentation:
        embedding = self.embed(values)
        k = self.config.subrep_dim
        subreps = tuple(embedding[i * k:(i + 1) * k]
                        for i in range(self.config.n_subreps))
        return ElementRepresentation(embedding=embedding, subreps=subreps,
                                     weights=self.weight(values))

    def weighted_vectors(self, values: np.ndarray) -> np.ndarray:
        v = np.atleast_2d(np.asarray(values, dtype=float))
        return np.abs(self.weight(v)) * v


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0 when either vector is all-zero."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na < _ZERO_NORM or nb < _ZERO_NORM:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def consistency(model: PerceptionModel, v_i: np.ndarray, v_j: np.ndarray) -> float:
    """Weighted-feature consistency between two effect vectors."""
    wv = model.weighted_vectors(np.stack([np.asarray(v_i, dtype=float),
                                          np.asarray(v_j, dtype=float)]))
    return cosine(wv[0], wv[1])


def consistency_matrix(model: PerceptionModel, values: np.ndarray) -> np.ndarray:
    """Pairwise consistency over feature rows; zero-norm rows give 0."""
    wv = model.weighted_vectors(values)
    norms = np.linalg.norm(wv, axis=1)
    safe = np.where(norms < _ZERO_NORM, 1.0, norms)
    unit = wv / safe[:, None]
    matrix = unit @ unit.T
    matrix[norms < _ZERO_NORM, :] = 0.0
    matrix[:, norms < _ZERO_NORM] = 0.0
    return np.clip(matrix, -1.0, 1.0)


def assemble_training_arrays(
    pairs: list[TrainingPair],
    features: dict[str, ChartFeatureTable],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stack all referenced charts' feature rows and index the pairs into
    them. Returns (values, positive_index_pairs, negative_index_pairs)."""
    if not pairs:
        raise EmptyPairSet("no training pairs")
    row_of: dict[tuple[str, str], int] = {}
    blocks: list[np.ndarray] = []
    offset = 0
    for chart_id in sorted({p.chart_id for p in pairs}):
        table = features[chart_id]
        for i, eid in enumerate(table.element_ids):
            row_of[(chart_id, eid)] = offset + i
        blocks.append(table.values)
        offset += len(table.element_ids)
    values = np.vstack(blocks)
    pos = [(row_of[(p.chart_id, p.element_a)], row_of[(p.chart_id, p.element_b)])
           for p in pairs if p.polarity == "positive"]
    neg = [(row_of[(p.chart_id, p.element_a)], row_of[(p.chart_id, p.element_b)])
           for p in pairs if p.polarity == "negative"]
    to_array = lambda rows: (np.array(rows, dtype=int) if rows
                             else np.zeros((0, 2), dtype=int))
    return values, to_array(pos), to_array(neg)


def _pair_cosines(x: np.ndarray, pairs: np.ndarray,
                  ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Cosines for row pairs plus the pieces needed for their gradient."""
    a = x[pairs[:, 0]]
    b = x[pairs[:, 1]]
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    valid = (na >= _ZERO_NORM) & (nb >= _ZERO_NORM)
    denom = np.where(valid, na * nb, 1.0)
    cos = np.where(valid, np.sum(a * b, axis=1) / denom, 0.0)
    return cos, a, b, np.where(valid, na, 1.0), np.where(valid, nb, 1.0)


def _accumulate_cosine_grads(grad: np.ndarray, x: np.ndarray, pairs: np.ndarray,
                             coeff: np.ndarray) -> None:
    """Add coeff_k * d cos(x_i, x_j) / d x into grad (in place)."""
    if pairs.size == 0:
        return
    cos, a, b, na, nb = _pair_cosines(x, pairs)
    active = coeff != 0.0
    if not np.any(active):
        return
    pairs = pairs[active]
    coeff = coeff[active][:, None]
    a, b = a[active], b[active]
    cos = cos[active][:, None]
    na = na[active][:, None]
    nb = nb[active][:, None]
    grad_a = coeff * (b / (na * nb) - cos * a / (na ** 2))
    grad_b = coeff * (a / (na * nb) - cos * b / (nb ** 2))
    np.add.at(grad, pairs[:, 0], grad_a)
    np.add.at(grad, pairs[:, 1], grad_b)


def _loss_and_grads(params: dict[str, np.ndarray], values: np.ndarray,
                    pos: np.ndarray, neg: np.ndarray, margin: float,
                    aux_weight: float,
                    ) -> tuple[float, dict[str, np.ndarray]]:
    v = values
    z1 = v @ params["W1"] + params["b1"]
    hidden = np.tanh(z1)
    emb = hidden @ params["W2"] + params["b2"]
    u = _sigmoid(v @ params["Ww"] + params["bw"])
    weighted = np.abs(u) * v

    n_pos = max(len(pos), 1)
    n_neg = max(len(neg), 1)

    def terms(x: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        loss = 0.0
        pos_coeff = np.zeros(len(pos))
        neg_coeff = np.zeros(len(neg))
        if len(pos):
            cos_p, *_ = _pair_cosines(x, pos)
            loss += float(np.mean(1.0 - cos_p))
            pos_coeff[:] = -1.0 / n_pos
        if len(neg):
            cos_n, *_ = _pair_cosines(x, neg)
            hinge = cos_n - margin
            active = hinge > 0
            loss += float(np.sum(hinge[active]) / n_neg)
            neg_coeff[active] = 1.0 / n_neg
        return loss, pos_coeff, neg_coeff

    loss_e, pos_ce, neg_ce = terms(emb)
    loss_c, pos_cc, neg_cc = terms(weighted)
    loss = loss_e + aux_weight * loss_c

    grad_emb = np.zeros_like(emb)
    _accumulate_cosine_grads(grad_emb, emb, pos, pos_ce)
    _accumulate_cosine_grads(grad_emb, emb, neg, neg_ce)

    grad_weighted = np.zeros_like(weighted)
    _accumulate_cosine_grads(grad_weighted, weighted, pos, aux_weight * pos_cc)
    _accumulate_cosine_grads(grad_weighted, weighted, neg, aux_weight * neg_cc)

    grads: dict[str, np.ndarray] = {}
    grads["W2"] = hidden.T @ grad_emb
    grads["b2"] = grad_emb.sum(axis=0)
    grad_hidden = grad_emb @ params["W2"].T
    grad_z1 = grad_hidden * (1.0 - hidden ** 2)
    grads["W1"] = v.T @ grad_z1
    grads["b1"] = grad_z1.sum(axis=0)

    grad_u = grad_weighted * v
    grad_zw = grad_u * u * (1.0 - u)
    grads["Ww"] = v.T @ grad_zw
    grads["bw"] = grad_zw.sum(axis=0)
    return loss, grads


def contrastive_loss(model: PerceptionModel, pairs: list[TrainingPair],
                     features: dict[str, ChartFeatureTable],
                     ) -> tuple[float, dict[str, np.ndarray]]:
    """Loss over the pair set plus exact analytic parameter gradients."""
    values, pos, neg = assemble_training_arrays(pairs, features)
    return _loss_and_grads(model.params, values, pos, neg,
                           model.config.margin, model.config.aux_weight)


def train(config: ModelConfig, pairs: list[TrainingPair],
          features: dict[str, ChartFeatureTable],
          ) -> tuple[PerceptionModel, list[float]]:
    """Full-batch gradient descent; deterministic for a given seed."""
    values, pos, neg = assemble_training_arrays(pairs, features)
    if len(pos) == 0:
        raise EmptyPairSet("training requires at least one positive pair")
    model = PerceptionModel.initialize(config)
    losses: list[float] = []
    for epoch in range(config.epochs):
        loss, grads = _loss_and_grads(model.params, values, pos, neg,
                                      config.margin, config.aux_weight)
        if not np.isfinite(loss):
            raise NonFiniteLoss(epoch)
        losses.append(loss)
        for name in PARAM_ORDER:
            model.params[name] = model.params[name] - config.learning_rate * grads[name]
    return model, losses


_CONFIG_STRUCT = struct.Struct("<IIIIIq ddd".replace(" ", ""))


def save_model(model: PerceptionModel, path: str | Path) -> None:
    config = model.config
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<I", FORMAT_VERSION)
    blob += _CONFIG_STRUCT.pack(
        config.input_dim, config.hidden_dim, config.embed_dim,
        config.n_subreps, config.epochs, config.seed,
        config.margin, config.aux_weight, config.learning_rate)
    for name in PARAM_ORDER:
        blob += np.ascontiguousarray(model.params[name], dtype="<f8").tobytes()
    Path(path).write_bytes(bytes(blob))


def load_model(path: str | Path) -> PerceptionModel:
    data = Path(path).read_bytes()
    if len(data) < len(MAGIC) + 4 or data[:4] != MAGIC:
        raise CorruptFile(f"{path}: not a model file")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"{path}: format version {version}, reader supports {FORMAT_VERSION}")
    offset = 8
    try:
        fields = _CONFIG_STRUCT.unpack_from(data, offset)
    except struct.error as exc:
        raise CorruptFile(f"{path}: truncated config block") from exc
    offset += _CONFIG_STRUCT.size
    config = ModelConfig(
        input_dim=fields[0], hidden_dim=fields[1], embed_dim=fields[2],
        n_subreps=fields[3], epochs=fields[4], seed=fields[5],
        margin=fields[6], aux_weight=fields[7], learning_rate=fields[8])
    params: dict[str, np.ndarray] = {}
    shapes = PerceptionModel._shapes(config)
    for name in PARAM_ORDER:
        shape = shapes[name]
        count = int(np.prod(shape))
        end = offset + count * 8
        if end > len(data):
            raise CorruptFile(f"{path}: truncated parameter array {name}")
        params[name] = np.frombuffer(data[offset:end], dtype="<f8").reshape(shape).copy()
        offset = end
    if offset != len(data):
        raise CorruptFile(f"{path}: {len(data) - offset} trailing bytes")
    return PerceptionModel(config=config, params=params)
