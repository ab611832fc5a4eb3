"""Encoder-only transformer runtime.

Loads weights from the binary tensor container, validates shapes against
the config, and runs an inference-only forward pass that records the full
per-layer, per-head attention tensor. Post-LN architecture with erf-form
GELU; attention is captured after softmax, dropout disabled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    CorruptTensor,
    MissingTensor,
    ParseError,
    SequenceTooLong,
    ShapeError,
    TokenIdOutOfRange,
)
from .tensorio import read_tensors


@dataclass(frozen=True)
class ModelConfig:
    num_layers: int
    num_heads: int
    hidden_size: int
    ffn_size: int
    vocab_size: int
    max_positions: int
    layer_norm_eps: float
    bos_id: int
    eos_id: int
    pad_id: int
    model_id: str = "encoder"

    def __post_init__(self):
        if self.hidden_size % self.num_heads != 0:
            raise ValueError("hidden_size must be divisible by num_heads")
        if self.max_positions < 2:
            raise ValueError("max_positions must be at least 2")
        for name in ("bos_id", "eos_id", "pad_id"):
            if not 0 <= getattr(self, name) < self.vocab_size:
                raise ValueError(f"{name} out of vocab range")

    @classmethod
    def from_json(cls, source) -> "ModelConfig":
        if hasattr(source, "read"):
            raw = source.read()
        else:
            with open(source, "r", encoding="utf-8") as fh:
                raw = fh.read()
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"model config is not valid JSON: {exc}") from exc
        fields = {
            "num_layers", "num_heads", "hidden_size", "ffn_size", "vocab_size",
            "max_positions", "layer_norm_eps", "bos_id", "eos_id", "pad_id",
            "model_id",
        }
        unknown = set(data) - fields
        if unknown:
            raise ParseError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


def required_tensor_shapes(cfg: ModelConfig) -> dict[str, tuple[int, ...]]:
    d, f = cfg.hidden_size, cfg.ffn_size
    shapes = {
        "token_embeddings": (cfg.vocab_size, d),
        "position_embeddings": (cfg.max_positions, d),
        "embed_ln.gain": (d,),
        "embed_ln.bias": (d,),
    }
    for i in range(cfg.num_layers):
        p = f"layers.{i}."
        for proj in ("q", "k", "v", "out"):
            shapes[p + f"attn.{proj}.weight"] = (d, d)
            shapes[p + f"attn.{proj}.bias"] = (d,)
        shapes[p + "attn_ln.gain"] = (d,)
        shapes[p + "attn_ln.bias"] = (d,)
        shapes[p + "ffn.w1.weight"] = (d, f)
        shapes[p + "ffn.w1.bias"] = (f,)
        shapes[p + "ffn.w2.weight"] = (f, d)
        shapes[p + "ffn.w2.bias"] = (d,)
        shapes[p + "ffn_ln.gain"] = (d,)
        shapes[p + "ffn_ln.bias"] = (d,)
    return shapes


@dataclass(frozen=True)
class AttentionStack:
    values: np.ndarray  # [L, H, N, N] float32, row-stochastic

    @property
    def num_layers(self) -> int:
        return self.values.shape[0]

    @property
    def num_heads(self) -> int:
        return self.values.shape[1]

    @property
    def seq_len(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class EncoderModel:
    config: ModelConfig
    tensors: dict[str, np.ndarray]
    _stacked: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        # stack per-layer weights into [L, ...] arrays once, for the kernels
        L = self.config.num_layers
        t = self.tensors

        def stack(fmt):
            return np.ascontiguousarray(
                np.stack([t[fmt.format(i)] for i in range(L)]), dtype=np.float32
            )

        s = {
            "qw": stack("layers.{}.attn.q.weight"),
            "qb": stack("layers.{}.attn.q.bias"),
            "kw": stack("layers.{}.attn.k.weight"),
            "kb": stack("layers.{}.attn.k.bias"),
            "vw": stack("layers.{}.attn.v.weight"),
            "vb": stack("layers.{}.attn.v.bias"),
            "ow": stack("layers.{}.attn.out.weight"),
            "ob": stack("layers.{}.attn.out.bias"),
            "ln1g": stack("layers.{}.attn_ln.gain"),
            "ln1b": stack("layers.{}.attn_ln.bias"),
            "fw1": stack("layers.{}.ffn.w1.weight"),
            "fb1": stack("layers.{}.ffn.w1.bias"),
            "fw2": stack("layers.{}.ffn.w2.weight"),
            "fb2": stack("layers.{}.ffn.w2.bias"),
            "ln2g": stack("layers.{}.ffn_ln.gain"),
            "ln2b": stack("layers.{}.ffn_ln.bias"),
        }
        self._stacked.update(s)


def load_model(container_source, config_source) -> EncoderModel:
    """Load and shape-check an encoder model from container + config."""
    cfg = ModelConfig.from_json(config_source)
    tensors = read_tensors(container_source)
    for name, shape in required_tensor_shapes(cfg).items():
        if name not in tensors:
            raise MissingTensor(name)
        got = tensors[name].shape
        if tuple(got) != shape:
            raise ShapeError(name, shape, got)
        if not np.all(np.isfinite(tensors[name])):
            raise CorruptTensor(f"tensor {name!r} contains non-finite values")
    return EncoderModel(config=cfg, tensors=tensors)


def _embed(model: EncoderModel, ids: np.ndarray) -> np.ndarray:
    t = model.tensors
    x = t["token_embeddings"][ids] + t["position_embeddings"][: len(ids)]
    x64 = x.astype(np.float64)
    mean = x64.mean(axis=-1, keepdims=True)
    var = x64.var(axis=-1, keepdims=True)
    normed = ((x64 - mean) / np.sqrt(var + model.config.layer_norm_eps)).astype(
        np.float32
    )
    return np.ascontiguousarray(normed * t["embed_ln.gain"] + t["embed_ln.bias"])


def forward(model: EncoderModel, ids, backend: str | None = None) -> AttentionStack:
    """Full forward pass; only the attention tensor is exported."""
    cfg = model.config
    ids = np.asarray(list(ids), dtype=np.int64)
    if ids.size < 1 or ids.size > cfg.max_positions:
        raise SequenceTooLong(
            f"sequence length {ids.size} outside [1, {cfg.max_positions}]"
        )
    if np.any(ids < 0) or np.any(ids >= cfg.vocab_size):
        raise TokenIdOutOfRange("token id outside vocab range")

    x = _embed(model, ids)
    s = model._stacked
    run = kernels.get_forward(backend)
    values = run(
        x,
        s["qw"], s["qb"], s["kw"], s["kb"], s["vw"], s["vb"], s["ow"], s["ob"],
        s["ln1g"], s["ln1b"], s["fw1"], s["fb1"], s["fw2"], s["fb2"],
        s["ln2g"], s["ln2b"],
        cfg.num_heads, cfg.layer_norm_eps,
    )
    return AttentionStack(values=values)
