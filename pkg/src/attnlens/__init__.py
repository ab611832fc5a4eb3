"""Word-importance analysis and visualization for encoder-only transformers."""

from .model import AttentionStack, EncoderModel, ModelConfig, forward, load_model
from .render import RenderOptions, color_for, render_ansi, render_html, render_json
from .scoring import (
    FilterConfig,
    HeadSelector,
    WordScoreReport,
    analyze,
    analyze_stack,
    apply_filters,
    normalize,
    reduce_stack,
    token_scores,
    word_scores,
)
from .tokenizer import BpeVocab, TokenizedText, decode, encode, load_vocab

__version__ = "0.1.0"

__all__ = [
    "AttentionStack",
    "BpeVocab",
    "EncoderModel",
    "FilterConfig",
    "HeadSelector",
    "ModelConfig",
    "RenderOptions",
    "TokenizedText",
    "WordScoreReport",
    "analyze",
    "analyze_stack",
    "apply_filters",
    "color_for",
    "decode",
    "encode",
    "forward",
    "load_model",
    "load_vocab",
    "normalize",
    "reduce_stack",
    "render_ansi",
    "render_html",
    "render_json",
    "token_scores",
    "word_scores",
]
