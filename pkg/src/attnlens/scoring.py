"""Token-to-word importance scoring.

Pipeline: reduce the [L,H,N,N] attention stack to one N x N matrix
(mean over the selected layers/heads), take the column mean as each
token's received-attention score, lift token scores to words by max,
flag filtered words, then min-max normalize over the surviving words.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    AllWordsFiltered,
    NotRowStochastic,
    SelectorError,
    ShapeError,
)
from .model import AttentionStack, EncoderModel, forward
from .stopwords import ENGLISH_STOPWORDS
from .tokenizer import BpeVocab, TokenizedText, encode

SCORE_AXIS = "received"  # the only defined value of the score-axis enum

ROW_SUM_TOL = 1e-3


@dataclass(frozen=True)
class HeadSelector:
    layer: int | None = None
    head: int | None = None

    def __post_init__(self):
        if self.head is not None and self.layer is None:
            raise SelectorError("head selection requires a layer")

    def validate(self, num_layers: int, num_heads: int) -> None:
        if self.layer is not None and not 0 <= self.layer < num_layers:
            raise SelectorError(f"layer {self.layer} outside [0, {num_layers})")
        if self.head is not None and not 0 <= self.head < num_heads:
            raise SelectorError(f"head {self.head} outside [0, {num_heads})")


@dataclass(frozen=True)
class FilterConfig:
    exclude_special: bool = False
    exclude_punctuation: bool = False
    punctuation_set: frozenset[str] = frozenset({"."})
    exclude_stopwords: bool = False
    stopword_list: frozenset[str] = ENGLISH_STOPWORDS
    extra_stopwords: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.exclude_punctuation and not self.punctuation_set:
            raise ValueError("punctuation filter enabled with an empty set")
        if self.exclude_stopwords and not (self.stopword_list | self.extra_stopwords):
            raise ValueError("stopword filter enabled with an empty list")


@dataclass(frozen=True)
class WordScore:
    word: str
    byte_span: tuple[int, int]
    token_count: int
    raw_score: float
    norm_score: float | None = None
    filtered: bool = False
    is_special: bool = False


@dataclass(frozen=True)
class WordScoreReport:
    entries: tuple[WordScore, ...]
    selector: HeadSelector = HeadSelector()
    filter_config: FilterConfig = FilterConfig()
    model_id: str = ""
    text: str = ""  # analyzed text, kept so renderers can restore whitespace


def reduce_stack(stack: AttentionStack, sel: HeadSelector) -> np.ndarray:
    """Mean attention matrix over the selected layer/head slice."""
    sel.validate(stack.num_layers, stack.num_heads)
    v = stack.values
    if sel.layer is None:
        return v.mean(axis=(0, 1))
    if sel.head is None:
        return v[sel.layer].mean(axis=0)
    return v[sel.layer, sel.head].copy()


def token_scores(matrix: np.ndarray) -> np.ndarray:
    """Mean attention received by each token across all query positions."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError("attention matrix", ("N", "N"), matrix.shape)
    if np.max(np.abs(matrix.sum(axis=1) - 1.0)) > ROW_SUM_TOL:
        raise NotRowStochastic("matrix rows do not sum to 1")
    return matrix.mean(axis=0)


def word_scores(scores: np.ndarray, tok: TokenizedText) -> WordScoreReport:
    """Lift token scores to words: each word takes its best token's score."""
    scores = np.asarray(scores, dtype=np.float64)
    if len(scores) != len(tok.ids):
        raise ShapeError("token scores", (len(tok.ids),), scores.shape)

    entries: list[WordScore] = []
    word_idx = np.asarray(tok.word_index)
    # leading specials (BOS) first, then words in order, then trailing specials
    for pos in range(len(tok.ids)):
        if word_idx[pos] >= 0:
            break
        entries.append(_special_entry(tok, pos, scores[pos]))
    for w, word in enumerate(tok.words):
        mask = word_idx == w
        entries.append(
            WordScore(
                word=word.text,
                byte_span=(word.start, word.end),
                token_count=int(mask.sum()),
                raw_score=float(scores[mask].max()),
            )
        )
    for pos in range(len(tok.ids)):
        if word_idx[pos] < 0 and (word_idx[:pos] >= 0).any():
            entries.append(_special_entry(tok, pos, scores[pos]))
    return WordScoreReport(entries=tuple(entries), text=tok.text)


def _special_entry(tok: TokenizedText, pos: int, score: float) -> WordScore:
    return WordScore(
        word=tok.tokens[pos],
        byte_span=tok.spans[pos],
        token_count=1,
        raw_score=float(score),
        is_special=True,
    )


def apply_filters(report: WordScoreReport, cfg: FilterConfig) -> WordScoreReport:
    """Flag excluded entries; raw scores and ordering are untouched."""
    stop = cfg.stopword_list | cfg.extra_stopwords
    entries = []
    for e in report.entries:
        lowered = e.word.lower()
        flagged = (
            (e.is_special and cfg.exclude_special)
            or (cfg.exclude_punctuation and lowered in cfg.punctuation_set)
            or (cfg.exclude_stopwords and lowered in stop)
        )
        entries.append(replace(e, filtered=e.filtered or flagged, norm_score=None))
    return replace(report, entries=tuple(entries), filter_config=cfg)


def normalize(report: WordScoreReport) -> WordScoreReport:
    """Min-max rescale the unfiltered raw scores onto [0, 1]."""
    raws = [e.raw_score for e in report.entries if not e.filtered]
    if not raws:
        raise AllWordsFiltered("no unfiltered words remain")
    lo, hi = min(raws), max(raws)
    span = hi - lo
    entries = []
    for e in report.entries:
        if e.filtered:
            entries.append(replace(e, norm_score=None))
        elif span == 0.0:
            entries.append(replace(e, norm_score=1.0))
        else:
            entries.append(replace(e, norm_score=(e.raw_score - lo) / span))
    return replace(report, entries=tuple(entries))


def analyze(
    text: str,
    model: EncoderModel,
    vocab: BpeVocab,
    sel: HeadSelector = HeadSelector(),
    cfg: FilterConfig = FilterConfig(),
    backend: str | None = None,
) -> WordScoreReport:
    """Full pipeline from raw text to a normalized word-score report."""
    tok = encode(vocab, text, model.config.max_positions)
    stack = forward(model, tok.ids, backend=backend)
    return analyze_stack(tok, stack, sel, cfg, model_id=model.config.model_id)


def analyze_stack(
    tok: TokenizedText,
    stack: AttentionStack,
    sel: HeadSelector = HeadSelector(),
    cfg: FilterConfig = FilterConfig(),
    model_id: str = "",
) -> WordScoreReport:
    """Scoring pipeline for an already-computed attention stack."""
    matrix = reduce_stack(stack, sel)
    report = word_scores(token_scores(matrix), tok)
    report = normalize(apply_filters(report, cfg))
    return replace(report, selector=sel, model_id=model_id)
