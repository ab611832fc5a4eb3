"""Render a word-score report as HTML, ANSI terminal text, or canonical JSON.

Color is a fixed red ramp: opacity tracks the min-max-normalized score
linearly, so the renderer itself stays trivial.
"""

from __future__ import annotations

import html
import json
import warnings
from dataclasses import dataclass

from .scoring import SCORE_AXIS, WordScoreReport


class ClampWarning(UserWarning):
    """A norm score fell outside [0, 1] and was clamped."""


@dataclass(frozen=True)
class RenderOptions:
    format: str = "json"  # html | ansi | json
    show_filtered: bool = True
    precision: int = 4

    def __post_init__(self):
        if self.format not in ("html", "ansi", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if not 1 <= self.precision <= 8:
            raise ValueError("precision must be in [1, 8]")


def color_for(norm_score: float | None) -> tuple[int, int, int, float]:
    """Red with alpha equal to the normalized score; None is transparent."""
    if norm_score is None:
        return (255, 0, 0, 0.0)
    if not 0.0 <= norm_score <= 1.0:
        warnings.warn(
            f"norm score {norm_score} outside [0, 1], clamping", ClampWarning
        )
        norm_score = min(max(norm_score, 0.0), 1.0)
    return (255, 0, 0, float(norm_score))


_HTML_HEAD = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Word importance heatmap</title>
<style>
body { font-family: Georgia, serif; max-width: 52em; margin: 2em auto; line-height: 1.9; }
.word { padding: 0.08em 0.12em; border-radius: 3px; cursor: default; }
.filtered { color: #888; }
.special { font-family: monospace; font-size: 0.85em; color: #888; }
</style>
</head>
<body>
<p>
"""

_HTML_TAIL = "</p>\n</body>\n</html>\n"


def render_html(report: WordScoreReport, opts: RenderOptions = RenderOptions("html")) -> str:
    """Standalone heatmap document with native hover tooltips."""
    raw_bytes = report.text.encode("utf-8")
    parts = [_HTML_HEAD]
    prev_end = None
    for e in report.entries:
        start, end = e.byte_span
        if prev_end is not None and start > prev_end:
            parts.append(html.escape(raw_bytes[prev_end:start].decode("utf-8", "replace")))
        prev_end = max(end, prev_end or 0)
        word = html.escape(e.word)
        if e.filtered:
            if opts.show_filtered:
                parts.append(f'<span class="word filtered">{word}</span>')
            continue
        r, g, b, a = color_for(e.norm_score)
        tip = (
            f"norm={e.norm_score:.{opts.precision}f} "
            f"raw={e.raw_score:.{opts.precision}f} tokens={e.token_count}"
        )
        cls = "word special" if e.is_special else "word"
        parts.append(
            f'<span class="{cls}" style="background-color: rgba({r}, {g}, {b}, {a:g})" '
            f'title="{tip}">{word}</span>'
        )
    parts.append("\n")
    parts.append(_HTML_TAIL)
    return "".join(parts)


# light-to-dark red background ramp in the 256-color cube
_ANSI_RAMP = (231, 224, 217, 210, 203, 196, 160, 124)
_RESET = "\x1b[0m"


def render_ansi(report: WordScoreReport, opts: RenderOptions = RenderOptions("ansi")) -> str:
    """Terminal heatmap: 8 background buckets of the normalized score."""
    out = []
    for e in report.entries:
        if e.filtered:
            if opts.show_filtered:
                out.append(f"\x1b[2m{e.word}{_RESET}")
            continue
        bucket = min(int(e.norm_score * 8), 7)
        out.append(f"\x1b[48;5;{_ANSI_RAMP[bucket]}m\x1b[38;5;16m{e.word}{_RESET}")
    return " ".join(out) + "\n"


def render_json(report: WordScoreReport, opts: RenderOptions = RenderOptions("json")) -> str:
    """Canonical machine format, shared with the HTTP service."""
    doc = {
        "model_id": report.model_id,
        "selector": {"layer": report.selector.layer, "head": report.selector.head},
        "filters": {
            "special": report.filter_config.exclude_special,
            "punctuation": report.filter_config.exclude_punctuation,
            "stopwords": report.filter_config.exclude_stopwords,
            "extra_stopwords": sorted(report.filter_config.extra_stopwords),
        },
        "score_axis": SCORE_AXIS,
        "words": [
            {
                "text": e.word,
                "start": e.byte_span[0],
                "end": e.byte_span[1],
                "token_count": e.token_count,
                "raw": e.raw_score,
                "norm": e.norm_score,
                "filtered": e.filtered,
                "special": e.is_special,
            }
            for e in report.entries
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def render(report: WordScoreReport, opts: RenderOptions) -> str:
    return {"html": render_html, "ansi": render_ansi, "json": render_json}[
        opts.format
    ](report, opts)
