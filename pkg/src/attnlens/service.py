"""HTTP facade over the analysis pipeline.

One immutable (model, vocab, sample text) triple per process, loaded at
startup; request handling is stateless and safely concurrent. The analyze
response body is byte-identical to the CLI's canonical JSON output.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import AllWordsFiltered, AttnLensError, EmptyInput, SelectorError
from .model import EncoderModel
from .render import RenderOptions, render_json
from .scoring import FilterConfig, HeadSelector, analyze
from .tokenizer import BpeVocab

DEFAULT_TEXT_CAP = 32 * 1024


def parse_analyze_request(body: dict):
    """Validate the analyze payload into (text, selector, filter config)."""
    if not isinstance(body, dict):
        raise ValueError("request body must be a JSON object")
    text = body.get("text")
    if not isinstance(text, str):
        raise ValueError("'text' must be a string")
    layer = body.get("layer")
    head = body.get("head")
    for name, v in (("layer", layer), ("head", head)):
        if v is not None and not isinstance(v, int):
            raise ValueError(f"'{name}' must be an integer or null")
    filters = body.get("filters") or {}
    if not isinstance(filters, dict):
        raise ValueError("'filters' must be an object")
    extra = filters.get("extra_stopwords") or []
    if not isinstance(extra, list) or not all(isinstance(w, str) for w in extra):
        raise ValueError("'extra_stopwords' must be a list of strings")
    sel = HeadSelector(layer=layer, head=head)
    cfg = FilterConfig(
        exclude_special=bool(filters.get("special", False)),
        exclude_punctuation=bool(filters.get("punctuation", False)),
        exclude_stopwords=bool(filters.get("stopwords", False)),
        extra_stopwords=frozenset(w.lower() for w in extra),
    )
    return text, sel, cfg


def create_app(
    model: EncoderModel,
    vocab: BpeVocab,
    sample_text: str,
    text_cap: int = DEFAULT_TEXT_CAP,
    ui_dir: str | None = None,
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="attnlens", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    cfg = model.config

    @app.get("/api/health")
    def health():
        return Response(content="ok", media_type="text/plain")

    @app.get("/api/model")
    def model_info():
        return {
            "model_id": cfg.model_id,
            "layers": cfg.num_layers,
            "heads": cfg.num_heads,
            "max_positions": cfg.max_positions,
            "vocab_size": cfg.vocab_size,
        }

    @app.get("/api/sample")
    def sample():
        return {"text": sample_text}

    @app.post("/api/analyze")
    async def analyze_endpoint(request: Request):
        raw = await request.body()
        if len(raw) > text_cap + 4096:
            return _error(413, "request body exceeds the configured cap")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        try:
            text, sel, filter_cfg = parse_analyze_request(body)
        except (ValueError, SelectorError) as exc:
            return _error(400, str(exc))
        if len(text.encode("utf-8")) > text_cap:
            return _error(413, f"text exceeds the {text_cap}-byte cap")
        try:
            report = analyze(text, model, vocab, sel, filter_cfg)
        except AllWordsFiltered as exc:
            return _error(422, str(exc))
        except (EmptyInput, SelectorError) as exc:
            return _error(400, str(exc))
        except AttnLensError as exc:
            return _error(400, str(exc))
        return Response(
            content=render_json(report, RenderOptions("json")),
            media_type="application/json",
            headers={"X-Model-Id": cfg.model_id},
        )

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=Path(ui_dir), html=True), name="ui")

    return app


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})
