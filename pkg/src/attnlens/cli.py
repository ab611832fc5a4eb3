"""Command-line interface: analyze, inspect-heads, dump-attention, serve.

Exit codes: 0 success, 2 input/usage errors, 3 when every word was
filtered out.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import tensorio
from .errors import AllWordsFiltered, AttnLensError
from .model import EncoderModel, forward, load_model
from .render import RenderOptions, render
from .sample import SAMPLE_TEXT
from .scoring import FilterConfig, HeadSelector, analyze, analyze_stack
from .tokenizer import BpeVocab, encode, load_vocab

EXIT_INPUT_ERROR = 2
EXIT_ALL_FILTERED = 3

CONFIG_FILE = "config.json"
WEIGHTS_FILE = "weights.bin"
VOCAB_FILE = "vocab.json"
MERGES_FILE = "merges.txt"


def load_model_dir(model_dir: str) -> tuple[EncoderModel, BpeVocab]:
    d = Path(model_dir)
    for name in (CONFIG_FILE, WEIGHTS_FILE, VOCAB_FILE, MERGES_FILE):
        if not (d / name).is_file():
            raise FileNotFoundError(f"model dir is missing {name}: {d / name}")
    model = load_model(d / WEIGHTS_FILE, d / CONFIG_FILE)
    vocab = load_vocab(d / VOCAB_FILE, d / MERGES_FILE)
    return model, vocab


def _add_filter_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument(
        "--no-special",
        dest="exclude_special",
        action="store_true",
        default=True,
        help="exclude BOS/EOS pseudo-words (default)",
    )
    g.add_argument(
        "--keep-special",
        dest="exclude_special",
        action="store_false",
        help="keep BOS/EOS pseudo-words in the heatmap",
    )
    p.add_argument("--filter-punct", action="store_true", help="exclude '.' words")
    p.add_argument(
        "--filter-stopwords", action="store_true", help="exclude English stop words"
    )


def _filters(args) -> FilterConfig:
    return FilterConfig(
        exclude_special=args.exclude_special,
        exclude_punctuation=args.filter_punct,
        exclude_stopwords=args.filter_stopwords,
    )


def _read_input_text(args) -> str:
    if args.text is not None:
        return args.text
    return Path(args.file).read_text(encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attnlens",
        description="Word-importance heatmaps from encoder self-attention.",
    )
    parser.add_argument(
        "--model-dir",
        default=os.environ.get("ATTNLENS_MODEL_DIR"),
        help="directory with config.json, weights.bin, vocab.json, merges.txt",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="score one text and render a heatmap")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text", help="input text")
    src.add_argument("--file", help="read input text from a file")
    p.add_argument("--layer", type=int, default=None)
    p.add_argument("--head", type=int, default=None)
    _add_filter_flags(p)
    p.add_argument("--format", choices=("json", "html", "ansi"), default="json")
    p.add_argument("--out", help="write output to a file instead of stdout")

    p = sub.add_parser(
        "inspect-heads", help="render every head of one layer side by side"
    )
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="read input text from a file")
    src.add_argument("--text", help="input text")
    src.add_argument("--dump", help="read a pre-computed attention dump instead")
    p.add_argument("--layer", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    _add_filter_flags(p)

    p = sub.add_parser("dump-attention", help="write the attention dump for a text")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text", help="input text")
    src.add_argument("--file", help="read input text from a file")
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument(
        "--port", type=int, default=int(os.environ.get("ATTNLENS_PORT", "7860"))
    )
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui-dir", default=None, help="static UI assets to serve at /")
    p.add_argument("--text-cap", type=int, default=32 * 1024)

    return parser


def _require_model(args) -> tuple[EncoderModel, BpeVocab]:
    if not args.model_dir:
        raise FileNotFoundError("--model-dir (or ATTNLENS_MODEL_DIR) is required")
    return load_model_dir(args.model_dir)


def cmd_analyze(args) -> int:
    model, vocab = _require_model(args)
    report = analyze(
        _read_input_text(args),
        model,
        vocab,
        HeadSelector(layer=args.layer, head=args.head),
        _filters(args),
    )
    output = render(report, RenderOptions(format=args.format))
    _write_output(output, args.out)
    return 0


def cmd_inspect_heads(args) -> int:
    if args.dump:
        tok, values = tensorio.read_attention_dump(args.dump)
        from .model import AttentionStack

        stack = AttentionStack(values=values)
        model_id = "dump"
    else:
        model, vocab = _require_model(args)
        tok = encode(vocab, _read_input_text(args), model.config.max_positions)
        stack = forward(model, tok.ids)
        model_id = model.config.model_id

    sel = HeadSelector(layer=args.layer)
    sel.validate(stack.num_layers, stack.num_heads)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for h in range(stack.num_heads):
        report = analyze_stack(
            tok, stack, HeadSelector(layer=args.layer, head=h), _filters(args),
            model_id=model_id,
        )
        name = f"head_{h:02d}.html"
        (out_dir / name).write_text(
            render(report, RenderOptions(format="html")), encoding="utf-8"
        )
        names.append(name)
    index = ["<!DOCTYPE html>", "<html><head><meta charset=\"utf-8\">",
             f"<title>Layer {args.layer} heads</title></head><body>",
             f"<h1>Layer {args.layer}: {stack.num_heads} heads</h1>", "<ul>"]
    index += [f'<li><a href="{n}">{n}</a></li>' for n in names]
    index += ["</ul></body></html>", ""]
    (out_dir / "index.html").write_text("\n".join(index), encoding="utf-8")
    return 0


def cmd_dump_attention(args) -> int:
    model, vocab = _require_model(args)
    tok = encode(vocab, _read_input_text(args), model.config.max_positions)
    stack = forward(model, tok.ids)
    tensorio.write_attention_dump(args.out, tok, stack.values)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    model, vocab = _require_model(args)
    app = create_app(
        model, vocab, SAMPLE_TEXT, text_cap=args.text_cap, ui_dir=args.ui_dir
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _write_output(output: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)


_COMMANDS = {
    "analyze": cmd_analyze,
    "inspect-heads": cmd_inspect_heads,
    "dump-attention": cmd_dump_attention,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except AllWordsFiltered as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALL_FILTERED
    except (AttnLensError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
