"""Byte-level BPE tokenizer with word-boundary alignment.

Words are maximal runs of non-whitespace bytes. The whitespace separating
two words is folded into the first token of the following word (byte-level
BPE convention), but token spans are clamped so that the union of a word's
token spans equals the word's display span.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import EmptyInput, InconsistentVocab, ParseError, UnknownToken

_WHITESPACE = frozenset(b" \t\n\r\x0b\x0c")

# the conventional special-token spelling of byte-level BPE encoder vocabs
_SPECIAL_NAMES = {"bos": "<s>", "eos": "</s>", "pad": "<pad>", "unk": "<unk>"}


def byte_to_unicode() -> dict[int, str]:
    """Bijective map of the 256 byte values onto printable unicode chars."""
    printable = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(0xA1, 0xAD))
        + list(range(0xAE, 0x100))
    )
    chars = printable[:]
    n = 0
    for b in range(256):
        if b not in printable:
            printable.append(b)
            chars.append(0x100 + n)
            n += 1
    return dict(zip(printable, (chr(c) for c in chars)))


@dataclass(frozen=True)
class BpeVocab:
    token_to_id: dict[str, int]
    merges: list[tuple[str, str]]
    special_tokens: dict[str, tuple[str, int]]
    byte_encoder: dict[int, str] = field(default_factory=byte_to_unicode)

    def __post_init__(self):
        object.__setattr__(
            self, "id_to_token", {i: t for t, i in self.token_to_id.items()}
        )
        object.__setattr__(
            self, "merge_ranks", {pair: r for r, pair in enumerate(self.merges)}
        )
        object.__setattr__(
            self, "byte_decoder", {c: b for b, c in self.byte_encoder.items()}
        )

    def __len__(self):
        return len(self.token_to_id)

    @property
    def bos_id(self) -> int:
        return self._special_id("bos")

    @property
    def eos_id(self) -> int:
        return self._special_id("eos")

    def _special_id(self, role: str) -> int:
        if role not in self.special_tokens:
            raise InconsistentVocab(f"vocab has no {role!r} special token")
        return self.special_tokens[role][1]

    def special_ids(self) -> set[int]:
        return {tid for _, tid in self.special_tokens.values()}


@dataclass(frozen=True)
class Word:
    text: str
    start: int  # byte offset into the original text
    end: int


@dataclass(frozen=True)
class TokenizedText:
    ids: list[int]
    tokens: list[str]
    spans: list[tuple[int, int]]
    word_index: list[int]  # -1 for special tokens
    words: list[Word]
    text: str

    def __len__(self):
        return len(self.ids)


def _read_text(source) -> str:
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    with open(source, "r", encoding="utf-8") as fh:
        return fh.read()


def load_vocab(vocab_source, merges_source) -> BpeVocab:
    """Load a token->id JSON map and a ranked merges file."""
    try:
        token_to_id = json.loads(_read_text(vocab_source))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"vocab is not valid JSON: {exc}") from exc
    if not isinstance(token_to_id, dict) or not all(
        isinstance(v, int) for v in token_to_id.values()
    ):
        raise ParseError("vocab must be a JSON object mapping token -> integer id")

    ids = sorted(token_to_id.values())
    if len(set(ids)) != len(ids):
        raise InconsistentVocab("duplicate token id")
    if ids and (ids[0] != 0 or ids[-1] != len(ids) - 1):
        raise InconsistentVocab("token ids are not dense in [0, vocab size)")

    merges: list[tuple[str, str]] = []
    for lineno, line in enumerate(_read_text(merges_source).splitlines()):
        if lineno == 0 and line.startswith("#"):
            continue
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"merges line {lineno + 1}: expected two tokens")
        left, right = parts
        if left + right not in token_to_id:
            raise InconsistentVocab(
                f"merge ({left!r}, {right!r}) concatenates to a token not in vocab"
            )
        merges.append((left, right))

    specials = {
        role: (tok, token_to_id[tok])
        for role, tok in _SPECIAL_NAMES.items()
        if tok in token_to_id
    }
    return BpeVocab(token_to_id=token_to_id, merges=merges, special_tokens=specials)


def _bpe(vocab: BpeVocab, symbols: list[str], lengths: list[int]):
    """Greedy lowest-rank merge loop over one word chunk.

    lengths tracks how many source bytes each symbol covers so token
    spans survive merging.
    """
    ranks = vocab.merge_ranks
    while len(symbols) > 1:
        best_rank = None
        for i in range(len(symbols) - 1):
            r = ranks.get((symbols[i], symbols[i + 1]))
            if r is not None and (best_rank is None or r < best_rank):
                best_rank = r
        if best_rank is None:
            break
        left, right = vocab.merges[best_rank]
        merged_syms, merged_lens = [], []
        i = 0
        while i < len(symbols):
            if (
                i < len(symbols) - 1
                and symbols[i] == left
                and symbols[i + 1] == right
            ):
                merged_syms.append(left + right)
                merged_lens.append(lengths[i] + lengths[i + 1])
                i += 2
            else:
                merged_syms.append(symbols[i])
                merged_lens.append(lengths[i])
                i += 1
        symbols, lengths = merged_syms, merged_lens
    return symbols, lengths


def encode(vocab: BpeVocab, text: str, max_len: int) -> TokenizedText:
    """Tokenize text with BOS/EOS framing, truncated to max_len tokens."""
    raw = text.encode("utf-8")
    lead = 0
    while lead < len(raw) and raw[lead] in _WHITESPACE:
        lead += 1
    tail = len(raw)
    while tail > lead and raw[tail - 1] in _WHITESPACE:
        tail -= 1
    if lead == tail:
        raise EmptyInput("text is empty after whitespace trimming")

    # word chunks: (chunk_start, word_start, word_end); chunk_start includes
    # the preceding whitespace for every word after the first
    chunks = []
    pos = lead
    while pos < tail:
        ws_start = pos
        while raw[pos] in _WHITESPACE:
            pos += 1
        word_start = pos
        while pos < tail and raw[pos] not in _WHITESPACE:
            pos += 1
        chunk_start = word_start if not chunks else ws_start
        chunks.append((chunk_start, word_start, pos))

    bos_tok, bos_id = vocab.special_tokens.get("bos", (None, None))
    eos_tok, eos_id = vocab.special_tokens.get("eos", (None, None))
    if bos_id is None or eos_id is None:
        raise InconsistentVocab("vocab lacks bos/eos special tokens")

    ids = [bos_id]
    tokens = [bos_tok]
    spans: list[tuple[int, int]] = [(lead, lead)]
    word_index = [-1]
    words: list[Word] = []

    enc = vocab.byte_encoder
    for w, (chunk_start, word_start, word_end) in enumerate(chunks):
        chunk = raw[chunk_start:word_end]
        symbols = [enc[b] for b in chunk]
        symbols, lengths = _bpe(vocab, symbols, [1] * len(chunk))
        offset = chunk_start
        for sym, length in zip(symbols, lengths):
            tid = vocab.token_to_id.get(sym)
            if tid is None:
                raise UnknownToken(f"symbol {sym!r} not in vocab")
            ids.append(tid)
            tokens.append(sym)
            # clamp leading whitespace out of the display span
            spans.append((max(offset, word_start), max(offset + length, word_start)))
            word_index.append(w)
            offset += length
        words.append(
            Word(raw[word_start:word_end].decode("utf-8", "replace"), word_start, word_end)
        )

    ids.append(eos_id)
    tokens.append(eos_tok)
    spans.append((tail, tail))
    word_index.append(-1)

    if len(ids) > max_len:
        ids = ids[: max_len - 1] + [eos_id]
        tokens = tokens[: max_len - 1] + [eos_tok]
        word_index = word_index[: max_len - 1] + [-1]
        last_end = spans[max_len - 2][1]
        spans = spans[: max_len - 1] + [(last_end, last_end)]
        kept = max(wi for wi in word_index if wi >= 0)
        words = words[: kept + 1]
        # a word cut mid-token-sequence keeps only the covered bytes
        words[kept] = Word(
            raw[words[kept].start : last_end].decode("utf-8", "replace"),
            words[kept].start,
            last_end,
        )

    return TokenizedText(
        ids=ids,
        tokens=tokens,
        spans=spans,
        word_index=word_index,
        words=words,
        text=text,
    )


def decode(vocab: BpeVocab, ids: list[int]) -> str:
    """Inverse of encode on the non-special portion of the id sequence."""
    specials = vocab.special_ids()
    dec = vocab.byte_decoder
    out = bytearray()
    for tid in ids:
        if tid in specials:
            continue
        tok = vocab.id_to_token.get(tid)
        if tok is None:
            raise UnknownToken(f"id {tid} not in vocab")
        out.extend(dec[c] for c in tok)
    return out.decode("utf-8", errors="replace")
