"""Binary tensor container and attention dump formats.

Container layout: 8-byte ASCII magic, little-endian u64 header length,
UTF-8 JSON header, raw little-endian f32 payload. Offsets in the header
are relative to the payload start.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .errors import CorruptTensor, FormatError, InvalidAttention
from .tokenizer import TokenizedText, Word

CONTAINER_MAGIC = b"ATTNTNSR"
DUMP_MAGIC = b"ATTNDUMP"

ROW_SUM_TOL = 1e-3


def _read_header(data: bytes, magic: bytes):
    if data[:8] != magic:
        raise FormatError(f"bad magic: expected {magic!r}, got {data[:8]!r}")
    if len(data) < 16:
        raise FormatError("file truncated before header length")
    (hlen,) = struct.unpack("<Q", data[8:16])
    if 16 + hlen > len(data):
        raise FormatError("header length exceeds file size")
    try:
        header = json.loads(data[16 : 16 + hlen].decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"header is not valid JSON: {exc}") from exc
    return header, data[16 + hlen :]


def _frame(magic: bytes, header: dict, payload: bytes) -> bytes:
    hdr = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return magic + struct.pack("<Q", len(hdr)) + hdr + payload


def write_tensors(path, tensors: dict[str, np.ndarray]) -> None:
    header = {}
    chunks = []
    offset = 0
    for name, arr in tensors.items():
        raw = np.ascontiguousarray(arr, dtype="<f4").tobytes()
        header[name] = {
            "dtype": "f32",
            "shape": list(arr.shape),
            "offset": offset,
            "length": len(raw),
        }
        chunks.append(raw)
        offset += len(raw)
    with open(path, "wb") as fh:
        fh.write(_frame(CONTAINER_MAGIC, header, b"".join(chunks)))


def read_tensors(source) -> dict[str, np.ndarray]:
    data = _read_bytes(source)
    header, payload = _read_header(data, CONTAINER_MAGIC)
    tensors = {}
    for name, meta in header.items():
        if meta.get("dtype") != "f32":
            raise FormatError(f"tensor {name!r}: unsupported dtype {meta.get('dtype')!r}")
        shape = tuple(meta["shape"])
        off, length = meta["offset"], meta["length"]
        expected = 4 * int(np.prod(shape, dtype=np.int64)) if shape else 4
        if length != expected or off < 0 or off + length > len(payload):
            raise FormatError(f"tensor {name!r}: bad offset/length")
        arr = np.frombuffer(payload, dtype="<f4", count=length // 4, offset=off)
        arr = arr.reshape(shape).astype(np.float32)
        if not np.all(np.isfinite(arr)):
            raise CorruptTensor(f"tensor {name!r} contains non-finite values")
        tensors[name] = arr
    return tensors


def _read_bytes(source) -> bytes:
    if hasattr(source, "read"):
        return source.read()
    with open(source, "rb") as fh:
        return fh.read()


def write_attention_dump(path, tok: TokenizedText, values: np.ndarray) -> None:
    """Write one text's tokens, word map, and [L,H,N,N] attention stack."""
    L, H, N, N2 = values.shape
    assert N == N2 and N == len(tok.ids)
    header = {
        "l": L,
        "h": H,
        "n": N,
        "tokens": list(tok.tokens),
        "word_index": list(tok.word_index),
        "words": [{"text": w.text, "start": w.start, "end": w.end} for w in tok.words],
        "text": tok.text,
    }
    payload = np.ascontiguousarray(values, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(_frame(DUMP_MAGIC, header, payload))


def read_attention_dump(source):
    """Read a dump, returning (token/word metadata, stack values).

    Token ids are not stored; the metadata carries enough for scoring and
    rendering without re-tokenization (ids are filled with -1).
    """
    data = _read_bytes(source)
    header, payload = _read_header(data, DUMP_MAGIC)
    try:
        L, H, N = int(header["l"]), int(header["h"]), int(header["n"])
        tokens = list(header["tokens"])
        word_index = [int(i) for i in header["word_index"]]
        words = [Word(w["text"], int(w["start"]), int(w["end"])) for w in header["words"]]
        text = header["text"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed dump header: {exc}") from exc
    if len(tokens) != N or len(word_index) != N:
        raise FormatError("header N disagrees with token metadata length")
    if len(payload) != 4 * L * H * N * N:
        raise FormatError("payload size disagrees with header dimensions")
    values = (
        np.frombuffer(payload, dtype="<f4").reshape(L, H, N, N).astype(np.float32)
    )
    if not np.all(np.isfinite(values)):
        raise InvalidAttention("non-finite attention values")
    row_sums = values.sum(axis=-1)
    if np.max(np.abs(row_sums - 1.0)) > ROW_SUM_TOL:
        raise InvalidAttention("attention rows do not sum to 1")
    tok = TokenizedText(
        ids=[-1] * N,
        tokens=tokens,
        spans=[(0, 0)] * N,
        word_index=word_index,
        words=words,
        text=text,
    )
    return tok, values
