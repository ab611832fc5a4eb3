import numpy as np
import pytest

from attnlens.errors import CorruptTensor, FormatError, InvalidAttention
from attnlens.tensorio import (
    read_attention_dump,
    read_tensors,
    write_attention_dump,
    write_tensors,
)
from attnlens.tokenizer import encode


def test_container_round_trip(tmp_path):
    tensors = {
        "a": np.arange(12, dtype=np.float32).reshape(3, 4),
        "b": np.array([1.5], dtype=np.float32),
    }
    path = tmp_path / "t.bin"
    write_tensors(path, tensors)
    back = read_tensors(path)
    for name, arr in tensors.items():
        assert np.array_equal(back[name], arr)
        assert back[name].dtype == np.float32


def test_container_bad_magic(tmp_path):
    path = tmp_path / "t.bin"
    path.write_bytes(b"NOTMAGIC" + b"\x00" * 16)
    with pytest.raises(FormatError):
        read_tensors(path)


def test_container_non_finite(tmp_path):
    path = tmp_path / "t.bin"
    write_tensors(path, {"a": np.array([1.0, np.inf], dtype=np.float32)})
    with pytest.raises(CorruptTensor):
        read_tensors(path)


@pytest.fixture
def dumped(tmp_path, model, vocab):
    from attnlens.model import forward

    tok = encode(vocab, "hello world tok", model.config.max_positions)
    stack = forward(model, tok.ids)
    path = tmp_path / "d.attn"
    write_attention_dump(path, tok, stack.values)
    return tok, stack, path


def test_dump_round_trip_bitwise(dumped):
    tok, stack, path = dumped
    tok2, values = read_attention_dump(path)
    assert np.array_equal(values, stack.values)
    assert values.tobytes() == stack.values.tobytes()
    assert tok2.tokens == tok.tokens
    assert tok2.word_index == tok.word_index
    assert [w.text for w in tok2.words] == [w.text for w in tok.words]
    assert tok2.text == tok.text


def test_dump_scaled_row_rejected(dumped, tmp_path):
    tok, stack, _ = dumped
    values = stack.values.copy()
    values[0, 0, 1] *= 2.0
    bad = tmp_path / "bad.attn"
    write_attention_dump(bad, tok, values)
    with pytest.raises(InvalidAttention):
        read_attention_dump(bad)


def test_dump_header_token_count_mismatch(dumped, tmp_path):
    import dataclasses

    tok, stack, _ = dumped
    broken = dataclasses.replace(
        tok,
        tokens=tok.tokens[:-1],
        ids=tok.ids[:-1],
        spans=tok.spans[:-1],
        word_index=tok.word_index[:-1],
    )
    bad = tmp_path / "bad.attn"
    n = len(tok.ids)
    # write with header n but fewer token strings
    import json
    import struct

    header = {
        "l": stack.values.shape[0],
        "h": stack.values.shape[1],
        "n": n,
        "tokens": list(broken.tokens),
        "word_index": list(tok.word_index),
        "words": [],
        "text": tok.text,
    }
    hdr = json.dumps(header).encode()
    bad.write_bytes(
        b"ATTNDUMP" + struct.pack("<Q", len(hdr)) + hdr + stack.values.tobytes()
    )
    with pytest.raises(FormatError):
        read_attention_dump(bad)
