import json

import numpy as np
import pytest

from attnlens.cli import CONFIG_FILE, MERGES_FILE, VOCAB_FILE, WEIGHTS_FILE
from attnlens.model import ModelConfig, load_model, required_tensor_shapes
from attnlens.tensorio import write_tensors
from attnlens.tokenizer import byte_to_unicode, load_vocab

# merges for the toy vocab; ranks follow list order
TOY_MERGES = [
    ("t", "o"),
    ("to", "k"),
    ("h", "e"),
    ("l", "l"),
    ("he", "ll"),
    ("hell", "o"),
    ("e", "n"),
    ("i", "z"),
    ("iz", "i"),
    ("n", "g"),
    ("izi", "ng"),
    ("Ġ", "w"),
    ("o", "r"),
    ("Ġw", "or"),
    ("Ġwor", "l"),
    ("Ġworl", "d"),
]


def build_toy_vocab_files(dirpath):
    """Byte-level vocab: specials, all 256 byte tokens, merge products."""
    tokens = ["<s>", "</s>", "<pad>", "<unk>"]
    tokens += [byte_to_unicode()[b] for b in range(256)]
    for left, right in TOY_MERGES:
        tokens.append(left + right)
    vocab = {tok: i for i, tok in enumerate(tokens)}
    (dirpath / VOCAB_FILE).write_text(json.dumps(vocab), encoding="utf-8")
    lines = ["# toy merges"] + [f"{l} {r}" for l, r in TOY_MERGES]
    (dirpath / MERGES_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return vocab


def build_tiny_model_files(dirpath, vocab_size, seed=0):
    cfg = dict(
        num_layers=2,
        num_heads=2,
        hidden_size=16,
        ffn_size=32,
        vocab_size=vocab_size,
        max_positions=512,
        layer_norm_eps=1e-5,
        bos_id=0,
        eos_id=1,
        pad_id=2,
        model_id="tiny-fixture",
    )
    (dirpath / CONFIG_FILE).write_text(json.dumps(cfg), encoding="utf-8")
    rng = np.random.default_rng(seed)
    shapes = required_tensor_shapes(ModelConfig(**cfg))
    tensors = {
        name: rng.normal(0.0, 0.5, size=shape).astype(np.float32)
        for name, shape in shapes.items()
    }
    # keep layer norms near identity so activations stay tame
    for name in shapes:
        if name.endswith("ln.gain"):
            tensors[name] = np.ones(shapes[name], dtype=np.float32)
        elif name.endswith("ln.bias"):
            tensors[name] = np.zeros(shapes[name], dtype=np.float32)
    write_tensors(dirpath / WEIGHTS_FILE, tensors)
    return cfg


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("model")
    vocab = build_toy_vocab_files(d)
    build_tiny_model_files(d, vocab_size=len(vocab))
    return d


@pytest.fixture(scope="session")
def vocab(model_dir):
    return load_vocab(model_dir / VOCAB_FILE, model_dir / MERGES_FILE)


@pytest.fixture(scope="session")
def model(model_dir):
    return load_model(model_dir / WEIGHTS_FILE, model_dir / CONFIG_FILE)
