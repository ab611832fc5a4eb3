"""Vectorized numpy encoder forward pass.

Arithmetic is float32 with float64 accumulation for softmax denominators
and layer-norm moments. Weights arrive stacked per layer so the numba
kernel can share the exact same signature.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf

_SQRT2 = np.float32(np.sqrt(2.0))


def _layer_norm(x, gain, bias, eps):
    x64 = x.astype(np.float64)
    mean = x64.mean(axis=-1, keepdims=True)
    var = x64.var(axis=-1, keepdims=True)
    normed = ((x64 - mean) / np.sqrt(var + eps)).astype(np.float32)
    return normed * gain + bias


def _gelu(x):
    return (0.5 * x * (1.0 + erf(x / _SQRT2))).astype(np.float32)


def _softmax_rows(scores):
    m = scores.max(axis=-1, keepdims=True)
    e = np.exp(scores - m, dtype=np.float32)
    denom = e.sum(axis=-1, keepdims=True, dtype=np.float64)
    return (e / denom).astype(np.float32)


def forward_attention(
    x, qw, qb, kw, kb, vw, vb, ow, ob, ln1g, ln1b, fw1, fb1, fw2, fb2, ln2g, ln2b,
    n_heads, eps,
):
    """Run the encoder stack, returning the [L,H,N,N] attention tensor."""
    L = qw.shape[0]
    N, d = x.shape
    dh = d // n_heads
    scale = np.float32(1.0 / np.sqrt(dh))
    attn = np.empty((L, n_heads, N, N), dtype=np.float32)

    for l in range(L):
        q = (x @ qw[l] + qb[l]).reshape(N, n_heads, dh).transpose(1, 0, 2)
        k = (x @ kw[l] + kb[l]).reshape(N, n_heads, dh).transpose(1, 0, 2)
        v = (x @ vw[l] + vb[l]).reshape(N, n_heads, dh).transpose(1, 0, 2)
        scores = (q @ k.transpose(0, 2, 1)) * scale
        probs = _softmax_rows(scores)
        attn[l] = probs
        ctx = (probs @ v).transpose(1, 0, 2).reshape(N, d)
        x = _layer_norm(x + (ctx @ ow[l] + ob[l]), ln1g[l], ln1b[l], eps)
        hidden = _gelu(x @ fw1[l] + fb1[l])
        x = _layer_norm(x + (hidden @ fw2[l] + fb2[l]), ln2g[l], ln2b[l], eps)

    return attn
