"""Numba-jitted encoder forward pass.

Same contract and numerics as the numpy backend: float32 storage and
matmuls, float64 accumulation for softmax denominators and layer-norm
moments. First call pays JIT compilation cost.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _layer_norm_inplace(x, gain, bias, eps):
    n, d = x.shape
    for i in range(n):
        mean = 0.0
        for j in range(d):
            mean += x[i, j]
        mean /= d
        var = 0.0
        for j in range(d):
            diff = x[i, j] - mean
            var += diff * diff
        var /= d
        inv = 1.0 / math.sqrt(var + eps)
        for j in range(d):
            x[i, j] = np.float32((x[i, j] - mean) * inv) * gain[j] + bias[j]


@njit(cache=True)
def _softmax_rows_inplace(scores):
    n, m = scores.shape
    for i in range(n):
        row_max = scores[i, 0]
        for j in range(1, m):
            if scores[i, j] > row_max:
                row_max = scores[i, j]
        denom = 0.0
        for j in range(m):
            scores[i, j] = np.float32(math.exp(scores[i, j] - row_max))
            denom += scores[i, j]
        for j in range(m):
            scores[i, j] = np.float32(scores[i, j] / denom)


@njit(cache=True)
def forward_attention(
    x, qw, qb, kw, kb, vw, vb, ow, ob, ln1g, ln1b, fw1, fb1, fw2, fb2, ln2g, ln2b,
    n_heads, eps,
):
    L = qw.shape[0]
    N, d = x.shape
    dh = d // n_heads
    scale = np.float32(1.0 / math.sqrt(dh))
    attn = np.empty((L, n_heads, N, N), dtype=np.float32)
    x = x.copy()

    for l in range(L):
        q = x @ qw[l] + qb[l]
        k = x @ kw[l] + kb[l]
        v = x @ vw[l] + vb[l]
        ctx = np.empty((N, d), dtype=np.float32)
        for h in range(n_heads):
            lo = h * dh
            qh = np.ascontiguousarray(q[:, lo : lo + dh])
            kh = np.ascontiguousarray(k[:, lo : lo + dh])
            vh = np.ascontiguousarray(v[:, lo : lo + dh])
            scores = (qh @ kh.T) * scale
            _softmax_rows_inplace(scores)
            attn[l, h] = scores
            ctx[:, lo : lo + dh] = scores @ vh
        x = x + (ctx @ ow[l] + ob[l])
        _layer_norm_inplace(x, ln1g[l], ln1b[l], eps)
        hidden = x @ fw1[l] + fb1[l]
        for i in range(N):
            for j in range(hidden.shape[1]):
                hv = hidden[i, j]
                hidden[i, j] = np.float32(0.5 * hv * (1.0 + math.erf(hv / math.sqrt(2.0))))
        x = x + (hidden @ fw2[l] + fb2[l])
        _layer_norm_inplace(x, ln2g[l], ln2b[l], eps)

    return attn


def warmup():
    """Trigger JIT compilation on a 1-layer, 1-head toy problem."""
    d, f = 2, 4
    z = np.zeros((1, d), dtype=np.float32)
    w = np.zeros((1, d, d), dtype=np.float32)
    b = np.zeros((1, d), dtype=np.float32)
    w1 = np.zeros((1, d, f), dtype=np.float32)
    b1 = np.zeros((1, f), dtype=np.float32)
    w2 = np.zeros((1, f, d), dtype=np.float32)
    forward_attention(z, w, b, w, b, w, b, w, b, b, b, w1, b1, w2, b, b, b, 1, 1e-5)
