"""Compiled inner loops for skip-gram training with negative sampling.

Randomness comes from a splitmix64 stream held in a one-element uint64
array, so a run is fully determined by its seed and worker layout.
"""
import math

import numba
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0
MIN_LR_FRACTION = 1e-4


@numba.njit(cache=True)
def _next_u64(state):
    z = state[0] + _GOLDEN
    state[0] = z
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@numba.njit(cache=True)
def _uniform(state):
    return float(_next_u64(state) >> _S11) * _INV53


@numba.njit(cache=True)
def _context_span(state, i, n, window):
    """Draw the effective window uniformly from 1..window; return the in-bounds span."""
    b = 1 + int(_uniform(state) * window)
    lo = i - b
    if lo < 0:
        lo = 0
    hi = i + b
    if hi > n - 1:
        hi = n - 1
    return lo, hi


@numba.njit(cache=True)
def _window_pairs(walk, window, state):
    n = len(walk)
    centers = np.empty(n * 2 * window, dtype=np.int64)
    contexts = np.empty(n * 2 * window, dtype=np.int64)
    m = 0
    for i in range(n):
        lo, hi = _context_span(state, i, n, window)
        for j in range(lo, hi + 1):
            if j != i:
                centers[m] = walk[i]
                contexts[m] = walk[j]
                m += 1
    return centers[:m], contexts[:m]


@numba.njit(cache=True)
def _sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@numba.njit(cache=True)
def _neg_log_sigmoid(x):
    # -log(sigmoid(x)) without overflow
    return max(-x, 0.0) + math.log1p(math.exp(-abs(x)))


@numba.njit(cache=True)
def _pair_loss_grad(h, u, label):
    s = 0.0
    for k in range(len(h)):
        s += h[k] * u[k]
    loss = _neg_log_sigmoid(s) if label == 1 else _neg_log_sigmoid(-s)
    coef = _sigmoid(s) - label
    return loss, coef * u, coef * h


@numba.njit(cache=True)
def _accumulate(h, target, label, lr, syn1, neu1e):
    """One logistic update of ``syn1[target]``; the input-side step is added to ``neu1e``."""
    dim = len(h)
    s = 0.0
    for k in range(dim):
        s += h[k] * syn1[target, k]
    loss = _neg_log_sigmoid(s) if label == 1 else _neg_log_sigmoid(-s)
    g = (label - _sigmoid(s)) * lr
    for k in range(dim):
        neu1e[k] += g * syn1[target, k]
        syn1[target, k] += g * h[k]
    return loss


@numba.njit(cache=True)
def _hidden(feat_ptr, feat_idx, center, syn0, h):
    h[:] = 0.0
    for f in range(feat_ptr[center], feat_ptr[center + 1]):
        row = feat_idx[f]
        for k in range(syn0.shape[1]):
            h[k] += syn0[row, k]


@numba.njit(cache=True)
def _apply(feat_ptr, feat_idx, center, syn0, neu1e):
    for f in range(feat_ptr[center], feat_ptr[center + 1]):
        row = feat_idx[f]
        for k in range(syn0.shape[1]):
            syn0[row, k] += neu1e[k]


@numba.njit(cache=True)
def _sgd_step(feat_ptr, feat_idx, center, target, label, lr, syn0, syn1):
    dim = syn0.shape[1]
    h = np.empty(dim)
    neu1e = np.zeros(dim)
    _hidden(feat_ptr, feat_idx, center, syn0, h)
    loss = _accumulate(h, target, label, lr, syn1, neu1e)
    _apply(feat_ptr, feat_idx, center, syn0, neu1e)
    return loss


@numba.njit(cache=True)
def _draw_noise(state, cum_noise):
    r = _uniform(state) * cum_noise[-1]
    idx = np.searchsorted(cum_noise, r, side="right")
    if idx >= len(cum_noise):
        idx = len(cum_noise) - 1
    return idx


@numba.njit(cache=True)
def _train_range(tokens, offsets, walk_lo, walk_hi, feat_ptr, feat_idx, syn0, syn1,
                 cum_noise, keep_prob, window, negatives, lr0, total_work, done_before,
                 progress_scale, state):
    """Train on walks ``walk_lo..walk_hi``; returns (loss, pairs, processed, finite)."""
    dim = syn0.shape[1]
    h = np.empty(dim)
    neu1e = np.empty(dim)
    buf = np.empty(offsets[-1] - offsets[0] + 1, dtype=np.int64)
    subsample = len(keep_prob) > 0
    loss_sum = 0.0
    pairs = 0
    processed = 0
    for w in range(walk_lo, walk_hi):
        start = offsets[w]
        stop = offsets[w + 1]
        n = 0
        for t in range(start, stop):
            tok = tokens[t]
            if subsample and keep_prob[tok] < 1.0 and _uniform(state) >= keep_prob[tok]:
                continue
            buf[n] = tok
            n += 1
        for i in range(n):
            progress = (done_before + processed * progress_scale) / total_work
            lr = lr0 * max(1.0 - progress, MIN_LR_FRACTION)
            center = buf[i]
            lo, hi = _context_span(state, i, n, window)
            for j in range(lo, hi + 1):
                if j == i:
                    continue
                ctx = buf[j]
                _hidden(feat_ptr, feat_idx, center, syn0, h)
                neu1e[:] = 0.0
                loss_sum += _accumulate(h, ctx, 1, lr, syn1, neu1e)
                for _ in range(negatives):
                    target = _draw_noise(state, cum_noise)
                    if target == ctx:
                        continue
                    loss_sum += _accumulate(h, target, 0, lr, syn1, neu1e)
                _apply(feat_ptr, feat_idx, center, syn0, neu1e)
                pairs += 1
                if not math.isfinite(loss_sum):
                    return loss_sum, pairs, processed, False
            processed += 1
        processed += (stop - start) - n
    return loss_sum, pairs, processed, True


@numba.njit(cache=True, parallel=True)
def _train_parallel(tokens, offsets, bounds, feat_ptr, feat_idx, syn0, syn1, cum_noise,
                    keep_prob, window, negatives, lr0, total_work, done_before, states):
    """Hogwild variant: chunks share ``syn0``/``syn1`` without locking."""
    n_chunks = len(bounds) - 1
    losses = np.zeros(n_chunks)
    pairs = np.zeros(n_chunks, dtype=np.int64)
    processed = np.zeros(n_chunks, dtype=np.int64)
    finite = np.ones(n_chunks, dtype=np.bool_)
    for c in numba.prange(n_chunks):
        loss, p, done, ok = _train_range(
            tokens, offsets, bounds[c], bounds[c + 1], feat_ptr, feat_idx, syn0, syn1,
            cum_noise, keep_prob, window, negatives, lr0, total_work, done_before,
            n_chunks, states[c])
        losses[c] = loss
        pairs[c] = p
        processed[c] = done
        finite[c] = ok
    return losses.sum(), pairs.sum(), processed.sum(), finite.all()
