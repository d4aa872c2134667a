"""Pure NumPy implementations of the hot kernels.

These mirror the compiled versions in ``_fast.pyx`` operation-for-operation:
the tree builder uses the same traversal order, the same stable sort key
(value, position) and the same sequential accumulation order, so compiled
and fallback builds produce bit-identical trees. The SMO sweep follows the
same pair-update schedule but evaluates decision values with BLAS dots, so
its trajectories may differ from the compiled path in final float bits.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_SEED_FALLBACK = 0x9E3779B97F4A7C15  # xorshift state must be nonzero
_XS_MULT = 0x2545F4914F6CDD1D


def xorshift_next(state: int) -> tuple[int, int]:
    """One xorshift64* step: returns (new_state, output)."""
    x = state & MASK64
    x ^= x >> 12
    x = (x ^ (x << 25)) & MASK64
    x ^= x >> 27
    return x, (x * _XS_MULT) & MASK64


def _choose_features(m: int, k: int, state: int) -> tuple[list[int], int]:
    """k distinct feature indices via partial Fisher-Yates, returned ascending."""
    idx = list(range(m))
    for i in range(k):
        state, out = xorshift_next(state)
        j = i + out % (m - i)
        idx[i], idx[j] = idx[j], idx[i]
    return sorted(idx[:k]), state


def build_tree(X, y, w, max_depth: int, max_features: int, seed: int):
    """Grow a binary CART classification tree (Gini impurity, weighted).

    X is float64 (n, m); y is int8 in {0, 1}; w is float64 sample weights.
    ``max_depth`` < 0 means unlimited; ``max_features`` in (0, m) samples
    that many split candidates per node (random forest mode), 0 or >= m
    scans all features. Split-gain ties break toward the lowest feature
    index, then the lowest threshold.

    Returns (feature, threshold, left, right, value) node arrays; leaves
    have feature == -1 and carry the majority class in ``value`` (weighted
    ties resolve to class 0).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int8)
    w = np.asarray(w, dtype=np.float64)
    n, m = X.shape
    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int32)
    threshold = np.zeros(cap, dtype=np.float64)
    left = np.full(cap, -1, dtype=np.int32)
    right = np.full(cap, -1, dtype=np.int32)
    value = np.zeros(cap, dtype=np.int8)

    samples = np.arange(n, dtype=np.int64)
    yf = y.astype(np.float64)
    state = (seed & MASK64) or _SEED_FALLBACK

    wt_root = float(np.cumsum(w)[-1])
    wp_root = float(np.cumsum(w * yf)[-1])

    n_nodes = 1
    stack = [(0, 0, n, 0, wt_root, wp_root)]
    while stack:
        node, start, end, depth, wt, wp = stack.pop()
        nn = end - start
        leaf = nn < 2 or wp == 0.0 or wp == wt or (0 <= max_depth <= depth)

        best_gain = 0.0
        best_feat = -1
        best_thr = 0.0
        best_wl = 0.0
        best_wpl = 0.0
        if not leaf:
            if 0 < max_features < m:
                feats, state = _choose_features(m, max_features, state)
            else:
                feats = range(m)
            p = wp / wt
            g_parent = 1.0 - p * p - (1.0 - p) * (1.0 - p)
            idx = samples[start:end]
            w_node = w[idx]
            y_node = yf[idx]
            for f in feats:
                v = X[idx, f]
                order = np.argsort(v, kind="stable")
                vs = v[order]
                cw = np.cumsum(w_node[order])
                cwp = np.cumsum(w_node[order] * y_node[order])
                cut = np.nonzero(vs[:-1] < vs[1:])[0]
                if cut.size == 0:
                    continue
                wl = cw[cut]
                wpl = cwp[cut]
                wr = wt - wl
                wpr = wp - wpl
                pl = wpl / wl
                ql = 1.0 - pl
                pr = wpr / wr
                qr = 1.0 - pr
                gl = 1.0 - pl * pl - ql * ql
                gr = 1.0 - pr * pr - qr * qr
                gain = g_parent - (wl * gl + wr * gr) / wt
                j = int(np.argmax(gain))
                if gain[j] > best_gain:
                    best_gain = float(gain[j])
                    best_feat = int(f)
                    best_thr = (vs[cut[j]] + vs[cut[j] + 1]) * 0.5
                    best_wl = float(wl[j])
                    best_wpl = float(wpl[j])

        if best_feat < 0:
            value[node] = 1 if 2.0 * wp > wt else 0
            continue

        idx = samples[start:end]
        mask = X[idx, best_feat] <= best_thr
        n_left = int(np.count_nonzero(mask))
        samples[start:end] = np.concatenate([idx[mask], idx[~mask]])
        lid, rid = n_nodes, n_nodes + 1
        n_nodes += 2
        feature[node] = best_feat
        threshold[node] = best_thr
        left[node] = lid
        right[node] = rid
        stack.append((rid, start + n_left, end, depth + 1, wt - best_wl, wp - best_wpl))
        stack.append((lid, start, start + n_left, depth + 1, best_wl, best_wpl))

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        value[:n_nodes].copy(),
    )


def smo_epoch(K, y, alpha, b: float, C: float, tol: float, state: int):
    """One full SMO sweep over all multipliers.

    For each index violating its KKT condition (within ``tol``), a random
    partner is drawn from the xorshift stream and the pair is optimized
    analytically, clipping to the box [0, C]. ``alpha`` is updated in place.
    Returns (pairs_changed, new_b, new_state).
    """
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = y.size
    state = (state & MASK64) or _SEED_FALLBACK
    ay = alpha * y
    changed = 0
    for i in range(n):
        Ei = float(ay @ K[i]) + b - y[i]
        yEi = y[i] * Ei
        if not ((yEi < -tol and alpha[i] < C) or (yEi > tol and alpha[i] > 0.0)):
            continue
        state, out = xorshift_next(state)
        j = out % (n - 1)
        if j >= i:
            j += 1
        Ej = float(ay @ K[j]) + b - y[j]
        ai, aj = float(alpha[i]), float(alpha[j])
        if y[i] != y[j]:
            L = max(0.0, aj - ai)
            H = min(C, C + aj - ai)
        else:
            L = max(0.0, ai + aj - C)
            H = min(C, ai + aj)
        if L == H:
            continue
        eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
        if eta >= 0.0:
            continue
        aj_new = aj - y[j] * (Ei - Ej) / eta
        aj_new = min(H, max(L, aj_new))
        if abs(aj_new - aj) < 1e-5:
            continue
        # the box bounds make this a no-op up to float rounding
        ai_new = min(C, max(0.0, ai + y[i] * y[j] * (aj - aj_new)))
        b1 = b - Ei - y[i] * (ai_new - ai) * K[i, i] - y[j] * (aj_new - aj) * K[i, j]
        b2 = b - Ej - y[i] * (ai_new - ai) * K[i, j] - y[j] * (aj_new - aj) * K[j, j]
        if 0.0 < ai_new < C:
            b = b1
        elif 0.0 < aj_new < C:
            b = b2
        else:
            b = (b1 + b2) / 2.0
        alpha[i] = ai_new
        alpha[j] = aj_new
        ay[i] = ai_new * y[i]
        ay[j] = aj_new * y[j]
        changed += 1
    return changed, b, state
