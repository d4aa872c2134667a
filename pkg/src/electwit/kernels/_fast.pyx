# cython: language_level=3
"""Compiled hot kernels: CART split search/tree growth and SMO sweeps.

Mirrors ``electwit.kernels._pure`` operation-for-operation; the tree builder
is bit-compatible with the fallback (same traversal, same stable sort key,
same accumulation order). See that module for the semantic documentation.
"""

from libc.stdlib cimport free, malloc, qsort

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

cdef u64 _SEED_FALLBACK = 0x9E3779B97F4A7C15ULL
cdef u64 _XS_MULT = 0x2545F4914F6CDD1DULL


cdef inline u64 _xs_step(u64* state) noexcept nogil:
    cdef u64 x = state[0]
    x ^= x >> 12
    x ^= x << 25
    x ^= x >> 27
    state[0] = x
    return x * _XS_MULT


cdef struct VP:
    double v
    long long i


cdef int _vp_cmp(const void* a, const void* b) noexcept nogil:
    cdef const VP* x = <const VP*> a
    cdef const VP* y = <const VP*> b
    if x.v < y.v:
        return -1
    if x.v > y.v:
        return 1
    if x.i < y.i:
        return -1
    if x.i > y.i:
        return 1
    return 0


cdef int _ll_cmp(const void* a, const void* b) noexcept nogil:
    cdef long long x = (<const long long*> a)[0]
    cdef long long y = (<const long long*> b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


def xorshift_next(state):
    """One xorshift64* step: returns (new_state, output)."""
    cdef u64 s = <u64> (state & 0xFFFFFFFFFFFFFFFFULL)
    cdef u64 out = _xs_step(&s)
    return int(s), int(out)


def build_tree(X, y, w, int max_depth, int max_features, seed):
    """Compiled twin of ``_pure.build_tree``; same contract, same bits."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="fortran"] Xf = np.asfortranarray(X, dtype=np.float64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] ya = np.ascontiguousarray(y, dtype=np.int8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wa = np.ascontiguousarray(w, dtype=np.float64)

    cdef Py_ssize_t n = Xf.shape[0]
    cdef Py_ssize_t m = Xf.shape[1]
    if n == 0:
        raise ValueError("cannot build a tree on zero samples")
    cdef Py_ssize_t cap = 2 * n + 1

    feature_arr = np.full(cap, -1, dtype=np.int32)
    threshold_arr = np.zeros(cap, dtype=np.float64)
    left_arr = np.full(cap, -1, dtype=np.int32)
    right_arr = np.full(cap, -1, dtype=np.int32)
    value_arr = np.zeros(cap, dtype=np.int8)

    cdef cnp.int32_t[::1] feature = feature_arr
    cdef double[::1] threshold = threshold_arr
    cdef cnp.int32_t[::1] left = left_arr
    cdef cnp.int32_t[::1] right = right_arr
    cdef cnp.int8_t[::1] value = value_arr

    cdef double[::1, :] Xv = Xf
    cdef cnp.int8_t[::1] yv = ya
    cdef double[::1] wv = wa

    cdef u64 state = <u64> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    if state == 0:
        state = _SEED_FALLBACK

    cdef long long* samples = <long long*> malloc(n * sizeof(long long))
    cdef long long* tmp = <long long*> malloc(n * sizeof(long long))
    cdef VP* pairs = <VP*> malloc(n * sizeof(VP))
    cdef long long* fidx = <long long*> malloc(m * sizeof(long long))
    # LIFO stack of pending nodes
    cdef long long* st_node = <long long*> malloc(cap * sizeof(long long))
    cdef long long* st_start = <long long*> malloc(cap * sizeof(long long))
    cdef long long* st_end = <long long*> malloc(cap * sizeof(long long))
    cdef long long* st_depth = <long long*> malloc(cap * sizeof(long long))
    cdef double* st_wt = <double*> malloc(cap * sizeof(double))
    cdef double* st_wp = <double*> malloc(cap * sizeof(double))
    if (samples == NULL or tmp == NULL or pairs == NULL or fidx == NULL or
            st_node == NULL or st_start == NULL or st_end == NULL or
            st_depth == NULL or st_wt == NULL or st_wp == NULL):
        free(samples); free(tmp); free(pairs); free(fidx)
        free(st_node); free(st_start); free(st_end); free(st_depth)
        free(st_wt); free(st_wp)
        raise MemoryError("tree builder scratch allocation failed")

    cdef Py_ssize_t n_nodes = 1
    cdef Py_ssize_t sp = 0
    cdef Py_ssize_t i, j, k, f, fi, nn, node, start, end, depth, n_left, n_feats
    cdef long long si, lid, rid, r
    cdef double wt, wp, wt_root, wp_root, p, g_parent
    cdef double cw, cwp, wl, wpl, wr, wpr, pl, ql, pr, qr, gl, gr, gain
    cdef double best_gain, best_thr, best_wl, best_wpl, vcur
    cdef long long best_feat
    cdef bint leaf

    with nogil:
        wt_root = 0.0
        wp_root = 0.0
        for i in range(n):
            samples[i] = i
            wt_root = wt_root + wv[i]
            wp_root = wp_root + wv[i] * <double> yv[i]

        st_node[0] = 0
        st_start[0] = 0
        st_end[0] = n
        st_depth[0] = 0
        st_wt[0] = wt_root
        st_wp[0] = wp_root
        sp = 1

        while sp > 0:
            sp -= 1
            node = st_node[sp]
            start = st_start[sp]
            end = st_end[sp]
            depth = st_depth[sp]
            wt = st_wt[sp]
            wp = st_wp[sp]
            nn = end - start

            leaf = nn < 2 or wp == 0.0 or wp == wt or (max_depth >= 0 and depth >= max_depth)

            best_gain = 0.0
            best_feat = -1
            best_thr = 0.0
            best_wl = 0.0
            best_wpl = 0.0

            if not leaf:
                if 0 < max_features < m:
                    for i in range(m):
                        fidx[i] = i
                    for i in range(max_features):
                        r = <long long> (_xs_step(&state) % <u64> (m - i))
                        j = i + r
                        si = fidx[i]
                        fidx[i] = fidx[j]
                        fidx[j] = si
                    qsort(fidx, max_features, sizeof(long long), _ll_cmp)
                    n_feats = max_features
                else:
                    for i in range(m):
                        fidx[i] = i
                    n_feats = m

                p = wp / wt
                g_parent = 1.0 - p * p - (1.0 - p) * (1.0 - p)

                for fi in range(n_feats):
                    f = <Py_ssize_t> fidx[fi]
                    for i in range(nn):
                        pairs[i].v = Xv[samples[start + i], f]
                        pairs[i].i = i
                    qsort(pairs, nn, sizeof(VP), _vp_cmp)
                    cw = 0.0
                    cwp = 0.0
                    for i in range(nn - 1):
                        si = samples[start + pairs[i].i]
                        cw = cw + wv[si]
                        cwp = cwp + wv[si] * <double> yv[si]
                        vcur = pairs[i].v
                        if vcur < pairs[i + 1].v:
                            wl = cw
                            wpl = cwp
                            wr = wt - wl
                            wpr = wp - wpl
                            pl = wpl / wl
                            ql = 1.0 - pl
                            pr = wpr / wr
                            qr = 1.0 - pr
                            gl = 1.0 - pl * pl - ql * ql
                            gr = 1.0 - pr * pr - qr * qr
                            gain = g_parent - (wl * gl + wr * gr) / wt
                            if gain > best_gain:
                                best_gain = gain
                                best_feat = f
                                best_thr = (vcur + pairs[i + 1].v) * 0.5
                                best_wl = wl
                                best_wpl = wpl

            if best_feat < 0:
                value[node] = 1 if 2.0 * wp > wt else 0
                continue

            # stable partition of samples[start:end] by <= threshold
            k = 0
            for i in range(start, end):
                if Xv[samples[i], best_feat] <= best_thr:
                    tmp[k] = samples[i]
                    k += 1
            n_left = k
            for i in range(start, end):
                if not (Xv[samples[i], best_feat] <= best_thr):
                    tmp[k] = samples[i]
                    k += 1
            for i in range(nn):
                samples[start + i] = tmp[i]

            lid = n_nodes
            rid = n_nodes + 1
            n_nodes += 2
            feature[node] = <cnp.int32_t> best_feat
            threshold[node] = best_thr
            left[node] = <cnp.int32_t> lid
            right[node] = <cnp.int32_t> rid

            st_node[sp] = rid
            st_start[sp] = start + n_left
            st_end[sp] = end
            st_depth[sp] = depth + 1
            st_wt[sp] = wt - best_wl
            st_wp[sp] = wp - best_wpl
            sp += 1
            st_node[sp] = lid
            st_start[sp] = start
            st_end[sp] = start + n_left
            st_depth[sp] = depth + 1
            st_wt[sp] = best_wl
            st_wp[sp] = best_wpl
            sp += 1

    free(samples); free(tmp); free(pairs); free(fidx)
    free(st_node); free(st_start); free(st_end); free(st_depth)
    free(st_wt); free(st_wp)

    return (
        feature_arr[:n_nodes].copy(),
        threshold_arr[:n_nodes].copy(),
        left_arr[:n_nodes].copy(),
        right_arr[:n_nodes].copy(),
        value_arr[:n_nodes].copy(),
    )


def smo_epoch(K, y, alpha, double b, double C, double tol, state):
    """Compiled twin of ``_pure.smo_epoch``; alpha is updated in place."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Ka = np.ascontiguousarray(K, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ya = np.ascontiguousarray(y, dtype=np.float64)
    if not isinstance(alpha, np.ndarray) or alpha.dtype != np.float64:
        raise TypeError("alpha must be a float64 ndarray (updated in place)")
    cdef double[:, ::1] Kv = Ka
    cdef double[::1] yv = ya
    cdef double[::1] av = alpha

    cdef Py_ssize_t n = yv.shape[0]
    cdef u64 st = <u64> (int(state) & 0xFFFFFFFFFFFFFFFF)
    if st == 0:
        st = _SEED_FALLBACK

    cdef double* ay = <double*> malloc(n * sizeof(double))
    if ay == NULL:
        raise MemoryError("smo scratch allocation failed")

    cdef Py_ssize_t i, j, k
    cdef long long changed = 0
    cdef double Ei, Ej, yEi, ai, aj, L, H, eta, aj_new, ai_new, b1, b2, acc

    with nogil:
        for i in range(n):
            ay[i] = av[i] * yv[i]
        for i in range(n):
            acc = 0.0
            for k in range(n):
                acc = acc + ay[k] * Kv[i, k]
            Ei = acc + b - yv[i]
            yEi = yv[i] * Ei
            if not ((yEi < -tol and av[i] < C) or (yEi > tol and av[i] > 0.0)):
                continue
            j = <Py_ssize_t> (_xs_step(&st) % <u64> (n - 1))
            if j >= i:
                j += 1
            acc = 0.0
            for k in range(n):
                acc = acc + ay[k] * Kv[j, k]
            Ej = acc + b - yv[j]
            ai = av[i]
            aj = av[j]
            if yv[i] != yv[j]:
                L = aj - ai
                if L < 0.0:
                    L = 0.0
                H = C + aj - ai
                if H > C:
                    H = C
            else:
                L = ai + aj - C
                if L < 0.0:
                    L = 0.0
                H = ai + aj
                if H > C:
                    H = C
            if L == H:
                continue
            eta = 2.0 * Kv[i, j] - Kv[i, i] - Kv[j, j]
            if eta >= 0.0:
                continue
            aj_new = aj - yv[j] * (Ei - Ej) / eta
            if aj_new > H:
                aj_new = H
            elif aj_new < L:
                aj_new = L
            if aj_new - aj < 1e-5 and aj - aj_new < 1e-5:
                continue
            # the box bounds make this a no-op up to float rounding
            ai_new = ai + yv[i] * yv[j] * (aj - aj_new)
            if ai_new > C:
                ai_new = C
            elif ai_new < 0.0:
                ai_new = 0.0
            b1 = b - Ei - yv[i] * (ai_new - ai) * Kv[i, i] - yv[j] * (aj_new - aj) * Kv[i, j]
            b2 = b - Ej - yv[i] * (ai_new - ai) * Kv[i, j] - yv[j] * (aj_new - aj) * Kv[j, j]
            if 0.0 < ai_new < C:
                b = b1
            elif 0.0 < aj_new < C:
                b = b2
            else:
                b = (b1 + b2) / 2.0
            av[i] = ai_new
            av[j] = aj_new
            ay[i] = ai_new * yv[i]
            ay[j] = aj_new * yv[j]
            changed += 1

    free(ay)
    return int(changed), b, int(st)
