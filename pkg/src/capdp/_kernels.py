"""Compiled inner loops.

Everything here works on raw int64 arrays with sentinel codes:

* ``NEG_CODE`` stands for "no value" in max-plus arrays (absorbing minus
  infinity), ``POS_CODE`` for the min-plus mirror.
* Finite payloads are kept far away from the sentinel region (|v| well
  below 2**57, checked by the validation layer), so a single addition of
  two finite payloads can never be mistaken for a sentinel.

Kernels never do arithmetic on sentinel codes; they branch on them.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NEG_CODE = -(1 << 62)
POS_CODE = 1 << 62
NEG_THRESH = -(1 << 60)
POS_THRESH = 1 << 60


@njit(cache=True)
def naive_maxplus_codes(a, b):
    la = a.shape[0]
    lb = b.shape[0]
    out = np.full(la + lb - 1, NEG_CODE, np.int64)
    for j in range(la):
        av = a[j]
        if av == NEG_CODE:
            continue
        for d in range(lb):
            bv = b[d]
            if bv == NEG_CODE:
                continue
            s = av + bv
            if s > out[j + d]:
                out[j + d] = s
    return out


@njit(cache=True)
def naive_minplus_codes(a, b):
    la = a.shape[0]
    lb = b.shape[0]
    out = np.full(la + lb - 1, POS_CODE, np.int64)
    for j in range(la):
        av = a[j]
        if av == POS_CODE:
            continue
        for d in range(lb):
            bv = b[d]
            if bv == POS_CODE:
                continue
            s = av + bv
            if s < out[j + d]:
                out[j + d] = s
    return out


@njit(cache=True)
def sliding_max_codes(f, k):
    """out[j] = max(f[max(0, j-k+1) .. j]); monotone index deque."""
    n = f.shape[0]
    out = np.empty(n, np.int64)
    deq = np.empty(n, np.int64)
    head = 0
    tail = 0
    for j in range(n):
        lo = j - k + 1
        while tail > head and deq[head] < lo:
            head += 1
        v = f[j]
        while tail > head and f[deq[tail - 1]] <= v:
            tail -= 1
        deq[tail] = j
        tail += 1
        out[j] = f[deq[head]]
    return out


# --- SMAWK on the implicit convolution matrix E[i, j] = a[j] + b[i - j] ---
#
# b is concave on its finite core b[p..q].  Entries that fall outside the
# core (or hit a NEG a[j]) are ordered as if b were extended with
# arbitrarily steep concave slopes: compared first by how deep out of core
# they fall, then by the clamped finite part.  That extension keeps the
# whole implicit matrix inverse-Monge, so the classic reduce/interpolate
# recursion is exact, and any row whose best entry is out-of-core has no
# feasible pair at all.


@njit(cache=True)
def _conv_key(i, j, a, b, p, q, zdepth):
    d = i - j
    if d < p:
        depth = p - d
        dd = p
    elif d > q:
        depth = d - q
        dd = q
    else:
        depth = 0
        dd = d
    av = a[j]
    if av == NEG_CODE:
        return zdepth + depth, b[dd]
    return depth, av + b[dd]


@njit(cache=True)
def _conv_gt(i, j1, j2, a, b, p, q, zdepth):
    d1, v1 = _conv_key(i, j1, a, b, p, q, zdepth)
    d2, v2 = _conv_key(i, j2, a, b, p, q, zdepth)
    if d1 != d2:
        return d1 < d2
    return v1 > v2


@njit(cache=True)
def conv_concave_codes(a, b, p, q):
    """Max-plus convolution of a (arbitrary codes) with b concave on b[p..q].

    Returns codes of length len(a)+len(b)-1; rows with no feasible finite
    pair come back as NEG_CODE.  The recursion is unrolled into a down
    phase (reduce surviving columns per row-stride level) and an up phase
    (interpolate even rows between solved odd rows); per-level column
    stacks live side by side in one flat buffer.
    """
    la = a.shape[0]
    lb = b.shape[0]
    n = la + lb - 1
    zdepth = la + lb + 4
    out_col = np.empty(n, np.int64)
    buf = np.empty(la + 2 * n + 66, np.int64)
    for j in range(la):
        buf[j] = j
    starts = np.empty(64, np.int64)
    strides = np.empty(64, np.int64)
    offs = np.empty(64, np.int64)
    lens = np.empty(64, np.int64)

    lvl = 0
    start = 0
    stride = 1
    in_off = 0
    in_len = la
    off = la
    while True:
        cnt = (n - 1 - start) // stride + 1
        cap = cnt if cnt < in_len else in_len
        top = 0
        for idx in range(in_len):
            c = buf[in_off + idx]
            while top > 0:
                r = start + (top - 1) * stride
                if _conv_gt(r, c, buf[off + top - 1], a, b, p, q, zdepth):
                    top -= 1
                else:
                    break
            if top < cap:
                buf[off + top] = c
                top += 1
        starts[lvl] = start
        strides[lvl] = stride
        offs[lvl] = off
        lens[lvl] = top
        if cnt == 1:
            out_col[start] = buf[off]
            break
        in_off = off
        in_len = top
        off += top
        start += stride
        stride *= 2
        lvl += 1

    for l in range(lvl - 1, -1, -1):
        start = starts[l]
        stride = strides[l]
        cnt = (n - 1 - start) // stride + 1
        ko = offs[l]
        kl = lens[l]
        ci = 0
        t = 0
        while t < cnt:
            r = start + t * stride
            if t + 1 < cnt:
                hi_col = out_col[start + (t + 1) * stride]
            else:
                hi_col = buf[ko + kl - 1]
            best_c = buf[ko + ci]
            pos = ci
            while True:
                c = buf[ko + pos]
                if c != best_c and _conv_gt(r, c, best_c, a, b, p, q, zdepth):
                    best_c = c
                if c == hi_col:
                    break
                pos += 1
            out_col[r] = best_c
            ci = pos
            t += 2

    out = np.empty(n, np.int64)
    for i in range(n):
        j = out_col[i]
        d = i - j
        if a[j] == NEG_CODE or d < p or d > q:
            out[i] = NEG_CODE
        else:
            out[i] = a[j] + b[d]
    return out


@njit(cache=True)
def unbounded_fill_dp(ws, vs, T):
    """Textbook unbounded-knapsack DP over capacities 0..T (at-most values)."""
    a = np.zeros(T + 1, np.int64)
    nit = ws.shape[0]
    for t in range(1, T + 1):
        best = a[t - 1]
        for i in range(nit):
            w = ws[i]
            if w <= t:
                c = a[t - w] + vs[i]
                if c > best:
                    best = c
        a[t] = best
    return a


@njit(cache=True)
def dag_probe(indptr, src, rew, counted, lam, s):
    """Penalized longest-path sweep over a topologically indexed DAG.

    Node rewards are added at every node except the start; lam is charged
    at counted nodes only, and only counted nodes advance the hop tally.
    Returns (value, kmin, kmax) arrays; unreachable nodes hold NEG_CODE.
    """
    n = indptr.shape[0] - 1
    val = np.full(n, NEG_CODE, np.int64)
    kmin = np.zeros(n, np.int64)
    kmax = np.zeros(n, np.int64)
    val[s] = 0
    for v in range(s + 1, n):
        r = rew[v]
        if r == NEG_CODE:
            continue
        best = NEG_CODE
        bmin = 0
        bmax = 0
        for e in range(indptr[v], indptr[v + 1]):
            u = src[e]
            pv = val[u]
            if pv == NEG_CODE:
                continue
            if pv > best:
                best = pv
                bmin = kmin[u]
                bmax = kmax[u]
            elif pv == best:
                if kmin[u] < bmin:
                    bmin = kmin[u]
                if kmax[u] > bmax:
                    bmax = kmax[u]
        if best == NEG_CODE:
            continue
        if counted[v] != 0:
            val[v] = best + r - lam
            kmin[v] = bmin + 1
            kmax[v] = bmax + 1
        else:
            val[v] = best + r
            kmin[v] = bmin
            kmax[v] = bmax
    return val, kmin, kmax


@njit(cache=True)
def dag_hop_dp(indptr, src, rew, counted, s, K):
    """Exact-hop table dp[k, v]: best value reaching v having visited k
    counted nodes after the start.  Uncounted nodes relax within their own
    layer; topological index order makes that safe in one sweep."""
    n = indptr.shape[0] - 1
    dp = np.full((K + 1, n), NEG_CODE, np.int64)
    dp[0, s] = 0
    for k in range(K + 1):
        for v in range(s + 1, n):
            r = rew[v]
            if r == NEG_CODE:
                continue
            src_k = k - 1 if counted[v] != 0 else k
            if src_k < 0:
                continue
            best = NEG_CODE
            for e in range(indptr[v], indptr[v + 1]):
                pv = dp[src_k, src[e]]
                if pv > best:
                    best = pv
            if best == NEG_CODE:
                continue
            cand = best + r
            if cand > dp[k, v]:
                dp[k, v] = cand
    return dp


@njit(cache=True)
def monge_dense_probe(W, lam, s):
    """Edge-penalized longest-path sweep on a complete DAG weight matrix."""
    n1 = W.shape[0]
    val = np.full(n1, NEG_CODE, np.int64)
    kmin = np.zeros(n1, np.int64)
    kmax = np.zeros(n1, np.int64)
    val[s] = 0
    for v in range(s + 1, n1):
        best = NEG_CODE
        bmin = 0
        bmax = 0
        for u in range(s, v):
            pv = val[u]
            if pv == NEG_CODE:
                continue
            c = pv + W[u, v] - lam
            if c > best:
                best = c
                bmin = kmin[u]
                bmax = kmax[u]
            elif c == best:
                if kmin[u] < bmin:
                    bmin = kmin[u]
                if kmax[u] > bmax:
                    bmax = kmax[u]
        if best == NEG_CODE:
            continue
        val[v] = best
        kmin[v] = bmin + 1
        kmax[v] = bmax + 1
    return val, kmin, kmax


@njit(cache=True)
def monge_edge_probe(indptr, src, wts, lam, s):
    n1 = indptr.shape[0] - 1
    val = np.full(n1, NEG_CODE, np.int64)
    kmin = np.zeros(n1, np.int64)
    kmax = np.zeros(n1, np.int64)
    val[s] = 0
    for v in range(s + 1, n1):
        best = NEG_CODE
        bmin = 0
        bmax = 0
        for e in range(indptr[v], indptr[v + 1]):
            u = src[e]
            pv = val[u]
            if pv == NEG_CODE:
                continue
            c = pv + wts[e] - lam
            if c > best:
                best = c
                bmin = kmin[u]
                bmax = kmax[u]
            elif c == best:
                if kmin[u] < bmin:
                    bmin = kmin[u]
                if kmax[u] > bmax:
                    bmax = kmax[u]
        if best == NEG_CODE:
            continue
        val[v] = best
        kmin[v] = bmin + 1
        kmax[v] = bmax + 1
    return val, kmin, kmax


@njit(cache=True)
def monge_dense_hop_dp(W, s, K):
    """Exact-hop profile DP: dp[k, v] = best s->v value using exactly k edges."""
    n1 = W.shape[0]
    dp = np.full((K + 1, n1), NEG_CODE, np.int64)
    dp[0, s] = 0
    for k in range(1, K + 1):
        for v in range(s + 1, n1):
            best = NEG_CODE
            for u in range(s, v):
                pv = dp[k - 1, u]
                if pv == NEG_CODE:
                    continue
                c = pv + W[u, v]
                if c > best:
                    best = c
            dp[k, v] = best
    return dp


@njit(cache=True)
def monge_edge_hop_dp(indptr, src, wts, s, K):
    n1 = indptr.shape[0] - 1
    dp = np.full((K + 1, n1), NEG_CODE, np.int64)
    dp[0, s] = 0
    for k in range(1, K + 1):
        for v in range(s + 1, n1):
            best = NEG_CODE
            for e in range(indptr[v], indptr[v + 1]):
                u = src[e]
                pv = dp[k - 1, u]
                if pv == NEG_CODE:
                    continue
                c = pv + wts[e]
                if c > best:
                    best = c
            dp[k, v] = best
    return dp


def warm_kernels() -> None:
    """Trigger compilation of every kernel on tiny inputs."""
    one = np.zeros(1, np.int64)
    two = np.zeros(2, np.int64)
    naive_maxplus_codes(two, two)
    naive_minplus_codes(two, two)
    sliding_max_codes(two, 2)
    conv_concave_codes(two, two, 0, 1)
    unbounded_fill_dp(np.ones(1, np.int64), one, 2)
    indptr = np.array([0, 0, 1], np.int64)
    src = np.zeros(1, np.int64)
    dag_probe(indptr, src, two, np.ones(2, np.uint8), 0, 0)
    dag_hop_dp(indptr, src, two, np.ones(2, np.uint8), 0, 1)
    W = np.zeros((2, 2), np.int64)
    monge_dense_probe(W, 0, 0)
    monge_edge_probe(indptr, src, one, 0, 0)
    monge_dense_hop_dp(W, 0, 1)
    monge_edge_hop_dp(indptr, src, one, 0, 1)
    monge_dense_hop_dp(W, 0, 1)
    monge_edge_hop_dp(indptr, src, one, 0, 1)
