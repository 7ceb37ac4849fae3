# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled kernels; results are identical to ``_pycore``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY
from libcpp.vector cimport vector
from libc.stdint cimport int64_t, uint8_t

cnp.import_array()

BACKEND = "cython"


def preorder(const int64_t[::1] child_ptr, const int64_t[::1] child_idx, int64_t root):
    cdef Py_ssize_t n = child_ptr.shape[0] - 1
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef vector[int64_t] stack
    cdef Py_ssize_t cnt = 0
    cdef int64_t v, j
    stack.push_back(root)
    while stack.size():
        v = stack.back()
        stack.pop_back()
        o[cnt] = v
        cnt += 1
        j = child_ptr[v + 1] - 1
        while j >= child_ptr[v]:
            stack.push_back(child_idx[j])
            j -= 1
    return out[:cnt]


cdef struct Arena:
    vector[int64_t] g
    vector[int64_t] p
    vector[uint8_t] r


cdef Py_ssize_t _prune_into(const int64_t* g, const int64_t* p, const uint8_t* r, Py_ssize_t m,
                            Arena* dst, int64_t* has, int64_t* nonempty, int64_t* kanc, int64_t* newidx,
                            int64_t* keep_out) noexcept nogil:
    """Append the pruned tree of (g, p, r)[0:m] to ``dst``; returns its size."""
    cdef Py_ssize_t i, kept = 0
    cdef int64_t pi, up
    for i in range(m):
        has[i] = r[i]
        nonempty[i] = 0
    i = m - 1
    while i > 0:
        if has[i]:
            pi = p[i]
            nonempty[pi] += 1
            has[pi] = 1
        i -= 1
    for i in range(m):
        pi = p[i]
        up = kanc[pi] if pi >= 0 else -1
        if r[i] or nonempty[i] >= 2:
            newidx[i] = kept
            if keep_out != NULL:
                keep_out[kept] = i
            kept += 1
            dst.g.push_back(g[i])
            dst.p.push_back(newidx[up] if up >= 0 else -1)
            dst.r.push_back(r[i])
            kanc[i] = i
        else:
            kanc[i] = up
    return kept


def prune_preorder(const int64_t[::1] par, const uint8_t[::1] req):
    cdef Py_ssize_t m = par.shape[0]
    cdef Arena a
    cdef vector[int64_t] g
    g.resize(m)
    cdef Py_ssize_t i
    for i in range(m):
        g[i] = i
    scratch = np.empty((5, max(m, 1)), dtype=np.int64)
    cdef int64_t[:, ::1] s = scratch
    cdef Py_ssize_t kept = _prune_into(g.data(), &par[0] if m else NULL, &req[0] if m else NULL, m, &a,
                                       &s[0, 0], &s[1, 0], &s[2, 0], &s[3, 0], &s[4, 0])
    keep = np.array(scratch[4, :kept])
    new_par = np.empty(kept, dtype=np.int64)
    cdef int64_t[::1] np_ = new_par
    for i in range(kept):
        np_[i] = a.p[i]
    return keep, new_par, 2 * m


def decomp_preorder(const int64_t[::1] par, const uint8_t[::1] req, int64_t ell):
    cdef Py_ssize_t m = par.shape[0], i
    cut = np.zeros(m, dtype=np.uint8)
    size = np.empty(m, dtype=np.int64)
    cdef uint8_t[::1] c = cut
    cdef int64_t[::1] sz = size
    for i in range(m):
        sz[i] = req[i]
    i = m - 1
    while i >= 0:
        if sz[i] > ell:
            c[i] = 1
        elif i:
            sz[par[i]] += sz[i]
        i -= 1
    return cut, size, m


cdef inline void _add(vector[int64_t]& out, int64_t a, int64_t b) noexcept nogil:
    if a < b:
        out.push_back(a)
        out.push_back(b)
    else:
        out.push_back(b)
        out.push_back(a)


def spanner_edges(const int64_t[::1] gid, const int64_t[::1] par, const uint8_t[::1] req, int k,
                  const int64_t[:, ::1] ell_table):
    cdef Py_ssize_t M = par.shape[0]
    cdef Arena arena
    cdef vector[Py_ssize_t] t_off, t_len
    cdef vector[int] t_k
    cdef vector[int64_t] out
    cdef Py_ssize_t i, j, x, y, m, off, n, base, top, nch, q
    cdef int kk
    cdef int64_t ell, pi, c, work = 0, calls = 0, epp_excess = 0, shrink_fail = 0, epp, ncv, nreq
    scratch = np.empty((12, max(M, 1)), dtype=np.int64)
    cdef int64_t[:, ::1] S = scratch
    cdef int64_t* size = &S[0, 0]
    cdef int64_t* cut = &S[1, 0]
    cdef int64_t* croot = &S[2, 0]
    cdef int64_t* bcount = &S[3, 0]   # border count per component root, then offsets
    cdef int64_t* bstart = &S[4, 0]
    cdef int64_t* bl = &S[5, 0]       # flattened border lists
    cdef int64_t* ccount = &S[6, 0]   # member count per component root, then offsets
    cdef int64_t* mem = &S[7, 0]      # members grouped by component
    cdef int64_t* h1 = &S[8, 0]
    cdef int64_t* h2 = &S[9, 0]
    cdef int64_t* h3 = &S[10, 0]
    cdef int64_t* h4 = &S[11, 0]
    cdef vector[int64_t] lg, lp
    cdef vector[uint8_t] lr
    cdef vector[int64_t] cvlist

    for i in range(M):
        arena.g.push_back(gid[i])
        arena.p.push_back(par[i])
        arena.r.push_back(req[i])
    t_off.push_back(0)
    t_len.push_back(M)
    t_k.push_back(k)

    with nogil:
        while t_off.size():
            off = t_off.back()
            m = t_len.back()
            kk = t_k.back()
            t_off.pop_back()
            t_len.pop_back()
            t_k.pop_back()
            calls += 1
            work += m
            # the task occupies [off, off+m); everything above it is dead
            n = 0
            for i in range(m):
                n += arena.r[off + i]
            if n <= kk + 1:
                for i in range(1, m):
                    _add(out, arena.g[off + arena.p[off + i]], arena.g[off + i])
                if n == kk + 1:
                    nch = 0
                    for i in range(1, m):
                        if arena.p[off + i] == 0:
                            if nch < 2:
                                h1[nch] = arena.g[off + i]
                            nch += 1
                    if nch == 2:
                        _add(out, h1[0], h1[1])
                arena.g.resize(off)
                arena.p.resize(off)
                arena.r.resize(off)
                continue
            ell = ell_table[kk - 2, n]
            for i in range(m):
                size[i] = arena.r[off + i]
                cut[i] = 0
            i = m - 1
            while i >= 0:
                if size[i] > ell:
                    cut[i] = 1
                elif i:
                    size[arena.p[off + i]] += size[i]
                i -= 1
            ncv = 0
            for i in range(m):
                bcount[i] = 0
                ccount[i] = 0
                if cut[i]:
                    croot[i] = -1
                    ncv += 1
                else:
                    pi = arena.p[off + i]
                    croot[i] = i if (pi < 0 or cut[pi]) else croot[pi]
                    ccount[croot[i]] += 1
            # borders: count, offsets, fill
            for i in range(1, m):
                pi = arena.p[off + i]
                if cut[i] and not cut[pi]:
                    bcount[croot[pi]] += 1
                elif (not cut[i]) and cut[pi]:
                    bcount[i] += 1
            x = 0
            for i in range(m):
                bstart[i] = x
                x += bcount[i]
                bcount[i] = bstart[i]
            for i in range(1, m):
                pi = arena.p[off + i]
                if cut[i] and not cut[pi]:
                    c = croot[pi]
                    bl[bcount[c]] = i
                    bcount[c] += 1
                elif (not cut[i]) and cut[pi]:
                    bl[bcount[i]] = pi
                    bcount[i] += 1
            epp = 0
            for i in range(m):
                if arena.r[off + i] and not cut[i]:
                    c = croot[i]
                    for j in range(bstart[c], bcount[c]):
                        _add(out, arena.g[off + bl[j]], arena.g[off + i])
                        epp += 1
            if epp > 2 * n:
                epp_excess += 1
            work += 4 * m + epp
            # stage new tasks above the current one, then slide them down over it
            base = off + m
            if kk == 3:
                cvlist.clear()
                for i in range(m):
                    if cut[i]:
                        cvlist.push_back(arena.g[off + i])
                for x in range(<Py_ssize_t>cvlist.size()):
                    for y in range(x + 1, <Py_ssize_t>cvlist.size()):
                        _add(out, cvlist[x], cvlist[y])
                work += ncv * ncv
            elif kk >= 4 and ncv >= 2:
                if ncv >= n:
                    shrink_fail += 1
                # copy first: appending to the arena may move its storage
                lg.clear()
                lp.clear()
                lr.clear()
                for i in range(m):
                    lg.push_back(arena.g[off + i])
                    lp.push_back(arena.p[off + i])
                    lr.push_back(<uint8_t>cut[i])
                top = <Py_ssize_t>arena.g.size()
                q = _prune_into(lg.data(), lp.data(), lr.data(), m, &arena, h1, h2, h3, h4, NULL)
                t_off.push_back(top - m)
                t_len.push_back(q)
                t_k.push_back(kk - 2)
                work += m
            # components: group members by root (ascending positions within each group)
            x = 0
            for i in range(m):
                j = ccount[i]
                ccount[i] = x
                x += j
            for i in range(m):
                if not cut[i]:
                    c = croot[i]
                    mem[ccount[c]] = i
                    ccount[c] += 1
            x = 0
            for c in range(m):
                if cut[c] or croot[c] != c:
                    continue
                # members of component c are mem[x : ccount[c]]
                nreq = 0
                for j in range(x, ccount[c]):
                    nreq += arena.r[off + mem[j]]
                if nreq >= 2:
                    if nreq >= n:
                        shrink_fail += 1
                    lg.clear()
                    lp.clear()
                    lr.clear()
                    for j in range(x, ccount[c]):
                        i = mem[j]
                        h4[i] = j - x  # local index
                        lg.push_back(arena.g[off + i])
                        lp.push_back(-1 if i == c else h4[arena.p[off + i]])
                        lr.push_back(arena.r[off + i])
                    top = <Py_ssize_t>arena.g.size()
                    q = _prune_into(lg.data(), lp.data(), lr.data(), <Py_ssize_t>lg.size(), &arena,
                                    h1, h2, h3, size, NULL)
                    t_off.push_back(top - m)
                    t_len.push_back(q)
                    t_k.push_back(kk)
                    work += 2 * (ccount[c] - x)
                x = ccount[c]
            # slide staged tasks down over the finished one
            top = <Py_ssize_t>arena.g.size()
            for i in range(base, top):
                arena.g[i - m] = arena.g[i]
                arena.p[i - m] = arena.p[i]
                arena.r[i - m] = arena.r[i]
            arena.g.resize(top - m)
            arena.p.resize(top - m)
            arena.r.resize(top - m)

    # de-duplicate through a 1-D key a * (max id + 1) + b
    cdef Py_ssize_t E = out.size() // 2
    cdef int64_t span = 1
    for i in range(M):
        if gid[i] + 1 > span:
            span = gid[i] + 1
    keys = np.empty(E, dtype=np.int64)
    cdef int64_t[::1] kv = keys
    for i in range(E):
        kv[i] = out[2 * i] * span + out[2 * i + 1]
    keys = np.unique(keys)
    pairs = np.empty((keys.shape[0], 2), dtype=np.int64)
    pairs[:, 0] = keys // span
    pairs[:, 1] = keys % span
    return pairs, work, {"calls": calls, "epp_excess": epp_excess, "shrink_fail": shrink_fail}


def monotone_scan(const int64_t[::1] tree_ptr, const int64_t[::1] tree_idx,
                  const int64_t[::1] h_ptr, const int64_t[::1] h_idx,
                  const int64_t[::1] sources, const uint8_t[::1] target_mask):
    cdef Py_ssize_t n = tree_ptr.shape[0] - 1
    cdef vector[uint8_t] onstack
    cdef vector[int64_t] dist, sv, sp, sit
    onstack.assign(n, 0)
    dist.assign(n, 0)
    cdef int64_t big = n + 1, best = 0, bu = -1, bv = -1, pairs = 0
    cdef int64_t u, v, parent, it, w, d, j, x
    cdef Py_ssize_t si
    cdef bint unreachable = False
    with nogil:
        for si in range(sources.shape[0]):
            if unreachable:
                break
            u = sources[si]
            dist[u] = 0
            onstack[u] = 1
            sv.push_back(u)
            sp.push_back(-1)
            sit.push_back(tree_ptr[u])
            while sv.size():
                v = sv.back()
                parent = sp.back()
                it = sit.back()
                if it < tree_ptr[v + 1]:
                    sit[sit.size() - 1] = it + 1
                    w = tree_idx[it]
                    if w == parent:
                        continue
                    d = big
                    for j in range(h_ptr[w], h_ptr[w + 1]):
                        x = h_idx[j]
                        if onstack[x] and dist[x] + 1 < d:
                            d = dist[x] + 1
                    dist[w] = d
                    onstack[w] = 1
                    sv.push_back(w)
                    sp.push_back(v)
                    sit.push_back(tree_ptr[w])
                    if w > u and target_mask[w]:
                        pairs += 1
                        if d >= big:
                            unreachable = True
                            bu = u
                            bv = w
                            break
                        if d > best:
                            best = d
                            bu = u
                            bv = w
                else:
                    onstack[v] = 0
                    sv.pop_back()
                    sp.pop_back()
                    sit.pop_back()
            sv.clear()
            sp.clear()
            sit.clear()
            for j in range(n):
                onstack[j] = 0
    if unreachable:
        return -1, bu, bv, pairs
    return best, bu, bv, pairs


cdef void _hop_limited(const int64_t[::1] ptr, const int64_t[::1] idx, const double[::1] wts,
                       int64_t source, int k, double* dist, double* nxt,
                       vector[int64_t]& frontier, vector[int64_t]& nfront, uint8_t* mark) noexcept nogil:
    cdef Py_ssize_t n = ptr.shape[0] - 1, i
    cdef int64_t a, b, j, h
    cdef double cand
    for i in range(n):
        dist[i] = INFINITY
        nxt[i] = INFINITY
        mark[i] = 0
    dist[source] = 0.0
    nxt[source] = 0.0
    frontier.clear()
    frontier.push_back(source)
    for h in range(k):
        if frontier.size() == 0:
            break
        nfront.clear()
        # relax only out of vertices improved in the previous round
        for i in range(<Py_ssize_t>frontier.size()):
            a = frontier[i]
            for j in range(ptr[a], ptr[a + 1]):
                b = idx[j]
                cand = dist[a] + wts[j]
                if cand < nxt[b]:
                    nxt[b] = cand
                    if not mark[b]:
                        mark[b] = 1
                        nfront.push_back(b)
        for i in range(<Py_ssize_t>nfront.size()):
            b = nfront[i]
            dist[b] = nxt[b]
            mark[b] = 0
        frontier.swap(nfront)


def hop_limited(const int64_t[::1] ptr, const int64_t[::1] idx, const double[::1] wts, int64_t source, int k):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    dist = np.empty(n)
    nxt = np.empty(n)
    mark = np.empty(n, dtype=np.uint8)
    cdef double[::1] d = dist
    cdef double[::1] t = nxt
    cdef uint8_t[::1] mk = mark
    cdef vector[int64_t] f1, f2
    if n:
        _hop_limited(ptr, idx, wts, source, k, &d[0], &t[0], f1, f2, &mk[0])
    return dist


def stretch_scan(const int64_t[::1] ptr, const int64_t[::1] idx, const double[::1] wts,
                 const double[:, ::1] coords, int k, const int64_t[::1] sources, double eps, double slack):
    cdef Py_ssize_t n = ptr.shape[0] - 1, dim = coords.shape[1], si, c
    dist_a = np.empty(max(n, 1))
    nxt_a = np.empty(max(n, 1))
    mark_a = np.empty(max(n, 1), dtype=np.uint8)
    cdef double[::1] dist = dist_a
    cdef double[::1] nxt = nxt_a
    cdef uint8_t[::1] mark = mark_a
    cdef vector[int64_t] f1, f2
    cdef double best = 1.0 if n >= 2 else 0.0, e, diff, ratio
    cdef double limit = (1.0 + eps) * (1.0 + slack)
    cdef int64_t bu = -1, bv = -1, vu = -1, vv = -1, pairs = 0, u, v
    with nogil:
        for si in range(sources.shape[0]):
            u = sources[si]
            if u >= n - 1:
                continue
            _hop_limited(ptr, idx, wts, u, k, &dist[0], &nxt[0], f1, f2, &mark[0])
            for v in range(u + 1, n):
                e = 0.0
                for c in range(dim):
                    diff = coords[u, c] - coords[v, c]
                    e += diff * diff
                ratio = dist[v] / sqrt(e)
                pairs += 1
                if ratio > best:
                    best = ratio
                    bu = u
                    bv = v
                if vu < 0 and ratio > limit:
                    vu = u
                    vv = v
    return best, bu, bv, vu, vv, pairs


def stretch_pairs(const int64_t[::1] ptr, const int64_t[::1] idx, const double[::1] wts,
                  const double[:, ::1] coords, int k, us_in, vs_in):
    us = np.ascontiguousarray(us_in, dtype=np.int64)
    vs = np.ascontiguousarray(vs_in, dtype=np.int64)
    order = np.argsort(us, kind="stable")
    cdef int64_t[::1] o = order
    cdef int64_t[::1] U = us
    cdef int64_t[::1] V = vs
    cdef Py_ssize_t n = ptr.shape[0] - 1, dim = coords.shape[1], P = us.shape[0], i, c
    out_a = np.empty(P)
    cdef double[::1] out = out_a
    dist_a = np.empty(max(n, 1))
    nxt_a = np.empty(max(n, 1))
    mark_a = np.empty(max(n, 1), dtype=np.uint8)
    cdef double[::1] dist = dist_a
    cdef double[::1] nxt = nxt_a
    cdef uint8_t[::1] mark = mark_a
    cdef vector[int64_t] f1, f2
    cdef int64_t cur = -1, u, v
    cdef double e, diff
    with nogil:
        for i in range(P):
            u = U[o[i]]
            v = V[o[i]]
            if u != cur:
                _hop_limited(ptr, idx, wts, u, k, &dist[0], &nxt[0], f1, f2, &mark[0])
                cur = u
            e = 0.0
            for c in range(dim):
                diff = coords[u, c] - coords[v, c]
                e += diff * diff
            out[o[i]] = dist[v] / sqrt(e)
    return out_a


def greedy_cover(const double[:, ::1] D, const int64_t[:, ::1] near, double eps, int extra, int64_t max_trees):
    cdef Py_ssize_t n = D.shape[0], K = near.shape[1], p, q, i, j, m, c, ne, cand_n
    cdef double factor = 1.0 + eps
    T_a = np.zeros((max(n, 1), max(n, 1)))
    unc_a = np.tril(np.ones((n, n), dtype=np.uint8), -1)
    cert_a = np.full((n, n), -1, dtype=np.int32)
    cdef double[:, ::1] T = T_a
    cdef uint8_t[:, ::1] unc = unc_a
    cdef int[:, ::1] cert = cert_a
    cnt_a = np.arange(n, dtype=np.int64)
    cdef int64_t[::1] cnt = cnt_a
    cdef int64_t remaining = n * (n - 1) // 2, t = 0, a, best, bestc
    cdef double dpa, bestd, lim
    cdef vector[int64_t] lst, cands, ex_q, parents
    cdef vector[double] ex_d
    stamp_a = np.full(max(n, 1), -1, dtype=np.int64)
    cdef int64_t[::1] stamp = stamp_a
    cdef int64_t stamp_id = 0
    with nogil:
        while remaining > 0 and (max_trees < 0 or t < max_trees):
            parents.push_back(-1)
            for p in range(1, n):
                m = 0
                if cnt[p] > 0:
                    lst.clear()
                    ex_q.clear()
                    ex_d.clear()
                    for q in range(p):
                        if unc[p, q]:
                            lst.push_back(q)
                            # keep the `extra` nearest uncovered partners, ties by index
                            dpa = D[p, q]
                            ne = <Py_ssize_t>ex_q.size()
                            if ne < extra or dpa < ex_d[ne - 1]:
                                if ne < extra:
                                    ex_q.push_back(q)
                                    ex_d.push_back(dpa)
                                    ne += 1
                                j = ne - 1
                                while j > 0 and ex_d[j - 1] > dpa:
                                    ex_q[j] = ex_q[j - 1]
                                    ex_d[j] = ex_d[j - 1]
                                    j -= 1
                                ex_q[j] = q
                                ex_d[j] = dpa
                    m = <Py_ssize_t>lst.size()
                    cands.clear()
                    stamp_id += 1
                    for j in range(K):
                        a = near[p, j]
                        if a >= 0 and stamp[a] != stamp_id:
                            stamp[a] = stamp_id
                            cands.push_back(a)
                    for j in range(<Py_ssize_t>ex_q.size()):
                        a = ex_q[j]
                        if stamp[a] != stamp_id:
                            stamp[a] = stamp_id
                            cands.push_back(a)
                    best = -1
                    bestc = -1
                    bestd = INFINITY
                    cand_n = <Py_ssize_t>cands.size()
                    for j in range(cand_n):
                        a = cands[j]
                        dpa = D[p, a]
                        c = 0
                        for i in range(m):
                            q = lst[i]
                            if dpa + T[a, q] <= factor * D[p, q]:
                                c += 1
                        if c > bestc or (c == bestc and (dpa < bestd or (dpa == bestd and a < best))):
                            best = a
                            bestc = c
                            bestd = dpa
                    a = best
                else:
                    a = near[p, 0]
                parents.push_back(a)
                dpa = D[p, a]
                for q in range(p):
                    T[p, q] = dpa + T[a, q]
                    T[q, p] = T[p, q]
                T[p, p] = 0.0
                for i in range(m):
                    q = lst[i]
                    if T[p, q] <= factor * D[p, q]:
                        unc[p, q] = 0
                        cert[p, q] = <int>t
                        cnt[p] -= 1
                        remaining -= 1
            t += 1
    par = np.array(<int64_t[:parents.size()]>parents.data(), dtype=np.int64) if parents.size() else np.zeros(0, np.int64)
    return par.reshape(t, n) if t else np.zeros((0, n), np.int64), cert_a, int(t), int(remaining)
