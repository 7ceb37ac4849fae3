"""Pure-Python kernels.  Same signatures and results as the compiled ``_core``."""

from __future__ import annotations

import numpy as np

BACKEND = "python"
INF_HOPS = -1


def preorder(child_ptr, child_idx, root):
    ptr = child_ptr.tolist()
    idx = child_idx.tolist()
    out = []
    stack = [int(root)]
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(reversed(idx[ptr[v]:ptr[v + 1]]))
    return np.array(out, dtype=np.int64)


def _prune_lists(g, p, r):
    """Prune a pre-order tree given as lists; returns new lists and the kept positions."""
    m = len(p)
    has = r[:]
    nonempty = [0] * m
    for i in range(m - 1, 0, -1):
        if has[i]:
            pi = p[i]
            nonempty[pi] += 1
            has[pi] = 1
    kanc = [-1] * m
    newidx = [-1] * m
    keep, g2, p2, r2 = [], [], [], []
    for i in range(m):
        pi = p[i]
        up = kanc[pi] if pi >= 0 else -1
        if r[i] or nonempty[i] >= 2:
            newidx[i] = len(keep)
            keep.append(i)
            g2.append(g[i])
            p2.append(newidx[up] if up >= 0 else -1)
            r2.append(r[i])
            kanc[i] = i
        else:
            kanc[i] = up
    return g2, p2, r2, keep


def prune_preorder(par, req):
    p = par.tolist()
    r = [int(x) for x in req.tolist()]
    _, p2, _, keep = _prune_lists(list(range(len(p))), p, r)
    return np.array(keep, dtype=np.int64), np.array(p2, dtype=np.int64), 2 * len(p)


def decomp_preorder(par, req, ell):
    p = par.tolist()
    m = len(p)
    size = [int(x) for x in req.tolist()]
    cut = [0] * m
    for i in range(m - 1, -1, -1):
        if size[i] > ell:
            cut[i] = 1
        elif i:
            size[p[i]] += size[i]
    return np.array(cut, dtype=np.uint8), np.array(size, dtype=np.int64), m


def spanner_edges(gid, par, req, k, ell_table):
    """Tree 1-spanner shortcut edges for a pruned tree in pre-order form.

    Tasks are (gid, par, req, k) tuples on an explicit stack; ``gid`` carries the
    caller's vertex ids through every recursion level.  Returns the
    de-duplicated edge array, a work counter and audit counters.
    """
    table = [row.tolist() for row in ell_table]
    out = set()
    add = out.add
    work = calls = epp_excess = shrink_fail = 0
    stack = [(gid.tolist(), par.tolist(), [int(x) for x in req.tolist()], int(k))]
    while stack:
        g, p, r, kk = stack.pop()
        calls += 1
        m = len(p)
        n = sum(r)
        work += m
        if n <= kk + 1:
            for i in range(1, m):
                a, b = g[p[i]], g[i]
                add((a, b) if a < b else (b, a))
            if n == kk + 1:
                ch = [g[i] for i in range(1, m) if p[i] == 0]
                if len(ch) == 2:
                    add((min(ch), max(ch)))
            continue
        ell = table[kk - 2][n]
        size = r[:]
        cut = [0] * m
        for i in range(m - 1, -1, -1):
            if size[i] > ell:
                cut[i] = 1
            elif i:
                size[p[i]] += size[i]
        croot = [-1] * m
        for i in range(m):
            if not cut[i]:
                pi = p[i]
                croot[i] = i if (pi < 0 or cut[pi]) else croot[pi]
        border = {}
        for i in range(m):
            pi = p[i]
            if pi < 0:
                continue
            if cut[i]:
                if not cut[pi]:
                    border.setdefault(croot[pi], []).append(i)
            elif cut[pi] and croot[i] == i:
                border.setdefault(i, []).append(pi)
        epp = 0
        for i in range(m):
            if r[i] and not cut[i]:
                for b in border.get(croot[i], ()):
                    a, c = g[b], g[i]
                    add((a, c) if a < c else (c, a))
                    epp += 1
        if epp > 2 * n:
            epp_excess += 1
        cv = [i for i in range(m) if cut[i]]
        work += 4 * m + epp
        if kk == 3:
            for x in range(len(cv)):
                for y in range(x + 1, len(cv)):
                    a, c = g[cv[x]], g[cv[y]]
                    add((a, c) if a < c else (c, a))
            work += len(cv) * len(cv)
        elif kk >= 4 and len(cv) >= 2:
            if len(cv) >= n:
                shrink_fail += 1
            g2, p2, r2, _ = _prune_lists(g, p, cut)
            work += m
            stack.append((g2, p2, r2, kk - 2))
        members = {}
        for i in range(m):
            if not cut[i]:
                members.setdefault(croot[i], []).append(i)
        for c, mem in members.items():
            nreq = 0
            for i in mem:
                nreq += r[i]
            if nreq < 2:
                continue
            if nreq >= n:
                shrink_fail += 1
            local = {i: j for j, i in enumerate(mem)}
            gg = [g[i] for i in mem]
            pp = [-1 if i == c else local[p[i]] for i in mem]
            rr = [r[i] for i in mem]
            g2, p2, r2, _ = _prune_lists(gg, pp, rr)
            work += 2 * len(mem)
            stack.append((g2, p2, r2, kk))
    if out:
        edges = np.array(sorted(out), dtype=np.int64)
    else:
        edges = np.zeros((0, 2), dtype=np.int64)
    return edges, work, {"calls": calls, "epp_excess": epp_excess, "shrink_fail": shrink_fail}


def monotone_scan(tree_ptr, tree_idx, h_ptr, h_idx, sources, target_mask):
    """Fewest-edge tree-monotone distances from each source to every flagged
    target with a larger id.  A DFS from the source keeps its current stack
    flagged; the stack is exactly the tree path, so the last hop into ``v``
    must come from a flagged H-neighbour.  Returns (max, u, v, pairs) with
    max = -1 when some pair is unreachable (u, v then name the first such pair)."""
    tp, ti = tree_ptr.tolist(), tree_idx.tolist()
    hp, hi = h_ptr.tolist(), h_idx.tolist()
    tm = target_mask.tolist()
    n = len(tp) - 1
    onstack = [False] * n
    dist = [0] * n
    big = n + 1
    best, bu, bv, pairs = 0, -1, -1, 0
    for u in sources.tolist():
        dist[u] = 0
        onstack[u] = True
        stack = [(u, -1, tp[u])]
        while stack:
            v, parent, it = stack[-1]
            if it < tp[v + 1]:
                stack[-1] = (v, parent, it + 1)
                w = ti[it]
                if w == parent:
                    continue
                d = big
                for j in range(hp[w], hp[w + 1]):
                    x = hi[j]
                    if onstack[x] and dist[x] + 1 < d:
                        d = dist[x] + 1
                dist[w] = d
                onstack[w] = True
                stack.append((w, v, tp[w]))
                if w > u and tm[w]:
                    pairs += 1
                    if d >= big:
                        return -1, u, w, pairs
                    if d > best:
                        best, bu, bv = d, u, w
            else:
                onstack[v] = False
                stack.pop()
    return best, bu, bv, pairs


def hop_limited(ptr, idx, wts, source, k):
    """dist[v] = least weight of a path from source to v with at most k edges."""
    n = ptr.shape[0] - 1
    dist = np.full(n, np.inf)
    dist[source] = 0.0
    src = np.repeat(np.arange(n), np.diff(ptr))
    order = np.argsort(idx, kind="stable")
    dst_sorted = idx[order]
    src_sorted = src[order]
    w_sorted = wts[order]
    starts = np.flatnonzero(np.r_[True, dst_sorted[1:] != dst_sorted[:-1]]) if dst_sorted.size else np.zeros(0, np.int64)
    heads = dst_sorted[starts]
    for _ in range(k):
        cand = dist[src_sorted] + w_sorted
        if not cand.size:
            break
        best = np.minimum.reduceat(cand, starts)
        new = dist.copy()
        new[heads] = np.minimum(new[heads], best)
        if np.array_equal(new, dist):
            break
        dist = new
    return dist


def stretch_scan(ptr, idx, wts, coords, k, sources, eps, slack):
    """Max over (u in sources, v > u) of hop-limited distance / Euclidean distance.
    Returns (max_ratio, u, v, first_violation_u, first_violation_v, pairs)."""
    n = ptr.shape[0] - 1
    best, bu, bv = 1.0 if n >= 2 else 0.0, -1, -1
    vu = vv = -1
    pairs = 0
    limit = (1.0 + eps) * (1.0 + slack)
    for u in sources.tolist():
        if u >= n - 1:
            continue
        dist = hop_limited(ptr, idx, wts, u, k)
        tail = np.arange(u + 1, n)
        eu = np.sqrt(((coords[tail] - coords[u]) ** 2).sum(axis=1))
        ratio = dist[tail] / eu
        pairs += tail.size
        j = int(np.argmax(ratio))
        if ratio[j] > best:
            best, bu, bv = float(ratio[j]), u, int(tail[j])
        if vu < 0:
            bad = np.flatnonzero(ratio > limit)
            if bad.size:
                vu, vv = u, int(tail[bad[0]])
    return best, bu, bv, vu, vv, pairs


def stretch_pairs(ptr, idx, wts, coords, k, us, vs):
    """Hop-limited stretch for explicit pairs (grouped by source)."""
    out = np.empty(us.shape[0])
    order = np.argsort(us, kind="stable")
    i = 0
    while i < order.shape[0]:
        u = us[order[i]]
        j = i
        while j < order.shape[0] and us[order[j]] == u:
            j += 1
        dist = hop_limited(ptr, idx, wts, int(u), k)
        sel = order[i:j]
        tv = vs[sel]
        eu = np.sqrt(((coords[tv] - coords[u]) ** 2).sum(axis=1))
        out[sel] = dist[tv] / eu
        i = j
    return out


def greedy_cover(D, near, eps, extra, max_trees):
    """Grow increasing point trees (parent index < child index) one at a time.
    Point p picks, among its K nearest lower-index points and its ``extra``
    nearest still-uncovered lower partners, the parent whose tree path serves
    the most uncovered pairs (p, q), q < p.  Returns (parents (t, n),
    cert (n, n) lower triangle = first serving tree or -1, t, uncovered)."""
    n = D.shape[0]
    factor = 1.0 + eps
    unc = np.tril(np.ones((n, n), dtype=bool), -1)
    cert = np.full((n, n), -1, dtype=np.int32)
    remaining = n * (n - 1) // 2
    rows = []
    t = 0
    while remaining > 0 and (max_trees < 0 or t < max_trees):
        T = np.zeros((n, n))
        par = np.full(n, -1, dtype=np.int64)
        for p in range(1, n):
            lst = np.flatnonzero(unc[p, :p])
            if lst.size:
                ex = lst[np.lexsort((lst, D[p, lst]))[:extra]]
                nr = near[p][near[p] >= 0]
                cands = np.concatenate([nr, ex[~np.isin(ex, nr)]])
                dpa = D[p, cands]
                ok = (dpa[:, None] + T[np.ix_(cands, lst)]) <= factor * D[p, lst][None, :]
                counts = ok.sum(axis=1)
                j = np.lexsort((cands, dpa, -counts))[0]
                a = int(cands[j])
            else:
                a = int(near[p, 0])
            par[p] = a
            T[p, :p] = D[p, a] + T[a, :p]
            T[:p, p] = T[p, :p]
            if lst.size:
                hit = lst[T[p, lst] <= factor * D[p, lst]]
                unc[p, hit] = False
                cert[p, hit] = t
                remaining -= hit.size
        rows.append(par)
        t += 1
    parents = np.vstack(rows) if rows else np.zeros((0, n), dtype=np.int64)
    return parents, cert, t, remaining
