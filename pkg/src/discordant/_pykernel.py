"""Pure-Python reference kernels.

These mirror ``_ckernel.pyx`` operation for operation (same draws, same
swap-remove order) so both backends produce identical trajectories.
"""

PUSH, PULL, OBLIVIOUS = 0, 1, 2
_BLOCK = 4096


def run(indptr, indices, edge_ids, eu, ev, opinions, proto, bitgen, cutoff, trace=None):
    """Run one trajectory in place on ``opinions``; return ``(steps, |K| left)``."""
    import numpy as np

    gen = np.random.Generator(bitgen)
    indptr = indptr.tolist()
    indices = indices.tolist()
    edge_ids = edge_ids.tolist()
    eu = eu.tolist()
    ev = ev.tolist()
    ops = opinions.tolist()
    n = len(ops)
    m = len(eu)

    dc = [0] * n
    dl: list[int] = []
    dp = [-1] * n
    kl: list[int] = []
    kp = [-1] * m
    for e in range(m):
        if ops[eu[e]] != ops[ev[e]]:
            kp[e] = len(kl)
            kl.append(e)
            dc[eu[e]] += 1
            dc[ev[e]] += 1
    for v in range(n):
        if dc[v]:
            dp[v] = len(dl)
            dl.append(v)

    def d_add(x):
        dp[x] = len(dl)
        dl.append(x)

    def d_del(x):
        i = dp[x]
        last = dl.pop()
        if last != x:
            dl[i] = last
            dp[last] = i
        dp[x] = -1

    def flip(x):
        ops[x] ^= 1
        ox = ops[x]
        for k in range(indptr[x], indptr[x + 1]):
            w = indices[k]
            e = edge_ids[k]
            if ops[w] != ox:
                dc[w] += 1
                dc[x] += 1
                kp[e] = len(kl)
                kl.append(e)
                if dc[w] == 1:
                    d_add(w)
            else:
                dc[w] -= 1
                dc[x] -= 1
                i = kp[e]
                last = kl.pop()
                if last != e:
                    kl[i] = last
                    kp[last] = i
                kp[e] = -1
                if dc[w] == 0:
                    d_del(w)
        if dc[x] and dp[x] < 0:
            d_add(x)
        elif not dc[x] and dp[x] >= 0:
            d_del(x)

    buf = []
    pos = 0
    t = 0
    saved = None
    while kl and t < cutoff:
        if pos + 2 > len(buf):
            saved = bitgen.state
            buf = gen.random(_BLOCK).tolist()
            pos = 0
        u1 = buf[pos]
        u2 = buf[pos + 1]
        pos += 2
        if proto == OBLIVIOUS:
            size = len(kl)
            i = int(u1 * size)
            e = kl[i if i < size else size - 1]
            if u2 < 0.5:
                change, active = eu[e], ev[e]
            else:
                change, active = ev[e], eu[e]
        else:
            size = len(dl)
            i = int(u1 * size)
            active = dl[i if i < size else size - 1]
            dd = dc[active]
            j = int(u2 * dd)
            if j >= dd:
                j = dd - 1
            oa = ops[active]
            w = -1
            for k in range(indptr[active], indptr[active + 1]):
                if ops[indices[k]] != oa:
                    if j == 0:
                        w = indices[k]
                        break
                    j -= 1
            change = w if proto == PUSH else active
        flip(change)
        t += 1
        if trace is not None:
            trace.write(f"{t} {active} {change} {len(kl)}\n")
    if saved is not None:
        # leave the stream where the compiled kernel leaves it: rewind the
        # last block and consume only the draws actually used
        bitgen.state = saved
        gen.random(pos)
    opinions[:] = ops
    return t, len(kl)


def cut_ratios(indptr, indices, eweight, vweight, out):
    """Fill ``out[mask]`` with cut(S)/min(A(S), A(S^c)) for every S of vertices ``0..n-2``.

    Subsets are visited in Gray-code order so each step toggles one vertex.
    ``out[0]`` (empty S) is set to ``inf``.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    ew = eweight.tolist()
    vw = vweight.tolist()
    n = len(vw)
    total = sum(vw)
    ins = [False] * n
    cut = 0.0
    a = 0.0
    out[0] = float("inf")
    prev = 0
    res = [float("inf")] * (1 << (n - 1))
    for i in range(1, 1 << (n - 1)):
        g = i ^ (i >> 1)
        v = (g ^ prev).bit_length() - 1
        prev = g
        delta = 0.0
        for k in range(indptr[v], indptr[v + 1]):
            if ins[indices[k]]:
                delta -= ew[k]
            else:
                delta += ew[k]
        if ins[v]:
            ins[v] = False
            cut -= delta
            a -= vw[v]
        else:
            ins[v] = True
            cut += delta
            a += vw[v]
        res[g] = cut / min(a, total - a)
    out[:] = res
