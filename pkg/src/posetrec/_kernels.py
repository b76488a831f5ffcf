"""Compiled inner loops: canonical form, memo table, game search, enumeration.

Complexes are passed as ``W`` uint64 words holding the characteristic vector
(``W = 1`` for ``n <= 6``, else ``2**n // 64``). Every bit operation below is
kept in uint64; mixing signed and unsigned ints makes numba fall back to
float arithmetic.
"""
from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np
from numba import njit

U0 = np.uint64(0)
U1 = np.uint64(1)
U63 = np.uint64(63)
MASK64 = (1 << 64) - 1

GRUNDY = 0
WINLOSS = 1

OK = 0
LIMIT = 1

EMPTY_SLOT = np.uint8(0)


def nwords(n: int) -> int:
    return 1 if n <= 6 else (1 << n) >> 6


def to_words(bits: int, n: int) -> np.ndarray:
    W = nwords(n)
    return np.array([(bits >> (64 * i)) & MASK64 for i in range(W)], dtype=np.uint64)


def from_words(words) -> int:
    out = 0
    for i, w in enumerate(words):
        out |= int(w) << (64 * i)
    return out


@lru_cache(maxsize=None)
def up_table(n: int) -> np.ndarray:
    """Row ``f`` is the characteristic vector of all supersets of face ``f``."""
    from .complex import up_mask

    return np.stack([to_words(up_mask(n, f), n) for f in range(1 << n)])


@lru_cache(maxsize=None)
def down_table(n: int) -> np.ndarray:
    from .complex import down_mask

    return np.stack([to_words(down_mask(f), n) for f in range(1 << n)])


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _bit(A, m):
    return (A[m >> 6] >> np.uint64(m & 63)) & U1


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _cmp_chunk(c0, c1, b0, b1):
    """-1 if (c0, c1) is the better chunk, 0 if equal, 1 if worse."""
    d = c0 ^ b0
    if d != U0:
        low = d & (~d + U1)
        if c0 & low:
            return -1
        return 1
    d = c1 ^ b1
    if d != U0:
        low = d & (~d + U1)
        if c1 & low:
            return -1
        return 1
    return 0


@njit(cache=True)
def _swap_invariant(A, n, u, v):
    """Whether swapping ``u`` and ``v`` fixes ``A`` (invariants assumed equal)."""
    ub = 1 << u
    vb = 1 << v
    rest = ((1 << n) - 1) & ~ub & ~vb
    s = rest
    while True:
        if _bit(A, s | ub) and not _bit(A, s | vb):
            return False
        if s == 0:
            return True
        s = (s - 1) & rest


@njit(cache=True)
def _canon(n, A, out, witness, inv, order, sa, sb, img, counts, twin):
    """Write the canonical words of ``A`` into ``out`` and a witness permutation.

    ``sa``/``sb`` hold partial assignments (one row per survivor); ``img``
    holds the old masks of the new subsets of placed labels.
    """
    W = A.shape[0]
    for w in range(W):
        out[w] = U0
    if n == 0:
        out[0] = A[0]
        return

    # vertex invariants packed 6 bits per size, size 1 most significant
    for v in range(n):
        for j in range(n + 1):
            counts[v, j] = 0
    for f in range(1, 1 << n):
        if _bit(A, f):
            s = _popcount(f)
            g = f
            v = 0
            while g:
                if g & 1:
                    counts[v, s] += 1
                g >>= 1
                v += 1
    for v in range(n):
        key = np.uint64(0)
        for j in range(1, n + 1):
            key = (key << np.uint64(6)) | np.uint64(counts[v, j])
        inv[v] = key
        order[v] = v
    # insertion sort by (invariant, vertex)
    for i in range(1, n):
        cur = order[i]
        j = i - 1
        while j >= 0 and inv[order[j]] > inv[cur]:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = cur

    # twin classes: same invariant and the swap is an automorphism
    for i in range(n):
        v = order[i]
        twin[v] = v
        for j in range(i):
            u = order[j]
            if twin[u] != u or inv[u] != inv[v]:
                continue
            if _swap_invariant(A, n, u, v):
                twin[v] = u
                break

    out[0] = A[0] & U1
    nsurv = 1
    cur_s = sa
    nxt_s = sb
    for t in range(n):
        cls = inv[order[t]]
        have_best = False
        b0 = U0
        b1 = U0
        nnext = 0
        half = 1 << t
        for si in range(nsurv):
            img[0] = 0
            for i in range(t):
                bv = 1 << cur_s[si, i]
                step = 1 << i
                for s in range(step):
                    img[s + step] = img[s] | bv
            tried = 0
            for ci in range(n):
                v = order[ci]
                if inv[v] != cls:
                    continue
                used = False
                for i in range(t):
                    if cur_s[si, i] == v:
                        used = True
                        break
                if used or (tried >> twin[v]) & 1:
                    continue
                tried |= 1 << twin[v]
                vb = 1 << v
                c0 = U0
                c1 = U0
                for s in range(half):
                    m = img[s] | vb
                    if _bit(A, m):
                        if s < 64:
                            c0 |= U1 << np.uint64(s)
                        else:
                            c1 |= U1 << np.uint64(s - 64)
                if have_best:
                    cmp = _cmp_chunk(c0, c1, b0, b1)
                else:
                    cmp = -1
                if cmp < 0:
                    have_best = True
                    b0 = c0
                    b1 = c1
                    nnext = 0
                if cmp <= 0:
                    for i in range(t):
                        nxt_s[nnext, i] = cur_s[si, i]
                    nxt_s[nnext, t] = v
                    nnext += 1
        if t < 6:
            out[0] |= b0 << np.uint64(half)
        elif t == 6:
            out[1] = b0
        else:
            out[2] = b0
            out[3] = b1
        tmp = cur_s
        cur_s = nxt_s
        nxt_s = tmp
        nsurv = nnext

    for t in range(n):
        witness[cur_s[0, t]] = t


@njit(cache=True)
def _alloc_scratch(n):
    inv = np.zeros(8, np.uint64)
    order = np.zeros(8, np.int64)
    nmax = 1
    for i in range(2, n + 1):
        nmax *= i
    sa = np.zeros((nmax, 8), np.int64)
    sb = np.zeros((nmax, 8), np.int64)
    img = np.zeros(256, np.int64)
    witness = np.zeros(8, np.int64)
    counts = np.zeros((8, 9), np.int64)
    twin = np.zeros(8, np.int64)
    return inv, order, sa, sb, img, witness, counts, twin


_local = threading.local()


def _scratch(n: int):
    cache = getattr(_local, "scratch", None)
    if cache is None:
        cache = _local.scratch = {}
    if n not in cache:
        cache[n] = _alloc_scratch(n)
    return cache[n]


def canon_words(n: int, A: np.ndarray):
    inv, order, sa, sb, img, witness, counts, twin = _scratch(n)
    out = np.zeros(A.shape[0], np.uint64)
    _canon(n, A, out, witness, inv, order, sa, sb, img, counts, twin)
    return out, witness[:n].copy()


def canonical_bits(n: int, bits: int) -> int:
    out, _ = canon_words(n, to_words(bits, n))
    return from_words(out)


def canonical_with_witness(n: int, bits: int) -> tuple[int, tuple[int, ...]]:
    out, witness = canon_words(n, to_words(bits, n))
    return from_words(out), tuple(int(w) for w in witness)


# ---------------------------------------------------------------------------
# memo table: open addressing, linear probing
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _mix(h):
    h ^= h >> np.uint64(30)
    h *= np.uint64(0xBF58476D1CE4E5B9)
    h ^= h >> np.uint64(27)
    h *= np.uint64(0x94D049BB133111EB)
    h ^= h >> np.uint64(31)
    return h


@njit(cache=True)
def _hash(n, key):
    h = np.uint64(n + 1) * np.uint64(0x9E3779B97F4A7C15)
    for w in range(key.shape[0]):
        h = _mix(h ^ key[w])
    return h


@njit(cache=True)
def table_find(keys, tags, n, key):
    """Slot holding ``key`` or, if absent, the free slot where it would go."""
    cap = tags.shape[0]
    mask = np.uint64(cap - 1)
    i = np.int64(_hash(n, key) & mask)
    tag = np.uint8(n + 1)
    W = key.shape[0]
    while True:
        t = tags[i]
        if t == EMPTY_SLOT:
            return i, False
        if t == tag:
            same = True
            for w in range(W):
                if keys[i, w] != key[w]:
                    same = False
                    break
            if same:
                return i, True
        i = (i + 1) & (cap - 1)


@njit(cache=True)
def table_grow(keys, tags, vals):
    cap = tags.shape[0] * 2
    W = keys.shape[1]
    nkeys = np.zeros((cap, W), np.uint64)
    ntags = np.zeros(cap, np.uint8)
    nvals = np.zeros(cap, np.int16)
    for i in range(tags.shape[0]):
        if tags[i] != EMPTY_SLOT:
            j, _ = table_find(nkeys, ntags, np.int64(tags[i]) - 1, keys[i])
            for w in range(W):
                nkeys[j, w] = keys[i, w]
            ntags[j] = tags[i]
            nvals[j] = vals[i]
    return nkeys, ntags, nvals


def new_table(W: int, capacity: int = 1 << 12):
    cap = 1
    while cap < capacity:
        cap <<= 1
    return np.zeros((cap, W), np.uint64), np.zeros(cap, np.uint8), np.zeros(cap, np.int16)


def table_get(keys, tags, vals, n: int, key_bits: int):
    if keys.shape[1] != nwords(n):
        return None
    i, found = table_find(keys, tags, n, to_words(key_bits, n))
    return int(vals[i]) if found else None


# ---------------------------------------------------------------------------
# game search
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def game_search(n, root, mode, short, moves, up, keys, tags, vals, count, limit):
    """Evaluate Chomp position ``root`` (must contain ∅).

    ``mode`` is GRUNDY (mex over child values) or WINLOSS (1 = first player
    wins, 0 = loses). With ``short`` set, a WINLOSS parent stops at its first
    losing child. Moves are tried in the order of ``moves``. Returns
    ``(status, value, visited, stored, keys, tags, vals, count)``.
    """
    W = root.shape[0]
    inv, order, sa, sb, img, witness, counts, twin = _alloc_scratch(n)
    nfaces = 1 << n
    maxdepth = nfaces + 2
    fpos = np.zeros((maxdepth, W), np.uint64)
    fnext = np.zeros(maxdepth, np.int64)
    fseen = np.zeros((maxdepth, 4), np.uint64)
    child = np.zeros(W, np.uint64)
    ck = np.zeros(W, np.uint64)
    nmoves = moves.shape[0]
    visited = 1
    stored = 0

    _canon(n, root, ck, witness, inv, order, sa, sb, img, counts, twin)
    terminal = ck[0] == U1
    for w in range(1, W):
        if ck[w] != U0:
            terminal = False
    if terminal:
        return OK, 0, visited, stored, keys, tags, vals, count
    slot, found = table_find(keys, tags, n, ck)
    if found:
        return OK, np.int64(vals[slot]), visited, stored, keys, tags, vals, count

    depth = 1
    for w in range(W):
        fpos[0, w] = ck[w]
    fnext[0] = 0
    for j in range(4):
        fseen[0, j] = U0

    result = 0
    while depth > 0:
        d = depth - 1
        done = False
        val = 0
        idx = fnext[d]
        while idx < nmoves:
            x = moves[idx]
            if _bit(fpos[d], x):
                break
            idx += 1
        if idx >= nmoves:
            done = True
            if mode == GRUNDY:
                g = 0
                while (fseen[d, g >> 6] >> np.uint64(g & 63)) & U1:
                    g += 1
                val = g
            else:
                val = np.int64(fseen[d, 0] & U1)
        else:
            fnext[d] = idx + 1
            x = moves[idx]
            is_term = True
            for w in range(W):
                child[w] = fpos[d, w] & ~up[x, w]
                if w == 0:
                    if child[w] != U1:
                        is_term = False
                elif child[w] != U0:
                    is_term = False
            visited += 1
            cv = 0
            if not is_term:
                _canon(n, child, ck, witness, inv, order, sa, sb, img, counts, twin)
                slot, found = table_find(keys, tags, n, ck)
                if found:
                    cv = np.int64(vals[slot])
                else:
                    for w in range(W):
                        fpos[depth, w] = ck[w]
                    fnext[depth] = 0
                    for j in range(4):
                        fseen[depth, j] = U0
                    depth += 1
                    continue
            fseen[d, cv >> 6] |= U1 << np.uint64(cv & 63)
            if mode == WINLOSS and short and cv == 0:
                done = True
                val = 1

        while done:
            # store frame d
            if limit >= 0 and count >= limit:
                return LIMIT, -1, visited, stored, keys, tags, vals, count
            if 10 * (count + 1) > 6 * tags.shape[0]:
                keys, tags, vals = table_grow(keys, tags, vals)
            slot, found = table_find(keys, tags, n, fpos[d])
            for w in range(W):
                keys[slot, w] = fpos[d, w]
            tags[slot] = np.uint8(n + 1)
            vals[slot] = np.int16(val)
            count += 1
            stored += 1
            depth -= 1
            if depth == 0:
                result = val
                break
            d = depth - 1
            fseen[d, val >> 6] |= U1 << np.uint64(val & 63)
            if mode == WINLOSS and short and val == 0:
                val = 1
            else:
                done = False

    return OK, result, visited, stored, keys, tags, vals, count


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


@njit(cache=True)
def enum_downsets(n, down, unlabeled, keys, tags, vals, count):
    """Visit every downward-closed family on ``n`` labeled points.

    Faces are decided in descending mask order, so every superset of a face
    is settled before the face itself; a face already forced by an included
    superset has no choice. Returns ``(labeled, keys, tags, vals, count)``;
    when ``unlabeled`` is set the canonical keys are collected in the table.
    """
    W = down.shape[1]
    nf = 1 << n
    inv, order, sa, sb, img, witness, counts, twin = _alloc_scratch(n)
    ck = np.zeros(W, np.uint64)
    sD = np.zeros((2 * nf + 4, W), np.uint64)
    sF = np.zeros(2 * nf + 4, np.int64)
    sp = 1
    sF[0] = nf - 1
    labeled = 0
    while sp > 0:
        sp -= 1
        f = sF[sp]
        while f >= 0 and _bit(sD[sp], f):
            f -= 1
        if f < 0:
            labeled += 1
            if unlabeled:
                _canon(n, sD[sp], ck, witness, inv, order, sa, sb, img, counts, twin)
                slot, found = table_find(keys, tags, n, ck)
                if not found:
                    if 10 * (count + 1) > 6 * tags.shape[0]:
                        keys, tags, vals = table_grow(keys, tags, vals)
                        slot, found = table_find(keys, tags, n, ck)
                    for w in range(W):
                        keys[slot, w] = ck[w]
                    tags[slot] = np.uint8(n + 1)
                    count += 1
            continue
        # exclude f (stays at sp), include f (pushed above)
        for w in range(W):
            sD[sp + 1, w] = sD[sp, w] | down[f, w]
        sF[sp] = f - 1
        sF[sp + 1] = f - 1
        sp += 2
    return labeled, keys, tags, vals, count


@njit(cache=True)
def table_keys(keys, tags):
    cnt = 0
    for i in range(tags.shape[0]):
        if tags[i] != EMPTY_SLOT:
            cnt += 1
    out = np.zeros((cnt, keys.shape[1]), np.uint64)
    j = 0
    for i in range(tags.shape[0]):
        if tags[i] != EMPTY_SLOT:
            for w in range(keys.shape[1]):
                out[j, w] = keys[i, w]
            j += 1
    return out


@njit(cache=True)
def deletion_layer(n, layer, up):
    """Canonical classes reachable from ``layer`` by deleting one maximal face."""
    W = layer.shape[1]
    nf = 1 << n
    inv, order, sa, sb, img, witness, counts, twin = _alloc_scratch(n)
    keys = np.zeros((1024, W), np.uint64)
    tags = np.zeros(1024, np.uint8)
    vals = np.zeros(1024, np.int16)
    count = 0
    child = np.zeros(W, np.uint64)
    ck = np.zeros(W, np.uint64)
    for r in range(layer.shape[0]):
        A = layer[r]
        for f in range(nf):
            if not _bit(A, f):
                continue
            # maximal iff A meets the supersets of f only in f itself
            maximal = True
            for w in range(W):
                x = A[w] & up[f, w]
                if w == (f >> 6):
                    x &= ~(U1 << np.uint64(f & 63))
                if x != U0:
                    maximal = False
                    break
            if not maximal:
                continue
            for w in range(W):
                child[w] = A[w]
            child[f >> 6] &= ~(U1 << np.uint64(f & 63))
            _canon(n, child, ck, witness, inv, order, sa, sb, img, counts, twin)
            slot, found = table_find(keys, tags, n, ck)
            if not found:
                if 10 * (count + 1) > 6 * tags.shape[0]:
                    keys, tags, vals = table_grow(keys, tags, vals)
                    slot, found = table_find(keys, tags, n, ck)
                for w in range(W):
                    keys[slot, w] = ck[w]
                tags[slot] = np.uint8(n + 1)
                count += 1
    return table_keys(keys, tags)


@njit(cache=True)
def _grow_acc(keys, tags, acc):
    cap = tags.shape[0] * 2
    nkeys = np.zeros((cap, keys.shape[1]), np.uint64)
    ntags = np.zeros(cap, np.uint8)
    nacc = np.zeros((cap, acc.shape[1]), np.uint64)
    for i in range(tags.shape[0]):
        if tags[i] != EMPTY_SLOT:
            j, _ = table_find(nkeys, ntags, np.int64(tags[i]) - 1, keys[i])
            nkeys[j] = keys[i]
            ntags[j] = tags[i]
            nacc[j] = acc[i]
    return nkeys, ntags, nacc


@njit(cache=True)
def count_layer(n, layer, counts, up, moduli):
    """Push path counts from ``layer`` to the classes one deletion below.

    ``counts[r]`` holds the count of row ``r`` modulo each entry of
    ``moduli`` (all below 2**63, so a sum of two residues fits). Returns the
    next layer, its counts and the number of children generated.
    """
    W = layer.shape[1]
    P = moduli.shape[0]
    nf = 1 << n
    inv, order, sa, sb, img, witness, cnt, twin = _alloc_scratch(n)
    keys = np.zeros((1024, W), np.uint64)
    tags = np.zeros(1024, np.uint8)
    acc = np.zeros((1024, P), np.uint64)
    size = 0
    children = 0
    child = np.zeros(W, np.uint64)
    ck = np.zeros(W, np.uint64)
    for r in range(layer.shape[0]):
        A = layer[r]
        for f in range(nf):
            if not _bit(A, f):
                continue
            maximal = True
            for w in range(W):
                x = A[w] & up[f, w]
                if w == (f >> 6):
                    x &= ~(U1 << np.uint64(f & 63))
                if x != U0:
                    maximal = False
                    break
            if not maximal:
                continue
            children += 1
            for w in range(W):
                child[w] = A[w]
            child[f >> 6] &= ~(U1 << np.uint64(f & 63))
            _canon(n, child, ck, witness, inv, order, sa, sb, img, cnt, twin)
            slot, found = table_find(keys, tags, n, ck)
            if not found:
                if 10 * (size + 1) > 6 * tags.shape[0]:
                    keys, tags, acc = _grow_acc(keys, tags, acc)
                    slot, found = table_find(keys, tags, n, ck)
                for w in range(W):
                    keys[slot, w] = ck[w]
                tags[slot] = np.uint8(n + 1)
                size += 1
            for p in range(P):
                s = acc[slot, p] + counts[r, p]
                if s >= moduli[p]:
                    s -= moduli[p]
                acc[slot, p] = s
    out = np.zeros((size, W), np.uint64)
    out_counts = np.zeros((size, P), np.uint64)
    j = 0
    for i in range(tags.shape[0]):
        if tags[i] != EMPTY_SLOT:
            out[j] = keys[i]
            out_counts[j] = acc[i]
            j += 1
    return out, out_counts, children
