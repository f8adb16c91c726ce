"""Fast bounded enumeration of ternary co-smash kernel words.

Internal engine behind the word-oracle commutator strategy.  It walks the
tree of reduced words over three group factors depth-first, maintaining the
three factor-deletion words incrementally as stacks with one-step merge or
cancel at the seam.

Two prunes make bounds around 10 tractable on factors of order 16:

* a length bound — appending one syllable shortens each of the two
  affected deletion stacks by at most one, so a state with deletion
  lengths (l0, l1, l2) needs at least max(l0, l1, l2,
  ceil((l0+l1+l2)/2)) further syllables to empty all three;

* candidate classification — for a fixed next factor f, the post-append
  stack lengths do not depend on which element is appended except for the
  at most two elements that cancel a stack top (the inverses of the tops
  carrying factor f).  When the generic no-cancel outcome already violates
  the length bound, the whole generic block of elements is skipped in
  O(1) and only those special elements are tried.

The search body is a single flat function over int64 arrays so that it can
be jit-compiled when numba is available; the pure-Python fallback runs the
identical code.  Results are cached per (table bytes, bound) key, which
de-duplicates work across subgroup triples that renumber to the same local
multiplication tables.
"""

from __future__ import annotations

import numpy as np

from .core import FinAlgebra, Subuniverse, ValidationError

__all__ = ["ternary_kernel_words", "ternary_kernel_elements",
           "iter_word_records"]

_PUSH, _REPLACE, _POP = 0, 1, 2


def _search_body(mul, inv, ns, max_len, out):
    """Enumerate kernel words into ``out`` as [len, f0, x0, f1, x1, ...].

    Returns slots written, or -1 if ``out`` is too small.
    """
    cap = out.shape[0]
    pos = 0
    if max_len <= 0:
        return pos

    nmax = mul.shape[1]
    wfac = np.empty(max_len, dtype=np.int64)
    welt = np.empty(max_len, dtype=np.int64)
    # deletion stacks: one reduced word per deleted factor
    dfac = np.empty((3, max_len + 1), dtype=np.int64)
    delt = np.empty((3, max_len + 1), dtype=np.int64)
    dlen = np.zeros(3, dtype=np.int64)
    # per-depth undo journal: two affected stacks per appended syllable
    jstk = np.empty((max_len, 2), dtype=np.int64)
    jact = np.empty((max_len, 2), dtype=np.int64)
    jold = np.empty((max_len, 2), dtype=np.int64)
    # per-depth candidate lists (encoded f * nmax + x), built on entry
    clist = np.empty((max_len, 2 * nmax + 4), dtype=np.int64)
    clen = np.zeros(max_len, dtype=np.int64)
    cidx = np.full(max_len, -1, dtype=np.int64)
    active = np.zeros(max_len, dtype=np.int64)

    t = 0
    while t >= 0:
        if cidx[t] < 0:
            # first visit at this depth for the current parent state:
            # classify and collect viable candidate syllables
            cnt = 0
            last = wfac[t - 1] if t > 0 else -1
            budget = max_len - (t + 1)
            for f in range(3):
                if f == last:
                    continue
                d1 = 0 if f != 0 else 1
                d2 = 2 if f != 2 else 1
                l1, l2 = dlen[d1], dlen[d2]
                top1 = delt[d1, l1 - 1] if (
                    l1 > 0 and dfac[d1, l1 - 1] == f) else -1
                top2 = delt[d2, l2 - 1] if (
                    l2 > 0 and dfac[d2, l2 - 1] == f) else -1
                s1 = inv[f, top1] if top1 >= 0 else -1
                s2 = inv[f, top2] if top2 >= 0 else -1
                # generic element: merge (length kept) where the top has
                # factor f, plain push (+1) elsewhere; never a cancel
                g1 = l1 if top1 >= 0 else l1 + 1
                g2 = l2 if top2 >= 0 else l2 + 1
                g0 = dlen[f]
                total = g0 + g1 + g2
                req = (total + 1) // 2
                if g0 > req:
                    req = g0
                if g1 > req:
                    req = g1
                if g2 > req:
                    req = g2
                generic_ok = req <= budget
                if generic_ok:
                    for x in range(1, ns[f]):
                        if x != s1 and x != s2:
                            clist[t, cnt] = f * nmax + x
                            cnt += 1
                for which in range(2):
                    x = s1 if which == 0 else s2
                    if x < 0 or (which == 1 and x == s1):
                        continue
                    p1 = l1 - 1 if x == s1 else g1
                    p2 = l2 - 1 if x == s2 else g2
                    total = g0 + p1 + p2
                    req = (total + 1) // 2
                    if g0 > req:
                        req = g0
                    if p1 > req:
                        req = p1
                    if p2 > req:
                        req = p2
                    if req <= budget:
                        clist[t, cnt] = f * nmax + x
                        cnt += 1
            clen[t] = cnt
            cidx[t] = 0

        # undo the active push before trying the next sibling
        if active[t] == 1:
            for slot in (1, 0):
                d = jstk[t, slot]
                a = jact[t, slot]
                if a == _PUSH:
                    dlen[d] -= 1
                elif a == _REPLACE:
                    delt[d, dlen[d] - 1] = jold[t, slot]
                else:
                    dfac[d, dlen[d]] = wfac[t]
                    delt[d, dlen[d]] = jold[t, slot]
                    dlen[d] += 1
            active[t] = 0

        if cidx[t] >= clen[t]:
            cidx[t] = -1
            t -= 1
            continue
        enc = clist[t, cidx[t]]
        cidx[t] += 1
        f = enc // nmax
        x = enc - f * nmax

        # push syllable (f, x) onto the two deletion words that keep it
        slot = 0
        for d in range(3):
            if d == f:
                continue
            ln = dlen[d]
            if ln > 0 and dfac[d, ln - 1] == f:
                old = delt[d, ln - 1]
                merged = mul[f, old, x]
                jstk[t, slot] = d
                jold[t, slot] = old
                if merged == 0:
                    jact[t, slot] = _POP
                    dlen[d] = ln - 1
                else:
                    jact[t, slot] = _REPLACE
                    delt[d, ln - 1] = merged
            else:
                jstk[t, slot] = d
                jact[t, slot] = _PUSH
                dfac[d, ln] = f
                delt[d, ln] = x
                dlen[d] = ln + 1
            slot += 1
        wfac[t] = f
        welt[t] = x
        active[t] = 1

        if dlen[0] == 0 and dlen[1] == 0 and dlen[2] == 0:
            need = 1 + 2 * (t + 1)
            if pos + need > cap:
                return -1
            out[pos] = t + 1
            pos += 1
            for i in range(t + 1):
                out[pos] = wfac[i]
                out[pos + 1] = welt[i]
                pos += 2

        # descend only if the deletion stacks can still all empty in budget
        total = dlen[0] + dlen[1] + dlen[2]
        req = (total + 1) // 2
        for d in range(3):
            if dlen[d] > req:
                req = dlen[d]
        if t + 1 + req <= max_len and t + 1 < max_len:
            t += 1
            cidx[t] = -1
            active[t] = 0
    return pos


try:  # pragma: no cover - exercised implicitly
    from numba import njit

    _search_jit = njit(cache=True, nogil=True)(_search_body)
except Exception:  # pragma: no cover
    _search_jit = _search_body


_WORD_CACHE: dict = {}


def _local_group_tables(sub: Subuniverse) -> tuple[np.ndarray, int]:
    view = sub.as_algebra()
    alg = view.algebra
    if alg.basepoint != 0:
        raise ValidationError("word oracle needs the identity at local index 0")
    return np.asarray(alg.tables["mul"], dtype=np.int64), len(view.to_parent)


def ternary_kernel_words(subs: tuple[Subuniverse, Subuniverse, Subuniverse],
                         max_len: int) -> np.ndarray:
    """Flat record buffer of all kernel words up to ``max_len`` over the
    local multiplication tables of three subgroups (identity at index 0).

    Record format: length L followed by L (factor, local element) pairs.
    """
    tabs = []
    sizes = []
    for s in subs:
        t, n = _local_group_tables(s)
        tabs.append(t)
        sizes.append(n)
    key = (tuple(t.tobytes() for t in tabs), tuple(sizes), int(max_len))
    hit = _WORD_CACHE.get(key)
    if hit is not None:
        return hit

    nmax = max(sizes)
    mul = np.zeros((3, nmax, nmax), dtype=np.int64)
    inv = np.zeros((3, nmax), dtype=np.int64)
    for i, t in enumerate(tabs):
        mul[i, :sizes[i], :sizes[i]] = t
        for y in range(sizes[i]):
            inv[i, y] = int(np.nonzero(t[y] == 0)[0][0])
    ns = np.asarray(sizes, dtype=np.int64)
    cap = 1 << 14
    while True:
        out = np.empty(cap, dtype=np.int64)
        written = _search_jit(mul, inv, ns, int(max_len), out)
        if written >= 0:
            break
        cap *= 4
    result = out[:written].copy()
    result.setflags(write=False)
    _WORD_CACHE[key] = result
    return result


def iter_word_records(buf: np.ndarray):
    """Yield (length, flat (f, x) int array) views over a record buffer."""
    pos = 0
    n = len(buf)
    while pos < n:
        length = int(buf[pos])
        yield length, buf[pos + 1: pos + 1 + 2 * length]
        pos += 1 + 2 * length


def ternary_kernel_elements(parent: FinAlgebra,
                            subs: tuple[Subuniverse, Subuniverse, Subuniverse],
                            max_len: int) -> set[int]:
    """Evaluations in ``parent`` of all kernel words up to the bound.

    Each subgroup's local elements are mapped back through its member list
    and folded with the parent multiplication.
    """
    for s in subs:
        if s.parent is not parent:
            raise ValidationError("subgroups must live in the target algebra")
    buf = ternary_kernel_words(subs, max_len)
    to_parent = [np.asarray(s.members, dtype=np.int64) for s in subs]
    mul = parent.tables["mul"]
    e = parent.basepoint
    found: set[int] = set()
    for length, rec in iter_word_records(buf):
        val = e
        for i in range(length):
            f = int(rec[2 * i])
            x = int(rec[2 * i + 1])
            val = int(mul[val, to_parent[f][x]])
        found.add(val)
    found.add(e)
    return found
