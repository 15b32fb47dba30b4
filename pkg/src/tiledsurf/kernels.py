"""Batched permutation kernels.

Every kernel works on a batch of permutations stored row-wise in a 2-D
integer array of shape ``(batch, n)``; row ``b`` maps ``i -> perms[b, i]``.
Each kernel exists twice, a numba version and a numpy version, and the
public name is bound to one of them at import time (see ``_accel``).
Both versions return identical arrays for identical inputs.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# columns of the array returned by cycle_stats
NCYCLES, NFIXED, NTWO, LARGEST, SECOND = range(5)


# ---------------------------------------------------------------- numba


@njit
def _compose_rows_nb(p, q):
    B, n = p.shape
    out = np.empty_like(p)
    for b in range(B):
        for i in range(n):
            out[b, i] = p[b, q[b, i]]
    return out


@njit
def _invert_rows_nb(p):
    B, n = p.shape
    out = np.empty_like(p)
    for b in range(B):
        for i in range(n):
            out[b, p[b, i]] = i
    return out


@njit
def _cycle_stats_nb(p):
    B, n = p.shape
    out = np.zeros((B, 5), dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    for b in range(B):
        seen[:] = False
        ncyc = 0
        nfix = 0
        ntwo = 0
        first = 0
        second = 0
        for i in range(n):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[b, j]
                length += 1
            ncyc += 1
            if length == 1:
                nfix += 1
            elif length == 2:
                ntwo += 1
            if length > first:
                second = first
                first = length
            elif length > second:
                second = length
        out[b, 0] = ncyc
        out[b, 1] = nfix
        out[b, 2] = ntwo
        out[b, 3] = first
        out[b, 4] = second
    return out


@njit
def _holonomy_mask_nb(s, t, c):
    B, n = c.shape
    out = np.ones(B, dtype=np.bool_)
    for b in range(B):
        for i in range(n):
            if c[b, i] == i and (s[b, i] != i or t[b, i] != i):
                out[b] = False
                break
    return out


@njit
def _cycle_lengths_nb(p):
    B, n = p.shape
    out = np.zeros((B, n), dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    for b in range(B):
        seen[:] = False
        m = 0
        for i in range(n):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[b, j]
                length += 1
            out[b, m] = length
            m += 1
        out[b, :m] = np.sort(out[b, :m])[::-1]
    return out


@njit
def _word_rows_nb(perms, code):
    # code 0: a = x1...xk, 1: b = x1^-1...xk^-1, 2: c = a b; one row at a time
    k, B, n = perms.shape
    out = np.empty((B, n), dtype=perms.dtype)
    inv = np.empty((k, n), dtype=perms.dtype)
    for b in range(B):
        if code != 0:
            for j in range(k):
                for i in range(n):
                    inv[j, perms[j, b, i]] = i
        for i in range(n):
            x = i
            if code != 0:
                for j in range(k - 1, -1, -1):
                    x = inv[j, x]
            if code != 1:
                for j in range(k - 1, -1, -1):
                    x = perms[j, b, x]
            out[b, i] = x
    return out


@njit
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit
def _orbit_counts_nb(gens):
    g, B, n = gens.shape
    out = np.zeros(B, dtype=np.int64)
    parent = np.empty(n, dtype=np.int64)
    for b in range(B):
        for i in range(n):
            parent[i] = i
        count = n
        for k in range(g):
            for i in range(n):
                ri = _find(parent, i)
                rj = _find(parent, gens[k, b, i])
                if ri != rj:
                    if ri < rj:
                        parent[rj] = ri
                    else:
                        parent[ri] = rj
                    count -= 1
        out[b] = count
    return out


# ---------------------------------------------------------------- numpy


def _compose_rows_np(p, q):
    return np.take_along_axis(p, q, axis=1)


def _invert_rows_np(p):
    out = np.empty_like(p)
    ar = np.broadcast_to(np.arange(p.shape[1], dtype=p.dtype), p.shape)
    np.put_along_axis(out, p, ar, axis=1)
    return out


def _cycle_min_labels(p):
    # pointer doubling: after r rounds m[i] = min(i, p(i), ..., p^(2^r - 1)(i))
    B, n = p.shape
    m = np.broadcast_to(np.arange(n, dtype=p.dtype), p.shape).copy()
    ptr = p.copy()
    span = 1
    while span < n:
        np.minimum(m, np.take_along_axis(m, ptr, axis=1), out=m)
        ptr = np.take_along_axis(ptr, ptr, axis=1)
        span *= 2
    return m


def _cycle_stats_np(p):
    B, n = p.shape
    out = np.zeros((B, 5), dtype=np.int64)
    if B == 0 or n == 0:
        return out
    m = _cycle_min_labels(p)
    flat = (m + (np.arange(B, dtype=p.dtype) * n)[:, None]).ravel()
    sizes = np.bincount(flat, minlength=B * n).reshape(B, n)
    out[:, 0] = (sizes > 0).sum(axis=1)
    out[:, 1] = (p == np.arange(n)).sum(axis=1)
    out[:, 2] = (sizes == 2).sum(axis=1)
    if n >= 2:
        top = np.partition(sizes, (n - 2, n - 1), axis=1)
        out[:, 3] = top[:, n - 1]
        out[:, 4] = top[:, n - 2]
    else:
        out[:, 3] = sizes[:, 0]
    return out


def _cycle_lengths_np(p):
    B, n = p.shape
    if B == 0:
        return np.zeros((0, n), dtype=np.int64)
    m = _cycle_min_labels(p)
    flat = (m + (np.arange(B, dtype=p.dtype) * n)[:, None]).ravel()
    sizes = np.bincount(flat, minlength=B * n).reshape(B, n).astype(np.int64)
    return -np.sort(-sizes, axis=1)


def _holonomy_mask_np(s, t, c):
    ar = np.arange(c.shape[1])
    bad = (c == ar) & ((s != ar) | (t != ar))
    return ~bad.any(axis=1)


def _orbit_counts_np(gens):
    g, B, n = gens.shape
    edges = list(gens) + [_invert_rows_np(x) for x in gens]
    ar = np.arange(n, dtype=gens.dtype)
    labels = np.broadcast_to(ar, (B, n)).copy()
    while True:
        new = labels.copy()
        for e in edges:
            np.minimum(new, np.take_along_axis(new, e, axis=1), out=new)
        new = np.take_along_axis(new, new, axis=1)
        if np.array_equal(new, labels):
            break
        labels = new
    return (labels == ar).sum(axis=1).astype(np.int64)


# ---------------------------------------------------------------- dispatch

NUMBA_KERNELS = {
    "compose_rows": _compose_rows_nb,
    "invert_rows": _invert_rows_nb,
    "cycle_stats": _cycle_stats_nb,
    "cycle_lengths": _cycle_lengths_nb,
    "holonomy_mask": _holonomy_mask_nb,
    "orbit_counts": _orbit_counts_nb,
}
NUMPY_KERNELS = {
    "compose_rows": _compose_rows_np,
    "invert_rows": _invert_rows_np,
    "cycle_stats": _cycle_stats_np,
    "cycle_lengths": _cycle_lengths_np,
    "holonomy_mask": _holonomy_mask_np,
    "orbit_counts": _orbit_counts_np,
}
_ACTIVE = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS

compose_rows = _ACTIVE["compose_rows"]
invert_rows = _ACTIVE["invert_rows"]
cycle_stats = _ACTIVE["cycle_stats"]
cycle_lengths = _ACTIVE["cycle_lengths"]
holonomy_mask = _ACTIVE["holonomy_mask"]
orbit_counts = _ACTIVE["orbit_counts"]


_WORD_CODES = {"a": 0, "b": 1, "c": 2}


def _word_rows_np(perms, kind):
    """Evaluate a word on a stack of gluings of shape ``(k, batch, n)``.

    ``kind`` is ``"a"`` (x1...xk), ``"b"`` (x1^-1...xk^-1) or ``"c"``
    (x1...xk x1^-1...xk^-1). Composition is right to left, so row ``b`` of
    the ``"a"`` result is ``i -> x1(x2(...xk(i)))``.
    """
    k = perms.shape[0]
    compose_rows, invert_rows = _compose_rows_np, _invert_rows_np
    if kind in ("a", "c"):
        a = perms[0]
        for j in range(1, k):
            a = compose_rows(a, perms[j])
        if kind == "a":
            return a
    inv = [invert_rows(perms[j]) for j in range(k)]
    b = inv[0]
    for j in range(1, k):
        b = compose_rows(b, inv[j])
    if kind == "b":
        return b
    return compose_rows(a, b)


def _word_rows_nb_kind(perms, kind):
    return _word_rows_nb(np.ascontiguousarray(perms), _WORD_CODES[kind])


NUMBA_KERNELS["word_rows"] = _word_rows_nb_kind
NUMPY_KERNELS["word_rows"] = _word_rows_np


def word_rows(perms, kind):
    """Evaluate word ``kind`` (``"a"``, ``"b"`` or ``"c"``) on a ``(k, batch, n)`` stack."""
    if kind not in _WORD_CODES:
        raise ValueError(f"unknown word kind {kind!r}")
    return _ACTIVE["word_rows"](perms, kind)
