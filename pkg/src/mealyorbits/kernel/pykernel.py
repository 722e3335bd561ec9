"""Numpy/pure-Python backend; see the package docstring for the contracts."""

from __future__ import annotations

import numpy as np


def advance_action(out, nxt, img, sec):
    n_gen, n_words = img.shape
    k = out.shape[1]
    img2 = np.empty((n_gen, n_words * k), dtype=np.int64)
    sec2 = np.empty((n_gen, n_words * k), dtype=np.int64)
    # out[sec] has shape (n_gen, n_words, k): table rows picked per position.
    img2.reshape(n_gen, n_words, k)[:] = (img * k)[:, :, None] + out[sec]
    sec2.reshape(n_gen, n_words, k)[:] = nxt[sec]
    return img2, sec2


def union_roots(img, mask):
    n_gen, n = img.shape
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    img_rows = img.tolist()
    mask_rows = mask.tolist()
    for g in range(n_gen):
        row = img_rows[g]
        use = mask_rows[g]
        for v in range(n):
            if use[v]:
                a, b = find(v), find(row[v])
                if a != b:
                    if b < a:
                        a, b = b, a
                    parent[b] = a  # larger root hangs under smaller
    roots = np.empty(n, dtype=np.int64)
    for v in range(n):
        roots[v] = find(v)
    return roots
