"""Hot loops behind the brute-force orbit oracle.

Two interchangeable backends: a compiled Cython module (built automatically
when Cython and a C compiler are around) and a numpy/pure-Python fallback.
Set ``MEALYORBITS_KERNEL=python`` to force the fallback, or
``MEALYORBITS_KERNEL=c`` to insist on the compiled one (import fails if it
was not built).  Both produce bit-identical results; ``BACKEND`` tells which
one is active.
"""

from __future__ import annotations

import os

import numpy as np

from . import pykernel as _py

_choice = os.environ.get("MEALYORBITS_KERNEL", "").strip().lower()
BACKEND = "python"
_impl = _py
if _choice in {"python", "py", "pure"}:
    pass
else:
    try:
        from . import _ckernel as _c

        _impl = _c
        BACKEND = "c"
    except ImportError:
        if _choice in {"c", "compiled", "native"}:
            raise ImportError(
                "MEALYORBITS_KERNEL=c but the compiled kernel is not built; "
                "reinstall with Cython and a C compiler available"
            ) from None


def _i64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def advance_action(out, nxt, img, sec):
    """Extend level tables one letter deeper.

    ``out``/``nxt`` are the automaton tables, shape (states, k).  ``img[g, v]``
    is the image of the level word with base-k code ``v`` under generator ``g``
    and ``sec[g, v]`` the state index acting below it.  Returns the two tables
    for the next level, shape (generators, N * k), where column ``v*k + x``
    describes the word ``v`` extended by letter ``x``.
    """
    return _impl.advance_action(_i64(out), _i64(nxt), _i64(img), _i64(sec))


def union_roots(img, mask):
    """Minimum-element class representatives for the relation v ~ img[g, v].

    Only positions with ``mask[g, v]`` non-zero contribute.  Returns an int64
    array ``roots`` with ``roots[v]`` the least word code in the class of ``v``.
    """
    img = _i64(img)
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    if img.shape != mask.shape:
        raise ValueError("img and mask shapes differ")
    return _impl.union_roots(img, mask)


def union_labels(img, mask):
    """Like :func:`union_roots` but renumbered to dense labels 0..c-1."""
    roots = union_roots(img, mask)
    _, labels = np.unique(roots, return_inverse=True)
    return labels.astype(np.int64)


__all__ = ["BACKEND", "advance_action", "union_roots", "union_labels"]
