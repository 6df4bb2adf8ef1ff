"""Array kernels for truncated bivariate Taylor series.

A jet of order ``m`` is stored as the trailing ``(m + 1, m + 1)`` block of an
array, entry ``[i, j]`` holding the normalized coefficient of ``dx^i dy^j``.
Entries with ``i + j > m`` are kept at zero.  Leading axes are tensor indices,
so a whole component table of a tensor field is one array.
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def tri_mask(n: int) -> np.ndarray:
    i, j = np.indices((n, n))
    mask = (i + j) < n
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=None)
def _support(n: int):
    return [(p, q) for p in range(n) for q in range(n - p)]


def order_of(a: np.ndarray) -> int:
    return a.shape[-1] - 1


def truncate(a: np.ndarray, m: int) -> np.ndarray:
    out = a[..., : m + 1, : m + 1].copy()
    out[..., ~tri_mask(m + 1)] = 0.0
    return out


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated product, broadcasting over the leading (tensor) axes."""
    n = a.shape[-1]
    lead = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    out = np.zeros(lead + (n, n))
    for p, q in _support(n):
        ap = a[..., p, q]
        if not np.any(ap):
            continue
        out[..., p:, q:] += ap[..., None, None] * b[..., : n - p, : n - q]
    out[..., ~tri_mask(n)] = 0.0
    return out


def contract(subscripts: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``np.einsum`` over tensor indices with jet multiplication in the trailing axes.

    ``subscripts`` names only the tensor indices, e.g. ``"cd,dab->cab"``.
    """
    lhs, rhs = subscripts.split("->")
    sa, sb = lhs.split(",")
    sig = f"{sa},{sb}...->{rhs}..."
    n = a.shape[-1]
    out = None
    for p, q in _support(n):
        ap = a[..., p, q]
        if not np.any(ap):
            continue
        term = np.einsum(sig, ap, b[..., : n - p, : n - q])
        if out is None:
            shape = term.shape[:-2] + (n, n)
            out = np.zeros(shape)
        out[..., p:, q:] += term
    if out is None:
        shape = np.einsum(sig, a[..., 0, 0], b).shape
        return np.zeros(shape)
    out[..., ~tri_mask(n)] = 0.0
    return out


def dx(a: np.ndarray) -> np.ndarray:
    """x-derivative; the result has order one less."""
    n = a.shape[-1]
    if n < 2:
        raise ValueError("cannot differentiate an order-0 jet")
    out = a[..., 1:, : n - 1] * np.arange(1, n)[:, None]
    out[..., ~tri_mask(n - 1)] = 0.0
    return out


def dy(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    if n < 2:
        raise ValueError("cannot differentiate an order-0 jet")
    out = a[..., : n - 1, 1:] * np.arange(1, n)[None, :]
    out[..., ~tri_mask(n - 1)] = 0.0
    return out


def value(a: np.ndarray) -> np.ndarray:
    return a[..., 0, 0]


def gradient3(a: np.ndarray) -> np.ndarray:
    """Stack ``(d/dx, d/dy, d/dxt)`` as a new *last* tensor axis.

    Nothing in a Walker metric depends on the third coordinate, so that slot
    is identically zero.
    """
    gx, gy = dx(a), dy(a)
    return np.stack([gx, gy, np.zeros_like(gx)], axis=-3)
