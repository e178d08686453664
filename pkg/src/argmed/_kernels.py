"""Bitmask kernels for exhaustive subset enumeration.

Arguments are numbered ``0..n-1``; a set is an integer mask. ``att_in[i]``
is the mask of attackers of ``i`` and ``att_out[i]`` the mask of its targets.

Two interchangeable implementations exist: numba-compiled loops and
vectorised numpy. The numba path is used when numba imports and the
``ARGMED_DISABLE_NUMBA`` environment variable is unset (or ``0``). Every
public function also takes ``backend="numba"|"numpy"`` to force one.
"""

from __future__ import annotations

import os

import numpy as np

MAX_BITS = 24

_flag = os.environ.get("ARGMED_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag not in ("", "0", "false", "no")

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

HAVE_NUMBA = njit is not None
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not NUMBA_DISABLED else "numpy"


def _resolve(backend: str | None) -> str:
    backend = backend or DEFAULT_BACKEND
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend


# -- numpy ----------------------------------------------------------------

def _tables_numpy(att_in: np.ndarray, att_out: np.ndarray, n: int):
    masks = np.arange(1 << n, dtype=np.int64)
    members = [((masks >> i) & 1).astype(bool) for i in range(n)]
    attacked = np.zeros_like(masks)
    for i in range(n):
        attacked |= np.where(members[i], att_out[i], 0)
    cf = (masks & attacked) == 0
    undefended = np.zeros(masks.shape, dtype=bool)
    for i in range(n):
        undefended |= members[i] & ((att_in[i] & ~attacked) != 0)
    return cf, cf & ~undefended


def _maximal_numpy(flags: np.ndarray, n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    # up[m]: some superset of m (m included) is flagged
    up = flags.copy()
    for j in range(n):
        lo = masks[((masks >> j) & 1) == 0]
        up[lo] |= up[lo | (1 << j)]
    strict = np.zeros_like(flags)
    for j in range(n):
        lo = masks[((masks >> j) & 1) == 0]
        strict[lo] |= up[lo | (1 << j)]
    return flags & ~strict


# -- numba ----------------------------------------------------------------

def _tables_loop(att_in, att_out, n):
    size = 1 << n
    cf = np.zeros(size, dtype=np.bool_)
    adm = np.zeros(size, dtype=np.bool_)
    for m in range(size):
        attacked = 0
        for i in range(n):
            if (m >> i) & 1:
                attacked |= att_out[i]
        if m & attacked:
            continue
        cf[m] = True
        ok = True
        for i in range(n):
            if (m >> i) & 1 and (att_in[i] & ~attacked) != 0:
                ok = False
                break
        adm[m] = ok
    return cf, adm


def _maximal_loop(flags, n):
    size = 1 << n
    up = flags.copy()
    for j in range(n):
        bit = 1 << j
        for m in range(size):
            if not (m & bit) and up[m | bit]:
                up[m] = True
    out = np.zeros(size, dtype=np.bool_)
    for m in range(size):
        if not flags[m]:
            continue
        keep = True
        for j in range(n):
            bit = 1 << j
            if not (m & bit) and up[m | bit]:
                keep = False
                break
        out[m] = keep
    return out


if HAVE_NUMBA:
    _tables_numba = njit(cache=True)(_tables_loop)
    _maximal_numba = njit(cache=True)(_maximal_loop)
else:  # pragma: no cover
    _tables_numba = _maximal_numba = None


# -- public ---------------------------------------------------------------

def _as_masks(a) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=np.int64))


def subset_tables(att_in, att_out, n: int, backend: str | None = None):
    """Return ``(conflict_free, admissible)`` boolean arrays indexed by mask."""
    if not 0 <= n <= MAX_BITS:
        raise ValueError(f"n={n} outside 0..{MAX_BITS}")
    att_in, att_out = _as_masks(att_in), _as_masks(att_out)
    if _resolve(backend) == "numba":
        return _tables_numba(att_in, att_out, n)
    return _tables_numpy(att_in, att_out, n)


def maximal(flags: np.ndarray, n: int, backend: str | None = None) -> np.ndarray:
    """Flags of masks that are flagged and have no flagged strict superset."""
    flags = np.ascontiguousarray(flags, dtype=np.bool_)
    if flags.shape != (1 << n,):
        raise ValueError("flags must have length 2**n")
    if _resolve(backend) == "numba":
        return _maximal_numba(flags, n)
    return _maximal_numpy(flags, n)


def mask_members(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if (mask >> i) & 1]
