"""Numerical backends for the two hot paths: grid search and channel gains.

Each kernel exists twice: a scalar-loop version compiled with numba's
``@njit`` and a vectorized pure-numpy fallback. The active backend is
chosen by the ``VRCC_BACKEND`` environment variable (``numba`` or
``numpy``), read at call time; when unset, numba is used if importable.
numba compilation is lazy so that importing this package, or running code
paths that never touch a kernel, stays cheap.

The two grid-scan implementations evaluate the exact same floating-point
expressions per lattice point, so their results agree bit for bit. The
channel-gain implementations differ in summation order (loop dot products
versus batched BLAS), so they agree only to ~1e-9 relative.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConfigError

__all__ = [
    "BACKEND_ENV_VAR",
    "numba_available",
    "active_backend",
    "grid_scan",
    "zf_gains",
    "grid_scan_numpy",
    "zf_gains_numpy",
]

BACKEND_ENV_VAR = "VRCC_BACKEND"

_numba_state: dict = {}


def numba_available() -> bool:
    """Whether the numba backend can be used in this environment."""
    if "importable" not in _numba_state:
        try:
            import numba  # noqa: F401
        except ImportError:
            _numba_state["importable"] = False
        else:
            _numba_state["importable"] = True
    return _numba_state["importable"]


def active_backend() -> str:
    """Resolve the backend name from the environment, "numba" or "numpy"."""
    choice = os.environ.get(BACKEND_ENV_VAR, "").strip()
    if not choice:
        return "numba" if numba_available() else "numpy"
    if choice not in ("numba", "numpy"):
        raise ConfigError(
            f"{BACKEND_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numba" and not numba_available():
        raise ConfigError(f"{BACKEND_ENV_VAR}=numba but numba is not importable")
    return choice


# ---------------------------------------------------------------------------
# Grid scan: argmax of min(c_com_equiv*t_com, c_cpt*t_cpt) over the lattice
# {(i*step, j*step)} subject to t_cpt <= t_seg, t_com <= t_seg,
# t_cpt + t_com <= t_cc. Ties broken by smallest t_cpt, then smallest t_com.
#
# Instead of visiting all O(n^2) lattice points, each row (fixed t_cpt) is
# reduced in O(1) + a few fix-up steps: with a = c_cpt*t_cpt, the row value
# min(c_tilde*t_com, a) is non-decreasing in t_com, so the row maximum sits
# either at the smallest j with c_tilde*(j*step) >= a (value a) or at the
# row's last feasible j (value c_tilde*(j_max*step)). Scanning rows in
# ascending i with strict improvement reproduces the exhaustive argmax with
# the exact tie-breaking order.
# ---------------------------------------------------------------------------


def _grid_scan_scalar(c_tilde, c_cpt, t_cc, t_seg, step):
    # compiled with numba; keep to scalar arithmetic and while loops
    i_cap = t_seg if t_seg < t_cc else t_cc
    i_max = int(i_cap / step)
    while (i_max + 1) * step <= i_cap:
        i_max += 1
    while i_max > 0 and i_max * step > i_cap:
        i_max -= 1

    best_i = 0
    best_j = 0
    best_v = -1.0
    for i in range(i_max + 1):
        t_cpt = i * step
        a = c_cpt * t_cpt
        rem = t_cc - t_cpt
        jb = t_seg if t_seg < rem else rem
        j_max = int(jb / step)
        if j_max < 0:
            j_max = 0
        while j_max > 0 and (j_max * step > t_seg or t_cpt + j_max * step > t_cc):
            j_max -= 1
        while (j_max + 1) * step <= t_seg and t_cpt + (j_max + 1) * step <= t_cc:
            j_max += 1

        cap = c_tilde * (j_max * step)
        if cap >= a:
            if c_tilde > 0.0:
                jg = int(a / (c_tilde * step))
                if jg > j_max:
                    jg = j_max
                if jg < 0:
                    jg = 0
                while jg > 0 and c_tilde * ((jg - 1) * step) >= a:
                    jg -= 1
                while c_tilde * (jg * step) < a:
                    jg += 1
            else:
                jg = 0
            v = c_tilde * (jg * step)
            if a < v:
                v = a
            row_j = jg
        else:
            # value strictly increases with j up to j_max on this row
            row_j = j_max
            v = cap
        if v > best_v:
            best_v = v
            best_i = i
            best_j = row_j
    return best_i, best_j, best_v


def grid_scan_numpy(
    c_tilde: float, c_cpt: float, t_cc: float, t_seg: float, step: float
) -> tuple[int, int, float]:
    """Vectorized row-reduction scan; bitwise-identical to the scalar kernel."""
    i_cap = t_seg if t_seg < t_cc else t_cc
    i_max = int(i_cap / step)
    while (i_max + 1) * step <= i_cap:
        i_max += 1
    while i_max > 0 and i_max * step > i_cap:
        i_max -= 1

    i = np.arange(i_max + 1, dtype=np.int64)
    t_cpt = i * step
    a = c_cpt * t_cpt
    rem = t_cc - t_cpt
    jb = np.minimum(t_seg, rem)
    j_max = (jb / step).astype(np.int64)
    np.maximum(j_max, 0, out=j_max)
    while True:
        down = (j_max > 0) & ((j_max * step > t_seg) | (t_cpt + j_max * step > t_cc))
        if not down.any():
            break
        j_max[down] -= 1
    while True:
        nxt = (j_max + 1) * step
        up = (nxt <= t_seg) & (t_cpt + nxt <= t_cc)
        if not up.any():
            break
        j_max[up] += 1

    cap = c_tilde * (j_max * step)
    if c_tilde > 0.0:
        jg = np.minimum(a / (c_tilde * step), j_max.astype(np.float64))
        jg = jg.astype(np.int64)
        np.maximum(jg, 0, out=jg)
        while True:
            down = (jg > 0) & (c_tilde * ((jg - 1) * step) >= a)
            if not down.any():
                break
            jg[down] -= 1
        while True:
            up = (c_tilde * (jg * step) < a) & (jg < j_max)
            if not up.any():
                break
            jg[up] += 1
    else:
        jg = np.zeros_like(j_max)

    take_a = cap >= a
    row_j = np.where(take_a, jg, j_max)
    row_v = np.where(take_a, np.minimum(c_tilde * (jg * step), a), cap)
    best = int(np.argmax(row_v))  # first occurrence = smallest t_cpt on ties
    return best, int(row_j[best]), float(row_v[best])


# ---------------------------------------------------------------------------
# Zero-forcing equivalent gains: for each channel draw H (K x N_t), form
# W = H^H (H H^H)^{-1}, normalize columns to unit length, and return
# |[H W_n]_kk|^2 per user.
# ---------------------------------------------------------------------------


def _zf_gains_scalar(h):
    # compiled with numba; per-draw complex linear algebra
    n, k, nt = h.shape
    out = np.empty((n, k))
    for d in range(n):
        hd = h[d]
        hh = np.ascontiguousarray(hd.conj().T)
        g = np.dot(hd, hh)
        gi = np.linalg.inv(g)
        w = np.dot(hh, gi)
        for uk in range(k):
            nrm2 = 0.0
            sre = 0.0
            sim = 0.0
            for t in range(nt):
                wt = w[t, uk]
                nrm2 += wt.real * wt.real + wt.imag * wt.imag
                z = hd[uk, t] * wt
                sre += z.real
                sim += z.imag
            out[d, uk] = (sre * sre + sim * sim) / nrm2
    return out


def zf_gains_numpy(h: np.ndarray) -> np.ndarray:
    """Batched gains; draws whose inversion fails come back non-finite."""
    n = h.shape[0]
    hh = np.conj(np.swapaxes(h, 1, 2))
    g = h @ hh
    try:
        w = hh @ np.linalg.inv(g)
    except np.linalg.LinAlgError:
        # isolate the singular draws instead of failing the whole batch
        w = np.empty_like(hh)
        for d in range(n):
            try:
                w[d] = hh[d] @ np.linalg.inv(g[d])
            except np.linalg.LinAlgError:
                w[d] = np.nan
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        nrm2 = np.sum(w.real * w.real + w.imag * w.imag, axis=1)
        diag = np.einsum("dkt,dtk->dk", h, w)
        return (diag.real * diag.real + diag.imag * diag.imag) / nrm2


def _compiled_kernels():
    if "fns" not in _numba_state:
        from numba import njit

        # error_model="numpy": float division follows IEEE (0/0 -> nan)
        # instead of raising, matching the vectorized fallback's semantics
        # for numerically singular draws
        _numba_state["fns"] = (
            njit(cache=True, error_model="numpy")(_grid_scan_scalar),
            njit(cache=True, error_model="numpy")(_zf_gains_scalar),
        )
    return _numba_state["fns"]


def grid_scan(
    c_tilde: float, c_cpt: float, t_cc: float, t_seg: float, step: float
) -> tuple[int, int, float]:
    """Lattice argmax via the active backend.

    Returns (i, j, value): the winning lattice indices (t_cpt = i*step,
    t_com = j*step) and the un-normalized objective
    min(c_tilde*t_com, c_cpt*t_cpt) there. Preconditions (positive step that
    fits the feasible box) are the caller's responsibility.
    """
    if active_backend() == "numba":
        fn = _compiled_kernels()[0]
        i, j, v = fn(
            float(c_tilde), float(c_cpt), float(t_cc), float(t_seg), float(step)
        )
        return int(i), int(j), float(v)
    return grid_scan_numpy(
        float(c_tilde), float(c_cpt), float(t_cc), float(t_seg), float(step)
    )


def zf_gains(h: np.ndarray) -> np.ndarray:
    """Per-draw, per-user equivalent gains via the active backend.

    ``h`` has shape (draws, users, antennas), complex. Numerically singular
    draws yield non-finite entries rather than an exception; callers decide
    whether to redraw.
    """
    h = np.ascontiguousarray(h, dtype=np.complex128)
    if active_backend() == "numba":
        fn = _compiled_kernels()[1]
        try:
            return fn(h)
        except np.linalg.LinAlgError:
            # an exactly singular draw aborts the compiled loop; fall back to
            # the isolating numpy path for this batch
            return zf_gains_numpy(h)
    return zf_gains_numpy(h)
