"""Hot enumeration kernels: integer points in thin ellipsoid shells.

Both backends walk the same depth-first tree over coordinates m-1 .. 0 of
the quadratic window q(x) in [lo, hi], with optional linear-constraint
pruning.  The numba backend is the default; set VINBERG_NO_NUMBA=1 to force
the pure-NumPy fallback (also used automatically when numba is missing).

Kernel output is candidate generation only: callers re-verify every
candidate in exact integer arithmetic, so the float tolerances here can
only admit spurious candidates, never drop true ones (bounds are inflated).
"""

from __future__ import annotations

import os

import numpy as np

_EPS_BUDGET = 1e-6
_TINY = 1e-9

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag instead
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def deco(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return deco


def numba_enabled() -> bool:
    return _HAVE_NUMBA and os.environ.get("VINBERG_NO_NUMBA", "") != "1"


def kernel_backend() -> str:
    return "numba" if numba_enabled() else "numpy"


@njit(cache=True, nogil=True)
def _dfs_shell_numba(R, xc, lo_adj, hi_adj, CW, coff, tail_shift, slack, eps):
    m = R.shape[0]
    ncons = CW.shape[0]
    cap = 256
    out = np.empty((cap, m), np.int64)
    cnt = 0

    Trem = np.zeros(m + 1)
    sig = np.zeros((m + 1, m))
    cpart = np.zeros((m + 1, ncons))
    xcur = np.zeros(m, np.int64)
    xhigh = np.zeros(m, np.int64)
    x = np.zeros(m, np.int64)

    Trem[m] = hi_adj
    for c in range(ncons):
        cpart[m, c] = coff[c]

    def_budget = hi_adj - lo_adj + eps

    i = m - 1
    # initialize top level range
    rad2 = Trem[i + 1]
    if rad2 < 0.0:
        return out[:0]
    r = np.sqrt(rad2) * (1.0 + 1e-12) + _TINY
    center = xc[i] - sig[i + 1, i] / R[i, i]
    half = r / R[i, i]
    xcur[i] = np.int64(np.ceil(center - half))
    xhigh[i] = np.int64(np.floor(center + half))

    while i < m:
        if xcur[i] > xhigh[i]:
            i += 1
            if i < m:
                xcur[i] += 1
            continue
        xi = xcur[i]
        dx = xi - xc[i]
        u = R[i, i] * dx + sig[i + 1, i]
        Tnew = Trem[i + 1] - u * u
        if Tnew < -eps:
            xcur[i] += 1
            continue
        ok = True
        for c in range(ncons):
            cp = cpart[i + 1, c] + CW[c, i] * xi
            cpart[i, c] = cp
            if cp + tail_shift[c, i] > slack:
                ok = False
                break
        if not ok:
            xcur[i] += 1
            continue
        if i == 0:
            if Tnew <= def_budget:
                if cnt == cap:
                    cap *= 2
                    bigger = np.empty((cap, m), np.int64)
                    bigger[:cnt] = out[:cnt]
                    out = bigger
                x[0] = xi
                out[cnt] = x
                cnt += 1
            xcur[i] += 1
            continue
        x[i] = xi
        Trem[i] = Tnew
        for k in range(i):
            sig[i, k] = sig[i + 1, k] + R[k, i] * dx
        i -= 1
        r = np.sqrt(Tnew if Tnew > 0.0 else 0.0) * (1.0 + 1e-12) + _TINY
        center = xc[i] - sig[i + 1, i] / R[i, i]
        half = r / R[i, i]
        xcur[i] = np.int64(np.ceil(center - half))
        xhigh[i] = np.int64(np.floor(center + half))

    return out[:cnt]


def _dfs_shell_numpy(R, xc, lo_adj, hi_adj, CW, coff, tail_shift, slack, eps):
    """Level-synchronous vectorized version of the same tree walk."""
    m = R.shape[0]
    ncons = CW.shape[0]
    if hi_adj < 0.0:
        return np.empty((0, m), np.int64)
    X = np.zeros((1, m), np.int64)
    S = np.zeros((1, m))
    T = np.array([hi_adj])
    CP = np.repeat(coff[None, :], 1, axis=0)
    for i in range(m - 1, -1, -1):
        if X.shape[0] == 0:
            break
        center = xc[i] - S[:, i] / R[i, i]
        rad = np.sqrt(np.maximum(T, 0.0)) * (1.0 + 1e-12) + _TINY
        half = rad / R[i, i]
        lo = np.ceil(center - half).astype(np.int64)
        hi = np.floor(center + half).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total == 0:
            return np.empty((0, m), np.int64)
        idx = np.repeat(np.arange(X.shape[0]), counts)
        starts = np.cumsum(counts) - counts
        offs = np.arange(total) - np.repeat(starts, counts)
        xi = lo[idx] + offs
        dx = xi - xc[i]
        u = R[i, i] * dx + S[idx, i]
        Tn = T[idx] - u * u
        keep = Tn >= -eps
        if ncons:
            CPn = CP[idx] + xi[:, None] * CW[:, i][None, :]
            keep &= np.all(CPn + tail_shift[:, i][None, :] <= slack, axis=1)
        else:
            CPn = CP[idx]
        idx, xi, dx, Tn, CPn = idx[keep], xi[keep], dx[keep], Tn[keep], CPn[keep]
        X = X[idx]
        X[:, i] = xi
        S = S[idx] + dx[:, None] * R[:, i][None, :]
        T = Tn
        CP = CPn
    if X.shape[0] == 0:
        return np.empty((0, m), np.int64)
    keep = T <= hi_adj - lo_adj + eps
    return X[keep].astype(np.int64)


def enumerate_window(
    A: np.ndarray,
    b: np.ndarray,
    c: float,
    lo: float,
    hi: float,
    cons_rows: np.ndarray | None = None,
    cons_offs: np.ndarray | None = None,
    slack: float = 1e-6,
) -> np.ndarray:
    """Integer x with q(x) = x^T A x + 2 b^T x + c in [lo - eps, hi + eps],
    subject to cons_rows @ x + cons_offs <= slack (pruning only).

    A must be positive definite.  Returns an (N, m) int64 array in the
    deterministic tree order of the walk.
    """
    m = A.shape[0]
    if m == 0:
        return np.empty((0, 0), np.int64)
    xc = np.linalg.solve(A, -b)
    c0 = float(c + b @ xc)
    hi_adj = hi - c0
    lo_adj = lo - c0
    scale = max(1.0, abs(hi), abs(c0))
    eps = _EPS_BUDGET * scale
    if hi_adj < -eps:
        return np.empty((0, m), np.int64)
    L = np.linalg.cholesky(A)
    R = np.ascontiguousarray(L.T)
    if cons_rows is None or len(cons_rows) == 0:
        CW = np.zeros((0, m))
        coff = np.zeros(0)
        tail_shift = np.zeros((0, m))
    else:
        CW = np.asarray(cons_rows, dtype=np.float64)
        coff = np.asarray(cons_offs, dtype=np.float64)
        # static per-coordinate boxes from the ellipsoid, for tail bounds
        Ainv_diag = np.einsum("ij,ij->j", np.linalg.inv(A), np.eye(m))
        hbox = np.sqrt(np.maximum(hi_adj + eps, 0.0) * np.abs(Ainv_diag)) + _TINY
        contrib_min = CW * xc[None, :] - np.abs(CW) * hbox[None, :]
        # tail_shift[c, i] = sum over j < i of the minimal contribution
        tail = np.cumsum(contrib_min, axis=1)
        tail_shift = np.zeros((CW.shape[0], m))
        tail_shift[:, 1:] = tail[:, :-1]
    if numba_enabled():
        return _dfs_shell_numba(
            R, xc, lo_adj, hi_adj + eps, CW, coff, tail_shift, slack, eps
        )
    return _dfs_shell_numpy(
        R, xc, lo_adj, hi_adj + eps, CW, coff, tail_shift, slack, eps
    )
