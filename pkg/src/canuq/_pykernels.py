"""Vectorized NumPy implementation of the hot numerical kernels.

This module is the fallback backend selected when the compiled extension is
unavailable (see `canuq._kernels`). Both backends expose the same functions
and must agree to tight tolerances; the test suite enforces this.

Conventions used throughout:

- canonical moments `p` live in [0, 1]; `zeta[0] = p[0]` and
  `zeta[k] = (1 - p[k-1]) * p[k]` for k >= 1,
- a measure with N enforced moments is represented on N+1 support points,
  obtained as eigenvalues of the symmetric tridiagonal (Jacobi) matrix with
  diagonal `lower + (upper-lower) * (zeta_{2k} + zeta_{2k+1})` and
  off-diagonal `(upper-lower) * sqrt(zeta_{2k-1} * zeta_{2k})`,
- weights solve the Vandermonde system against the raw (original-interval)
  moments via the divided-difference elimination of Björck and Pereyra.

Status codes returned by the batch decoder:
  0 ok, 1 outside moment space, 2 unresolved atom cluster, 3 negative weight.
"""

import numpy as np

BACKEND_NAME = "python"

EPS_CLAMP = 1e-9        # interior clamp applied to canonical coordinates
P_VALID_TOL = 1e-12     # acceptance window for derived canonical moments
CLUSTER_RTOL = 1e-12    # atom-cluster threshold, relative to the interval span
NEG_WEIGHT_TOL = 1e-6   # weights below -tol signal an inadmissible atom set

STATUS_OK = 0
STATUS_OUTSIDE = 1
STATUS_CLUSTER = 2
STATUS_NEGATIVE = 3


def zeta_from_p(p):
    """Map canonical moments to the recursion coefficients zeta."""
    p = np.asarray(p, dtype=float)
    z = np.empty_like(p)
    z[..., 0] = p[..., 0]
    z[..., 1:] = (1.0 - p[..., :-1]) * p[..., 1:]
    return z


def _jacobi_coeffs(zeta, n):
    """Truncated Jacobi-matrix coefficients on [0,1] from zeta (padded with 0).

    Returns (alpha, beta) with alpha of length m = n//2 + 1 and beta of
    length m-1; only zeta_1..zeta_n influence the first n moments.
    """
    m = n // 2 + 1
    z = np.zeros(2 * m + 1)
    ln = min(len(zeta), 2 * m + 1)
    z[:ln] = zeta[:ln]
    # 1-based zeta indexing: z1 = z[0]
    alpha = np.empty(m)
    alpha[0] = z[0]
    ks = np.arange(1, m)
    alpha[1:] = z[2 * ks - 1] + z[2 * ks]
    beta = z[2 * ks - 2] * z[2 * ks - 1]
    return alpha, beta


def moments01_from_p(p, n=None):
    """Raw moments c_1..c_n on [0,1] of the measure with canonical moments p.

    Uses powers of the truncated Jacobi matrix (c_j is its top-left entry
    after j multiplications), which is exact for boundary values of p as
    well as interior ones.
    """
    p = np.asarray(p, dtype=float)
    if n is None:
        n = len(p)
    if n == 0:
        return np.empty(0)
    zeta = zeta_from_p(p) if len(p) else np.empty(0)
    alpha, beta = _jacobi_coeffs(zeta, n)
    m = len(alpha)
    # monic normalization: unit super-diagonal, beta on the sub-diagonal
    v = np.zeros(m)
    v[0] = 1.0
    out = np.empty(n)
    for j in range(n):
        w = alpha * v
        if m > 1:
            w[:-1] += v[1:]
            w[1:] += beta * v[:-1]
        v = w
        out[j] = v[0]
    return out


def p_from_moments01(c):
    """Canonical moments of the [0,1] moment sequence c_1..c_n.

    Sequential conversion: at each order the lower extreme moment is the
    continuation of the current prefix with p_n = 0, and the attainable
    range is the running product of p_k (1 - p_k).

    Returns (p, degeneracy_index, error_index); indices are 1-based and 0
    when unset. After a boundary touch at degeneracy_index the remaining
    canonical moments are 0 and the input moments must match the forced
    continuation (error otherwise).
    """
    c = np.asarray(c, dtype=float)
    n = len(c)
    p = np.zeros(n)
    degeneracy = 0
    rng = 1.0  # c_k^+ - c_k^-  given p_1..p_{k-1}
    for k in range(1, n + 1):
        if degeneracy:
            forced = moments01_from_p(p[: k - 1], k)[-1]
            if abs(c[k - 1] - forced) > 1e-10:
                return p, degeneracy, k
            continue
        if k == 1:
            c_minus = 0.0
        else:
            c_minus = moments01_from_p(p[: k - 1], k)[-1]
        pk = (c[k - 1] - c_minus) / rng
        if pk < -P_VALID_TOL or pk > 1.0 + P_VALID_TOL:
            return p, degeneracy, k
        pk = min(max(pk, 0.0), 1.0)
        if pk <= EPS_CLAMP or pk >= 1.0 - EPS_CLAMP:
            pk = round(pk)
            degeneracy = k
        p[k - 1] = pk
        rng *= pk * (1.0 - pk)
    return p, degeneracy, 0


def tridiag_eigenvalues(diag, offdiag):
    """Sorted eigenvalues of a symmetric tridiagonal matrix."""
    diag = np.asarray(diag, dtype=float)
    n = len(diag)
    if n == 1:
        return diag.copy()
    mat = np.diag(diag)
    idx = np.arange(n - 1)
    mat[idx, idx + 1] = offdiag
    mat[idx + 1, idx] = offdiag
    return np.linalg.eigvalsh(mat)


def vandermonde_solve_dual(atoms, rhs):
    """Solve sum_k atoms[k]**j * w[k] = rhs[j] by divided-difference elimination."""
    x = np.asarray(atoms, dtype=float)
    w = np.array(rhs, dtype=float)
    n = len(x)
    for k in range(n - 1):
        for i in range(n - 1, k, -1):
            w[i] -= x[k] * w[i - 1]
    for k in range(n - 2, -1, -1):
        for i in range(k + 1, n):
            w[i] /= x[i] - x[i - k - 1]
        for i in range(k, n - 1):
            w[i] -= w[i + 1]
    return w


def _clamp(a, eps):
    return np.clip(a, eps, 1.0 - eps)


def batch_p_from_moments01(c01, eps=EPS_CLAMP):
    """Convert a batch of [0,1] moment prefixes to clamped canonical moments.

    c01 has shape (k, N). Returns (p, ok) where invalid rows (prefix leaves
    the moment space) are flagged False; their p values are meaningless.
    Valid rows are clamped into [eps, 1-eps] so the decoder can proceed
    unconditionally (near-boundary sequences become near-degenerate
    measures with vanishing extra weights).
    """
    c01 = np.asarray(c01, dtype=float)
    k, n = c01.shape
    p = np.empty((k, n))
    ok = np.ones(k, dtype=bool)
    rng = np.ones(k)
    m = n // 2 + 1
    for j in range(1, n + 1):
        if j == 1:
            c_minus = np.zeros(k)
        else:
            c_minus = _batch_moment_continuation(p[:, : j - 1], j, m)
        pj = (c01[:, j - 1] - c_minus) / rng
        ok &= (pj >= -P_VALID_TOL) & (pj <= 1.0 + P_VALID_TOL)
        pj = _clamp(pj, eps)
        p[:, j - 1] = pj
        rng = rng * (pj * (1.0 - pj))
    return p, ok


def _batch_moment_continuation(p_prefix, n, m):
    """nth moment of each row's prefix continued with p_n = 0 (batched)."""
    k, _ = p_prefix.shape
    z = np.zeros((k, 2 * m + 1))
    zp = zeta_from_p(p_prefix)
    z[:, : zp.shape[1]] = zp
    alpha = np.empty((k, m))
    alpha[:, 0] = z[:, 0]
    ks = np.arange(1, m)
    alpha[:, 1:] = z[:, 2 * ks - 1] + z[:, 2 * ks]
    beta = z[:, 2 * ks - 2] * z[:, 2 * ks - 1]
    v = np.zeros((k, m))
    v[:, 0] = 1.0
    for _ in range(n):
        w = alpha * v
        if m > 1:
            w[:, :-1] += v[:, 1:]
            w[:, 1:] += beta * v[:, :-1]
        v = w
    return v[:, 0]


def batch_decode(p_all, lower, upper, raw_moments, eps=EPS_CLAMP):
    """Decode canonical-moment rows into discrete measures (atoms, weights).

    p_all : (k, 2N+1) canonical moments (prefix + free), unclamped.
    raw_moments : (k, N) raw moments on [lower, upper] enforced via the
        Vandermonde system (N may be 0).
    Returns (atoms (k, N+1), weights (k, N+1), status (k,)).
    """
    p_all = np.asarray(p_all, dtype=float)
    k, width = p_all.shape
    n_atoms = (width + 1) // 2
    span = upper - lower
    raw_moments = np.asarray(raw_moments, dtype=float).reshape(k, n_atoms - 1)
    status = np.zeros(k, dtype=np.uint8)

    atoms = np.empty((k, n_atoms))
    current_eps = eps
    todo = np.arange(k)
    for _ in range(4):
        z = zeta_from_p(_clamp(p_all[todo], current_eps))
        atoms[todo] = _batch_atoms(z, lower, upper, n_atoms)
        if n_atoms == 1:
            break
        gaps = np.diff(atoms[todo], axis=1).min(axis=1)
        bad = gaps < CLUSTER_RTOL * span
        if not bad.any():
            break
        todo = todo[bad]
        current_eps *= 10.0
    else:
        status[todo] = STATUS_CLUSTER

    np.clip(atoms, lower, upper, out=atoms)

    weights = _batch_weights(atoms, raw_moments)
    neg = weights.min(axis=1) < -NEG_WEIGHT_TOL
    status[neg & (status == 0)] = STATUS_NEGATIVE
    np.clip(weights, 0.0, 1.0, out=weights)
    sums = weights.sum(axis=1, keepdims=True)
    good = (sums[:, 0] > 0.5) & (status == 0)
    weights[good] /= sums[good]
    return atoms, weights, status


def _batch_atoms(zeta, lower, upper, n_atoms):
    """Eigenvalues of the Jacobi matrices built from each zeta row."""
    k = zeta.shape[0]
    span = upper - lower
    z = np.zeros((k, 2 * n_atoms))
    z[:, 1 : 1 + zeta.shape[1]] = zeta  # z[:, j] = zeta_j, 1-based
    ks = np.arange(n_atoms)
    diag = lower + span * (z[:, 2 * ks] + z[:, 2 * ks + 1])
    if n_atoms == 1:
        return diag
    js = np.arange(1, n_atoms)
    off = span * np.sqrt(z[:, 2 * js - 1] * z[:, 2 * js])
    mats = np.zeros((k, n_atoms, n_atoms))
    idx = np.arange(n_atoms)
    mats[:, idx, idx] = diag
    idx = np.arange(n_atoms - 1)
    mats[:, idx, idx + 1] = off
    mats[:, idx + 1, idx] = off
    return np.linalg.eigvalsh(mats)


def _batch_weights(atoms, raw_moments):
    """Batched Björck–Pereyra dual solve; RHS is (1, c_1, .., c_N) per row."""
    k, n = atoms.shape
    w = np.empty((k, n))
    w[:, 0] = 1.0
    w[:, 1:] = raw_moments
    for kk in range(n - 1):
        for i in range(n - 1, kk, -1):
            w[:, i] -= atoms[:, kk] * w[:, i - 1]
    for kk in range(n - 2, -1, -1):
        for i in range(kk + 1, n):
            w[:, i] /= atoms[:, i] - atoms[:, i - kk - 1]
        for i in range(kk, n - 1):
            w[:, i] -= w[:, i + 1]
    return w
