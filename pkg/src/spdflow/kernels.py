"""Hot numerical kernels: dense matrix exponential and the dexpinv series.

Each kernel exists in two forms: a pure-numpy implementation (``*_py``) and,
when numba is importable and the environment variable ``SPDFLOW_NO_NUMBA`` is
not set, an ``@njit``-compiled twin (``*_jit``).  The public names
``expm_dense`` and ``dexpinv_series`` point at whichever form is active.
"""

import os

import numpy as np

# Pade-13 numerator coefficients and the theta_13 scaling threshold
# (standard scaling-and-squaring constants for double precision).
_PADE13_B = np.array(
    [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ]
)
_THETA_13 = 5.371920351148152


def _expm_core(M: np.ndarray) -> np.ndarray:
    """Pade-13 scaling-and-squaring matrix exponential (square real M)."""
    n = M.shape[0]
    norm = 0.0
    for j in range(n):
        col = 0.0
        for i in range(n):
            col += abs(M[i, j])
        if col > norm:
            norm = col
    s = 0
    if norm > _THETA_13:
        s = int(np.ceil(np.log2(norm / _THETA_13)))
    A = M / (2.0**s)
    b = _PADE13_B
    I = np.eye(n)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (
        A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
        + b[7] * A6
        + b[5] * A4
        + b[3] * A2
        + b[1] * I
    )
    V = (
        A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
        + b[6] * A6
        + b[4] * A4
        + b[2] * A2
        + b[0] * I
    )
    R = np.ascontiguousarray(np.linalg.solve(V - U, V + U))
    for _ in range(s):
        R = np.ascontiguousarray(R @ R)
    return R


def _dexpinv_core(theta: np.ndarray, A: np.ndarray, order: int) -> np.ndarray:
    """Bernoulli-weighted commutator series for dexp^{-1}, truncated by order.

    order 1: A + 1/2 [theta, A]
    order 2: ... + 1/12 [theta, [theta, A]]
    order 4: ... - 1/720 ad_theta^4(A)   (the cubic coefficient vanishes)
    """
    R = A.copy()
    C = theta @ A - A @ theta
    if order >= 1:
        R = R + 0.5 * C
    C = theta @ C - C @ theta
    if order >= 2:
        R = R + C / 12.0
    C = theta @ C - C @ theta
    C = theta @ C - C @ theta
    if order >= 4:
        R = R - C / 720.0
    return R


expm_py = _expm_core
dexpinv_py = _dexpinv_core

_want_numba = os.environ.get("SPDFLOW_NO_NUMBA", "") not in ("1", "true", "yes")
expm_jit = None
dexpinv_jit = None
if _want_numba:
    try:
        from numba import njit

        expm_jit = njit(cache=True)(_expm_core)
        dexpinv_jit = njit(cache=True)(_dexpinv_core)
    except ImportError:
        pass

NUMBA_ENABLED = expm_jit is not None

if NUMBA_ENABLED:
    expm_dense = expm_jit
    dexpinv_series = dexpinv_jit
else:
    expm_dense = expm_py
    dexpinv_series = dexpinv_py
