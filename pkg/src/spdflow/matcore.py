"""Dense real matrix kernels: symmetric eigendecomposition, matrix
exponential, SPD square roots and logarithms, commutators, and the truncated
inverse-of-dexp series."""

from typing import NamedTuple, Tuple

import numpy as np

from . import kernels
from .errors import (
    ConvergenceFailure,
    DimMismatch,
    NonFinite,
    NotSpd,
    NotSymmetric,
    UnsupportedOrder,
)

SYM_TOL = 1e-10
PD_TOL_BASE = 1e-12


class EigenSym(NamedTuple):
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending."""

    values: np.ndarray
    vectors: np.ndarray


def asmat(M) -> np.ndarray:
    """Coerce to a contiguous float64 2-d array."""
    A = np.ascontiguousarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise DimMismatch(f"expected a 2-d array, got ndim={A.ndim}")
    return A


def sym(M: np.ndarray) -> np.ndarray:
    """Re-symmetrize: (M + M^T) / 2."""
    return 0.5 * (M + M.T)


def is_symmetric(S: np.ndarray, tol: float = SYM_TOL) -> bool:
    """Test |S_ij - S_ji| <= tol * max(1, ||S||_F)."""
    return np.abs(S - S.T).max(initial=0.0) <= tol * max(
        1.0, float(np.linalg.norm(S))
    )


def require_symmetric(S: np.ndarray, tol: float = SYM_TOL) -> np.ndarray:
    S = asmat(S)
    if S.shape[0] != S.shape[1]:
        raise DimMismatch(f"not square: {S.shape}")
    if not np.all(np.isfinite(S)):
        raise NonFinite("matrix has non-finite entries")
    if not is_symmetric(S, tol):
        raise NotSymmetric(f"asymmetry {np.abs(S - S.T).max():.3e} exceeds tol")
    return S


def pd_tol(S: np.ndarray) -> float:
    """Scale-aware positive-definiteness tolerance."""
    n = S.shape[0]
    return PD_TOL_BASE * max(1.0, float(np.trace(S)) / n)


def sym_eig(S: np.ndarray) -> EigenSym:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending."""
    S = require_symmetric(S)
    try:
        vals, vecs = np.linalg.eigh(sym(S))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise ConvergenceFailure(str(exc)) from exc
    return EigenSym(vals, vecs)


def expm(M: np.ndarray) -> np.ndarray:
    """Matrix exponential; spectral calculus when M is symmetric."""
    M = asmat(M)
    if M.shape[0] != M.shape[1]:
        raise DimMismatch(f"not square: {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFinite("expm input has non-finite entries")
    if is_symmetric(M):
        vals, vecs = sym_eig(M)
        return sym((vecs * np.exp(vals)) @ vecs.T)
    R = kernels.expm_dense(M)
    if not np.all(np.isfinite(R)):
        raise NonFinite(
            f"expm overflowed (input 1-norm {np.abs(M).sum(axis=0).max():.3e})"
        )
    return R


def _spectral_spd(P: np.ndarray, fn) -> np.ndarray:
    vals, vecs = sym_eig(P)
    # Strict positivity only: spectral calculus stays valid for uniformly
    # tiny or badly conditioned spectra, which strongly decaying flows reach.
    if vals[0] <= 0.0:
        raise NotSpd(f"minimum eigenvalue {vals[0]:.3e} not positive")
    return sym((vecs * fn(vals)) @ vecs.T)


def sqrtm_spd(P: np.ndarray) -> np.ndarray:
    """Symmetric positive definite square root of an SPD matrix."""
    return _spectral_spd(P, np.sqrt)


def invsqrtm_spd(P: np.ndarray) -> np.ndarray:
    """Inverse of the SPD square root."""
    return _spectral_spd(P, lambda v: 1.0 / np.sqrt(v))


def logm_spd(P: np.ndarray) -> np.ndarray:
    """Matrix logarithm of an SPD matrix (symmetric result)."""
    return _spectral_spd(P, np.log)


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix commutator [A, B] = AB - BA."""
    A, B = asmat(A), asmat(B)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise DimMismatch(f"incompatible shapes {A.shape} and {B.shape}")
    return A @ B - B @ A


def dexpinv(theta: np.ndarray, A: np.ndarray, order: int = 4) -> np.ndarray:
    """Truncated inverse-of-dexp series applied to A at base point theta."""
    theta, A = asmat(theta), asmat(A)
    if theta.shape != A.shape or theta.shape[0] != theta.shape[1]:
        raise DimMismatch(f"incompatible shapes {theta.shape} and {A.shape}")
    if order not in (1, 2, 4):
        raise UnsupportedOrder(f"order must be 1, 2 or 4, got {order}")
    return kernels.dexpinv_series(theta, A, order)


def is_spd(S: np.ndarray, tol: float = 0.0) -> Tuple[bool, float]:
    """SPD membership test; returns (flag, minimum eigenvalue)."""
    S = asmat(S)
    if not np.all(np.isfinite(S)):
        return False, float("-inf")
    vals = np.linalg.eigvalsh(sym(S))
    return bool(vals[0] > tol), float(vals[0])
