"""Transitive Lie group actions on the SPD manifold: the GL(n) congruence
action and the symplectic (Siegel half-space) action, behind one interface."""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NotSymplectic, Singular
from .matcore import asmat, expm, require_symmetric, sym

DET_TOL = 1e-12
SYMPLECTIC_TOL = 1e-8


class HomogeneousAction(ABC):
    """A transitive group action on SPD matrices with its algebra action."""

    def __init__(self, n: int):
        self.n = n

    @abstractmethod
    def act(self, g: np.ndarray, P: np.ndarray) -> np.ndarray:
        """Apply a group element to a manifold point."""

    @abstractmethod
    def algebra_act(self, a, P: np.ndarray) -> np.ndarray:
        """Infinitesimal action: d/ds act(exp(s a), P) at s = 0."""

    @abstractmethod
    def exp(self, a) -> np.ndarray:
        """Lie-algebra exponential into the group."""


class CongruenceAction(HomogeneousAction):
    """GL(n) acting by (M, P) -> M P M^T; algebra action A P + P A^T."""

    def act(self, M: np.ndarray, P: np.ndarray) -> np.ndarray:
        M = asmat(M)
        sign, logdet = np.linalg.slogdet(M)
        if sign == 0.0 or not np.isfinite(logdet):
            raise Singular("congruence element is not invertible")
        return sym(M @ P @ M.T)

    def algebra_act(self, A: np.ndarray, P: np.ndarray) -> np.ndarray:
        A, P = asmat(A), asmat(P)
        if A.shape != P.shape:
            raise DimMismatch(f"incompatible shapes {A.shape} and {P.shape}")
        return sym(A @ P + P @ A.T)

    def exp(self, A: np.ndarray) -> np.ndarray:
        return expm(A)


@dataclass(frozen=True)
class SpAlgebraElem:
    """sp(2n) element [[A, B], [C, -A^T]] with B, C symmetric."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        require_symmetric(self.B)
        require_symmetric(self.C)
        if not (self.A.shape == self.B.shape == self.C.shape):
            raise DimMismatch("sp(2n) blocks must share one shape")

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, -self.A.T]])

    def __mul__(self, s: float) -> "SpAlgebraElem":
        return SpAlgebraElem(s * self.A, s * self.B, s * self.C)

    __rmul__ = __mul__


def _skew_form(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


class SiegelAction(HomogeneousAction):
    """Symplectic group acting on SPD matrices by real fractional maps.

    With M = [[A, B], [C, D]] symplectic, act(M, P) = (AP + B)(CP + D)^{-1};
    the infinitesimal action of (A, B, C) is AP + PA^T + B - PCP.
    """

    def _check_symplectic(self, M: np.ndarray) -> np.ndarray:
        M = asmat(M)
        if M.shape != (2 * self.n, 2 * self.n):
            raise DimMismatch(f"expected {2 * self.n}x{2 * self.n}, got {M.shape}")
        J = _skew_form(self.n)
        resid = np.linalg.norm(M.T @ J @ M - J)
        if resid > SYMPLECTIC_TOL * max(1.0, float(np.linalg.norm(M)) ** 2):
            raise NotSymplectic(f"||M^T J M - J||_F = {resid:.3e}")
        return M

    def act(self, M: np.ndarray, P: np.ndarray) -> np.ndarray:
        M = self._check_symplectic(M)
        n = self.n
        A, B = M[:n, :n], M[:n, n:]
        C, D = M[n:, :n], M[n:, n:]
        num = A @ P + B
        den = C @ P + D
        try:
            X = np.linalg.solve(den.T, num.T).T
        except np.linalg.LinAlgError as exc:
            raise Singular("fractional-map denominator is singular") from exc
        return sym(X)

    def algebra_act(self, a: SpAlgebraElem, P: np.ndarray) -> np.ndarray:
        if a.A.shape[0] != P.shape[0]:
            raise DimMismatch(
                f"algebra dim {a.A.shape[0]} vs point dim {P.shape[0]}"
            )
        return sym(a.A @ P + P @ a.A.T + a.B - P @ a.C @ P)

    def exp(self, a) -> np.ndarray:
        M = a.matrix if isinstance(a, SpAlgebraElem) else asmat(a)
        return expm(M)


def random_symplectic(seed: int, n: int, scale: float) -> np.ndarray:
    """Exponential of a random sp(2n) element with norm at most ``scale``."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    B = sym(rng.standard_normal((n, n)))
    C = sym(rng.standard_normal((n, n)))
    m = SpAlgebraElem(A, B, C).matrix
    nrm = np.linalg.norm(m)
    if nrm > scale:
        m *= scale / nrm
    return expm(m)
