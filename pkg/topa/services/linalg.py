"""Dense kernels for the closed-form updates: thin SVD, Procrustes, regularized solve."""

import logging

import numpy as np
import numpy.typing as npt
from scipy import linalg as sla

from topa.schemas.tensor import DenseMatrix, DenseTensor

logger = logging.getLogger(__name__)


class EmptyMatrixError(ValueError):
    """Matrix with a zero-length dimension."""

    pass


class SingularSystemError(ArithmeticError):
    """Regularized normal equations are not positive definite."""

    pass


def thin_svd(a: DenseMatrix) -> tuple[DenseMatrix, npt.NDArray[np.float64], DenseMatrix]:
    """Thin SVD ``a = L @ diag(s) @ R^H`` of a tall or square matrix.

    Returns ``L`` (I x R, orthonormal columns), ``s`` (descending, nonnegative)
    and ``R`` (R x R unitary). Note ``R`` is returned, not ``R^H``.
    """
    if a.ndim != 2 or a.size == 0:
        raise EmptyMatrixError(f"cannot decompose matrix of shape {a.shape}")
    if a.shape[0] < a.shape[1]:
        raise ValueError(f"thin_svd expects a tall or square matrix, got {a.shape}")
    left, s, right_h = sla.svd(a, full_matrices=False, lapack_driver="gesdd")
    return left, s, right_h.conj().T


def procrustes(w: DenseMatrix) -> DenseMatrix:
    """Orthonormal ``U`` maximizing ``Re trace(U^H w)``, namely ``L @ R^H``."""
    left, _, right = thin_svd(w)
    return left @ right.conj().T


def orthonormalize(a: DenseMatrix) -> DenseMatrix:
    """Nearest matrix with orthonormal columns (polar factor)."""
    return procrustes(a)


def solve_reg_normal(
    rm: DenseMatrix, rv: npt.ArrayLike, lam: float, alpha_prev: npt.ArrayLike
) -> DenseTensor:
    """Solve ``(rm + lam/2 I) alpha = rv + lam/2 alpha_prev`` by Cholesky.

    ``rm`` must be Hermitian positive semidefinite. With ``lam = 0`` a
    rank-deficient ``rm`` raises :class:`SingularSystemError`.
    """
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    rv = np.asarray(rv)
    alpha_prev = np.asarray(alpha_prev)
    p = rm.shape[0]
    if rm.shape != (p, p) or rv.shape != (p,) or alpha_prev.shape != (p,):
        raise ValueError(
            f"inconsistent system shapes: {rm.shape}, {rv.shape}, {alpha_prev.shape}"
        )
    lhs = rm + (lam / 2.0) * np.eye(p, dtype=rm.dtype)
    rhs = rv + (lam / 2.0) * alpha_prev
    if lam == 0.0:
        # Cholesky can succeed on numerically singular PSD input, so check rank first
        scale = float(np.linalg.norm(lhs))
        if scale == 0.0 or np.linalg.matrix_rank(lhs, tol=1e-12 * scale) < p:
            raise SingularSystemError("normal matrix is singular and lam = 0")
    try:
        factor = sla.cho_factor(lhs, lower=True)
    except np.linalg.LinAlgError as e:
        raise SingularSystemError(f"normal matrix is not positive definite: {e}") from e
    return sla.cho_solve(factor, rhs)
