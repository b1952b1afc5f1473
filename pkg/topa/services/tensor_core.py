"""Dense tensor operators: unfolding, folding, mode products, inner products.

Conventions:
- Tensors are C-ordered numpy arrays (last index fastest).
- Modes are 0-based axes.
- ``unfold(X, m)`` is ``I_m x prod(I_l, l != m)``; its columns enumerate the
  remaining indices with the lower-numbered mode varying fastest.
- ``inner(X, Y)`` conjugates ``Y``, so ``inner(X, X) = sum |x|^2``.
"""

from collections.abc import Iterable, Sequence
from typing import Any

import numpy as np
import numpy.typing as npt

from topa.schemas.tensor import MAX_ORDER, DenseMatrix, DenseTensor


class TensorShapeError(ValueError):
    """Mode index or tensor shape incompatible with an operator."""

    pass


class ZeroNormTensorError(ValueError):
    """Tensor with zero Frobenius norm where a ratio is required."""

    pass


def as_tensor(data: npt.ArrayLike) -> DenseTensor:
    """Coerce to a float64/complex128 array of order 1..8."""
    arr = np.asarray(data)
    arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64, copy=False)
    if not 1 <= arr.ndim <= MAX_ORDER:
        raise TensorShapeError(f"tensor order must be in 1..{MAX_ORDER}, got {arr.ndim}")
    return arr


def _check_mode(order: int, m: int) -> None:
    if not 0 <= m < order:
        raise TensorShapeError(f"mode {m} out of range for order-{order} tensor")


def unfold(x: DenseTensor, m: int) -> DenseMatrix:
    """Mode-m unfolding (matricization) of ``x``."""
    _check_mode(x.ndim, m)
    return np.moveaxis(x, m, 0).reshape(x.shape[m], -1, order="F")


def fold(mx: DenseMatrix, m: int, dims: Sequence[int]) -> DenseTensor:
    """Inverse of :func:`unfold` for a tensor of shape ``dims``."""
    dims = tuple(int(d) for d in dims)
    _check_mode(len(dims), m)
    rest = int(np.prod([d for i, d in enumerate(dims) if i != m], dtype=np.int64))
    if mx.shape != (dims[m], rest):
        raise TensorShapeError(
            f"matrix of shape {mx.shape} cannot fold into {dims} along mode {m}"
        )
    moved = (dims[m],) + tuple(d for i, d in enumerate(dims) if i != m)
    return np.moveaxis(mx.reshape(moved, order="F"), 0, m)


def mode_product(x: DenseTensor, u: DenseMatrix, m: int) -> DenseTensor:
    """Mode-m product ``x ×_m u``: ``unfold(result, m) = u @ unfold(x, m)``."""
    _check_mode(x.ndim, m)
    if u.ndim != 2 or u.shape[1] != x.shape[m]:
        raise TensorShapeError(
            f"matrix of shape {u.shape} cannot multiply mode {m} of size {x.shape[m]}"
        )
    return np.moveaxis(np.tensordot(u, x, axes=(1, m)), 0, m)


def multi_project(
    x: DenseTensor, us: Sequence[DenseMatrix], conjugate: bool = True
) -> DenseTensor:
    """Multiply every mode by its factor.

    With ``conjugate=True`` computes ``x ×_1 U_1^H ... ×_M U_M^H`` (projection
    to core space); otherwise ``x ×_1 U_1 ... ×_M U_M`` (reconstruction).
    """
    if len(us) != x.ndim:
        raise TensorShapeError(f"{len(us)} factors given for an order-{x.ndim} tensor")
    out = x
    for m, u in enumerate(us):
        out = mode_product(out, u.conj().T if conjugate else u, m)
    return out


def project_except(x: DenseTensor, us: Sequence[DenseMatrix], skip: int) -> DenseTensor:
    """Project every mode except ``skip`` with the conjugate-transposed factors."""
    out = x
    for m, u in enumerate(us):
        if m != skip:
            out = mode_product(out, u.conj().T, m)
    return out


def inner(x: DenseTensor, y: DenseTensor) -> Any:
    """Inner product ``sum x * conj(y)``."""
    if x.shape != y.shape:
        raise TensorShapeError(f"shape mismatch: {x.shape} vs {y.shape}")
    return np.vdot(y, x)


def frob_norm(x: DenseTensor) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(x.ravel()))


def frob_norm_sq(x: DenseTensor) -> float:
    """Squared Frobenius norm."""
    return float(np.real(np.vdot(x, x)))


def frob_norm_many(xs: Iterable[DenseTensor]) -> float:
    """Norm of a tuple of tensors: sqrt of the summed squared member norms."""
    return float(np.sqrt(sum(frob_norm_sq(x) for x in xs)))
