"""Scalar field tags and array aliases for dense tensors and matrices.

Dense tensors are plain numpy arrays in C order (last index fastest). Real
tensors are ``float64``, complex tensors ``complex128``.
"""

from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

# Order-M dense tensor (X_t, G_t, E_t, ...)
DenseTensor = npt.NDArray[np.inexact[Any]]

# Two-dimensional dense array (U_m, unfoldings, Yule-Walker matrix, ...)
DenseMatrix = npt.NDArray[np.inexact[Any]]

MAX_ORDER = 8


class ScalarField(str, Enum):
    """Scalar field of a tensor series."""

    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self) -> np.dtype[Any]:
        """numpy dtype used for this field."""
        return np.dtype(np.float64) if self is ScalarField.REAL else np.dtype(np.complex128)

    @property
    def tag(self) -> int:
        """One-byte tag used by the binary file formats."""
        return 0 if self is ScalarField.REAL else 1

    @property
    def scalar_bytes(self) -> int:
        """Bytes per scalar (8 for real, 16 for complex)."""
        return 8 if self is ScalarField.REAL else 16

    @classmethod
    def from_tag(cls, tag: int) -> "ScalarField":
        """Inverse of :attr:`tag`."""
        for member in cls:
            if member.tag == tag:
                return member
        raise ValueError(f"Unknown field tag: {tag}")

    @classmethod
    def of(cls, array: npt.ArrayLike) -> "ScalarField":
        """Field of an array: complex if its dtype is complex, real otherwise."""
        return cls.COMPLEX if np.iscomplexobj(array) else cls.REAL
