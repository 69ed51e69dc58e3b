"""Dense complex matrix primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; every function
here is pure and never mutates its inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

EPS = np.finfo(float).eps

#: eigenvalues of nominally PSD input below ``CLAMP_REL * lambda_max`` are zeroed
CLAMP_REL = 1e-12


class NotPSDError(ValueError):
    """Raised when a matrix that should be PSD has a clearly negative eigenvalue."""


class ShapeError(ValueError):
    pass


def as_matrix(a: Any) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.size == 0:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _square(a: Any) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def adjoint(a: Any) -> np.ndarray:
    return as_matrix(a).conj().T.copy()


def real_part(a: Any) -> np.ndarray:
    """Hermitian part ``(A + A*) / 2``."""
    m = _square(a)
    return (m + m.conj().T) / 2


def imag_part(a: Any) -> np.ndarray:
    """Skew part ``(A - A*) / 2i``, itself Hermitian."""
    m = _square(a)
    return (m - m.conj().T) / 2j


@dataclass(frozen=True)
class HermitianEigen:
    values: np.ndarray  # ascending
    vectors: np.ndarray  # columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.values) @ v.conj().T


def herm_eigen(h: Any) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized before solving, so roundoff-level asymmetry is
    harmless. ``numpy.linalg.LinAlgError`` propagates on non-convergence.
    """
    m = _square(h)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return HermitianEigen(values=w, vectors=v)


def svd(a: Any) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(W, sigma, V)`` with ``A = W @ diag(sigma) @ V*``, sigma descending."""
    m = as_matrix(a)
    w, s, vh = np.linalg.svd(m)
    return w, s, vh.conj().T


def spectral_norm(a: Any) -> float:
    m = as_matrix(a)
    return float(np.linalg.svd(m, compute_uv=False)[0])


def abs_matrix(a: Any) -> np.ndarray:
    """``|A| = (A*A)^{1/2}``, computed from the SVD as ``V diag(sigma) V*``.

    Use ``abs_matrix(adjoint(A))`` for ``|A*|``.
    """
    _, s, v = svd(_square(a))
    p = (v * s) @ v.conj().T
    return (p + p.conj().T) / 2


def psd_power(p: Any, t: float) -> np.ndarray:
    """Fractional power ``P^t`` of a PSD matrix, ``t >= 0``.

    Eigenvalues below ``1e-12 * lambda_max`` are clamped to zero first and
    ``0**0`` is taken as 0, so ``P^0`` is the projection onto the range of P.

    Raises
    ------
    NotPSDError
        If an eigenvalue is below ``-1e-12 * lambda_max``.
    """
    if t < 0:
        raise ValueError(f"exponent must be nonnegative, got {t}")
    eig = herm_eigen(p)
    lam = eig.values
    top = float(np.max(np.abs(lam)))
    clamp = CLAMP_REL * top
    if lam[0] < -clamp:
        raise NotPSDError(f"eigenvalue {lam[0]:.3e} below -{clamp:.3e}")
    keep = lam > clamp
    mapped = np.zeros_like(lam)
    mapped[keep] = lam[keep] ** t
    out = eig.vectors * mapped @ eig.vectors.conj().T
    return (out + out.conj().T) / 2


def is_psd(p: Any, rel: float = CLAMP_REL) -> bool:
    m = as_matrix(p)
    if m.shape[0] != m.shape[1]:
        return False
    if np.linalg.norm(m - m.conj().T) > rel * max(1.0, np.linalg.norm(m)):
        return False
    lam = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return bool(lam[0] >= -rel * float(np.max(np.abs(lam))))


def block_2x2(x11: Any, x12: Any, x21: Any, x22: Any) -> np.ndarray:
    """Assemble the operator matrix ``[[X11, X12], [X21, X22]]``."""
    blocks = [[as_matrix(x11), as_matrix(x12)], [as_matrix(x21), as_matrix(x22)]]
    try:
        return np.block(blocks)
    except ValueError as exc:
        raise ShapeError(f"blocks are not conformable: {exc}") from None


def zeros_like_square(n: int) -> np.ndarray:
    return np.zeros((n, n), dtype=np.complex128)


def matrix_to_dict(a: Any) -> dict:
    """Serialize to ``{"rows", "cols", "data": [[re, im], ...]}`` (row-major)."""
    m = as_matrix(a)
    flat = m.reshape(-1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from None
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise ValueError(f"matrix object has {len(data)} entries for {rows}x{cols}")
    try:
        vals = np.array([complex(float(re), float(im)) for re, im in data])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix entry: {exc}") from None
    return as_matrix(vals.reshape(rows, cols))


def dumps_matrix(a: Any) -> str:
    return json.dumps(matrix_to_dict(a))


def loads_matrix(text: str) -> np.ndarray:
    return matrix_from_dict(json.loads(text))
