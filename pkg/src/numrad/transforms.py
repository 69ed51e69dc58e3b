"""Polar decomposition and generalized Aluthge transforms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import EPS, _square, psd_power, svd


@dataclass(frozen=True)
class PolarParts:
    """``A = isometry @ positive`` with ``positive = |A|``.

    ``isometry`` is a partial isometry: it vanishes on the kernel of ``A``
    instead of being completed to a unitary.
    """

    isometry: np.ndarray
    positive: np.ndarray
    rank_tol: float

    def reconstruct(self) -> np.ndarray:
        return self.isometry @ self.positive


def polar_decompose(a) -> PolarParts:
    """Polar decomposition from the SVD ``A = W S V*``.

    ``P = V S V*`` and ``U = W D V*`` where ``D`` keeps only the singular
    values above ``n * eps * sigma_max``.
    """
    m = _square(a)
    w, s, v = svd(m)
    rank_tol = m.shape[0] * EPS * (s[0] if s.size else 0.0)
    keep = (s > rank_tol).astype(float)
    u = (w * keep) @ v.conj().T
    p = (v * s) @ v.conj().T
    p = (p + p.conj().T) / 2
    return PolarParts(isometry=u, positive=p, rank_tol=float(rank_tol))


def aluthge_general(t_mat, a: float, b: float) -> np.ndarray:
    """``|T|^a U |T|^b`` for the polar decomposition ``T = U|T|``."""
    if a < 0 or b < 0:
        raise ValueError(f"exponents must be nonnegative, got ({a}, {b})")
    parts = polar_decompose(t_mat)
    return psd_power(parts.positive, a) @ parts.isometry @ psd_power(parts.positive, b)


def aluthge_t(t_mat, t: float) -> np.ndarray:
    """Generalized Aluthge transform ``|T|^t U |T|^(1-t)``, ``0 <= t <= 1``.

    ``t = 0.5`` is the classical transform. The exponent-swapped convention
    ``|T|^(1-t) U |T|^t`` is ``aluthge_t(T, 1 - t)``.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return aluthge_general(t_mat, t, 1.0 - t)


def aluthge(t_mat) -> np.ndarray:
    return aluthge_t(t_mat, 0.5)
