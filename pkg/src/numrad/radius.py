"""Certified numerical radius and related sup-over-angle quantities.

The numerical radius is computed through the support-function identity

    w(A) = max_theta lambda_max(Re(e^{i theta} A)),

maximized over a periodic angle grid with a rigorous per-cell ceiling.
Every angular function maximized here is a supremum of sinusoids, which gives
two certified ceilings on a cell ``[a, b]`` from the endpoint values alone:

* Lipschitz: ``(f(a) + f(b) + L (b - a)) / 2``;
* curvature: ``f <= chord + rho/2 (theta - a)(b - theta)`` where ``rho`` bounds
  the curvature of every sinusoid in the family.

For ``lambda_max(Re(e^{i theta} A))`` a third ceiling comes from the
eigendecomposition at the cell midpoint (a Schur complement bound on the top
eigenvalue of the rotated matrix). It is tight to second order, so flat
functions (e.g. a disk-shaped field of values) also settle after a few rounds.

Cells whose ceiling exceeds the incumbent by more than the tolerance are
split until none remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .linalg import EPS, _square, imag_part, real_part, spectral_norm

DEFAULT_GRID = 32
_CHUNK = 4096
_MAX_ROUNDS = 80
_SPLIT = 8

Number = Union[int, float]


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class CertifiedValue:
    """A scalar with an absolute error radius.

    Supports the arithmetic used when assembling inequality sides; the error
    radius propagates as a rigorous first-order bound for ``+``, ``-``, ``*``
    and an exact interval bound for :meth:`sqrt`.
    """

    value: float
    error_radius: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite value {self.value}")
        if not self.error_radius >= 0:
            raise ValueError(f"error radius must be >= 0, got {self.error_radius}")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error_radius", float(self.error_radius))

    @staticmethod
    def of(x: "CertifiedValue | Number") -> "CertifiedValue":
        return x if isinstance(x, CertifiedValue) else CertifiedValue(float(x))

    def __add__(self, other):
        o = CertifiedValue.of(other)
        return CertifiedValue(self.value + o.value, self.error_radius + o.error_radius)

    __radd__ = __add__

    def __neg__(self):
        return CertifiedValue(-self.value, self.error_radius)

    def __sub__(self, other):
        return self + (-CertifiedValue.of(other))

    def __rsub__(self, other):
        return CertifiedValue.of(other) - self

    def __mul__(self, other):
        o = CertifiedValue.of(other)
        err = (
            abs(self.value) * o.error_radius
            + abs(o.value) * self.error_radius
            + self.error_radius * o.error_radius
        )
        return CertifiedValue(self.value * o.value, err)

    __rmul__ = __mul__

    def __truediv__(self, other: Number):
        return self * (1.0 / float(other))

    def __abs__(self):
        return CertifiedValue(abs(self.value), self.error_radius)

    def square(self) -> "CertifiedValue":
        return self * self

    def sqrt(self) -> "CertifiedValue":
        v, e = self.value, self.error_radius
        if v < -e:
            raise ValueError(f"square root of negative quantity {v} +- {e}")
        root = math.sqrt(max(v, 0.0))
        hi = math.sqrt(max(v, 0.0) + e)
        lo = math.sqrt(max(v - e, 0.0))
        return CertifiedValue(root, max(hi - root, root - lo))

    def __float__(self):
        return self.value

    def to_dict(self) -> dict:
        return {"value": self.value, "error_radius": self.error_radius}


def cmax(*xs) -> CertifiedValue:
    vals = [CertifiedValue.of(x) for x in xs]
    best = max(vals, key=lambda c: c.value)
    return CertifiedValue(best.value, max(c.error_radius for c in vals))


def cmin(*xs) -> CertifiedValue:
    vals = [CertifiedValue.of(x) for x in xs]
    best = min(vals, key=lambda c: c.value)
    return CertifiedValue(best.value, max(c.error_radius for c in vals))


def _cell_ceiling(h, fa, fb, rho, lip):
    lip_ceiling = np.maximum((fa + fb + lip * h) / 2, np.maximum(fa, fb))
    if rho <= 0:
        return np.minimum(np.maximum(fa, fb), lip_ceiling)
    s = np.clip(h / 2 + (fb - fa) / (rho * h), 0.0, h)
    quad = fa + (fb - fa) * (s / h) + 0.5 * rho * s * (h - s)
    return np.minimum(quad, lip_ceiling)


def certified_sup(
    f: Callable[[np.ndarray], np.ndarray],
    period: float,
    curvature: float,
    lipschitz: float,
    tol: float,
    noise: float = 0.0,
    n_grid: int = DEFAULT_GRID,
    local: Callable | None = None,
) -> CertifiedValue:
    """Certified supremum of a periodic sup-of-sinusoids function.

    Parameters
    ----------
    f : callable
        Vectorized evaluator, angles array -> values array.
    period : float
        Period of ``f``; the search covers ``[0, period)``.
    curvature : float
        Bound on ``-g''`` for every sinusoid ``g`` whose supremum is ``f``.
    lipschitz : float
        Lipschitz constant of ``f``.
    tol : float
        Requested absolute error radius.
    noise : float
        Absolute evaluation error of ``f``; added to the reported radius.
    local : callable, optional
        ``(a, h) -> (f(a + h/2), ceilings)``: an extra certified ceiling of
        ``f`` on each cell ``[a, a + h]``; ``inf`` where unavailable.

    Returns
    -------
    CertifiedValue
        ``value`` is the best evaluated point; the true supremum lies in
        ``[value - noise, value + error_radius]``.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    budget = tol - noise
    if budget <= 0:
        raise ValueError(f"tol {tol:.3e} is below the evaluation noise {noise:.3e}")
    h0 = period / n_grid
    a = np.arange(n_grid) * h0
    fa = _evaluate(f, a)
    fb = np.roll(fa, -1)
    h = np.full(n_grid, h0)
    best = float(fa.max())
    settled = -math.inf
    for _ in range(_MAX_ROUNDS):
        ceil = _cell_ceiling(h, fa, fb, curvature, lipschitz)
        active = ceil > best + budget
        if local is not None and np.any(active):
            idx = np.flatnonzero(active)
            mid, extra = local(a[idx], h[idx])
            best = max(best, float(mid.max()))
            ceil[idx] = np.minimum(ceil[idx], extra)
            active = ceil > best + budget
        if np.any(~active):
            settled = max(settled, float(ceil[~active].max()))
        if not np.any(active):
            err = max(settled - best, 0.0) + noise
            return CertifiedValue(best, err)
        a, h, fa, fb = a[active], h[active] / _SPLIT, fa[active], fb[active]
        # split every active cell into _SPLIT equal subcells
        offs = np.arange(1, _SPLIT)
        mids = (a[:, None] + h[:, None] * offs).reshape(-1)
        fm = _evaluate(f, mids).reshape(a.size, _SPLIT - 1)
        best = max(best, float(fm.max()))
        left = np.concatenate([fa[:, None], fm], axis=1)
        right = np.concatenate([fm, fb[:, None]], axis=1)
        starts = np.concatenate([a[:, None], a[:, None] + h[:, None] * offs], axis=1)
        a, fa, fb = starts.reshape(-1), left.reshape(-1), right.reshape(-1)
        h = np.repeat(h, _SPLIT)
    raise ConvergenceError(f"no certificate within {_MAX_ROUNDS} refinement rounds")


def _evaluate(f, thetas: np.ndarray) -> np.ndarray:
    if thetas.size <= _CHUNK:
        return np.asarray(f(thetas), dtype=float)
    parts = [f(thetas[i : i + _CHUNK]) for i in range(0, thetas.size, _CHUNK)]
    return np.concatenate(parts).astype(float)


def _rotated(herm: np.ndarray, skew: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    c = np.cos(thetas)[:, None, None]
    s = np.sin(thetas)[:, None, None]
    return c * herm - s * skew


def _eigen_ceiling(herm, skew, kappa, a, h):
    """Top eigenvalue at the midpoint of ``[a, a+h]`` and a ceiling over the cell.

    With ``P = H(m)``, ``Q = H'(m)`` and ``d = theta - m``,
    ``H(theta) = cos(d) P + sin(d) Q``. In the eigenbasis of ``P`` the Schur
    complement of the top entry gives, for ``s = sin d``,

        lambda_max <= l1 cos d + q11 s + s^2 sum_j |q_j1|^2 / den_j,

    where ``den_j = cos(h/2)(l1 - l_j) - |s|(|q11| + kappa)`` lower-bounds the
    gap between the top entry and the trailing block (``kappa >= |Q|``).
    ``cos d`` is bounded by ``1 - s^2/2`` (or ``1 - s^2`` when ``l1 < 0``),
    leaving a quadratic in ``s`` that is maximized exactly over the cell.
    """
    if a.size > _CHUNK:
        parts = [_eigen_ceiling(herm, skew, kappa, a[i : i + _CHUNK], h[i : i + _CHUNK])
                 for i in range(0, a.size, _CHUNK)]
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
    half = h / 2
    m = a + half
    p = _rotated(herm, skew, m)
    q = _rotated(herm, skew, m + math.pi / 2)
    lam, vec = np.linalg.eigh(p)
    l1 = lam[:, -1]
    v1 = vec[:, :, -1]
    qv = np.einsum("kij,kj->ki", q, v1)
    coeff = np.einsum("kji,kj->ki", vec.conj(), qv)  # Q in the eigenbasis, column of v1
    q11 = coeff[:, -1].real
    b2 = np.abs(coeff[:, :-1]) ** 2
    big_s = np.sin(half)
    den = np.cos(half)[:, None] * (l1[:, None] - lam[:, :-1]) - (big_s * (np.abs(q11) + kappa))[:, None]
    valid = np.all(den > 0, axis=1)
    r = np.sum(np.where(den > 0, b2 / np.where(den > 0, den, 1.0), 0.0), axis=1)
    c2 = r - np.where(l1 >= 0, l1 / 2, l1)
    edge = l1 + np.abs(q11) * big_s + c2 * big_s**2
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex_s = np.where(c2 < 0, -q11 / (2 * c2), np.inf)
        vertex = np.where(np.abs(vertex_s) <= big_s, l1 - q11**2 / (4 * c2), -np.inf)
    bound = np.maximum(edge, vertex)
    return l1, np.where(valid, bound, np.inf)


def _lambda_max(stack: np.ndarray) -> np.ndarray:
    n = stack.shape[-1]
    if n == 1:
        return stack[:, 0, 0].real
    if n == 2:
        a = stack[:, 0, 0].real
        d = stack[:, 1, 1].real
        b = stack[:, 0, 1]
        return (a + d) / 2 + np.hypot((a - d) / 2, np.abs(b))
    return np.linalg.eigvalsh(stack)[:, -1]


def default_tol(a) -> float:
    return 1e-9 * max(1.0, spectral_norm(a))


def numerical_radius(a, tol: float | None = None) -> CertifiedValue:
    """Numerical radius ``w(A) = sup_{|x|=1} |<Ax, x>|`` with a certificate.

    Parameters
    ----------
    a : array_like
        Square complex matrix.
    tol : float, optional
        Absolute error radius to reach; defaults to ``1e-9 * max(1, |A|)``.

    Examples
    --------
    >>> round(numerical_radius([[0, 1], [0, 0]]).value, 9)
    0.5
    """
    m = _square(a)
    norm = spectral_norm(m)
    if tol is None:
        tol = 1e-9 * max(1.0, norm)
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if norm == 0.0:
        return CertifiedValue(0.0, 0.0)
    herm, skew = real_part(m), imag_part(m)

    def f(thetas):
        return _lambda_max(_rotated(herm, skew, thetas))

    def local(a_, h_):
        return _eigen_ceiling(herm, skew, norm, a_, h_)

    noise = 8 * m.shape[0] * EPS * norm
    return certified_sup(f, 2 * math.pi, norm, norm, tol, noise=noise, local=local)


def sup_real_part_norm(a, tol: float | None = None) -> CertifiedValue:
    """``sup_theta |Re(e^{i theta} A)|`` via singular values on ``[0, pi)``.

    Equal to the numerical radius; kept as an independent formulation
    (norm instead of top eigenvalue, half period, different curvature bound).
    """
    m = _square(a)
    norm = spectral_norm(m)
    if tol is None:
        tol = 1e-9 * max(1.0, norm)
    if norm == 0.0:
        return CertifiedValue(0.0, 0.0)
    herm, skew = real_part(m), imag_part(m)
    amp = math.hypot(spectral_norm(herm), spectral_norm(skew))

    def f(thetas):
        return np.linalg.svd(_rotated(herm, skew, thetas), compute_uv=False)[:, 0]

    def local(a_, h_):
        # |H| = max(lambda_max(H(theta)), lambda_max(H(theta + pi)))
        up_mid, up = _eigen_ceiling(herm, skew, amp, a_, h_)
        dn_mid, dn = _eigen_ceiling(herm, skew, amp, a_ + math.pi, h_)
        return np.maximum(up_mid, dn_mid), np.maximum(up, dn)

    noise = 8 * m.shape[0] * EPS * norm
    return certified_sup(f, math.pi, amp, amp, tol, noise=noise, local=local)


def sup_theta_product_norm(a, b, tol: float | None = None) -> CertifiedValue:
    """Certified ``sup_theta |Re(e^{i theta} A) Re(e^{i theta} B)|``.

    The product is ``P + cos(2 theta) Q + sin(2 theta) R`` for fixed matrices,
    so the curvature bound is ``4 sqrt(|Q|^2 + |R|^2)``; the Lipschitz bound
    is ``2 |A| |B|``.
    """
    ma, mb = _square(a), _square(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch {ma.shape} vs {mb.shape}")
    na, nb = spectral_norm(ma), spectral_norm(mb)
    if tol is None:
        tol = 1e-9 * max(1.0, na * nb)
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if na == 0.0 or nb == 0.0:
        return CertifiedValue(0.0, 0.0)
    ha, ka = real_part(ma), imag_part(ma)
    hb, kb = real_part(mb), imag_part(mb)
    q = (ha @ hb - ka @ kb) / 2
    r = -(ha @ kb + ka @ hb) / 2
    curvature = 4 * math.hypot(spectral_norm(q), spectral_norm(r))

    def f(thetas):
        prod = _rotated(ha, ka, thetas) @ _rotated(hb, kb, thetas)
        return np.linalg.svd(prod, compute_uv=False)[:, 0]

    noise = 16 * ma.shape[0] * EPS * na * nb
    return certified_sup(f, math.pi, curvature, 2 * na * nb, tol, noise=noise)


def numerical_radius_oracle(
    a, n_starts: int = 200, seed: int = 0, max_iter: int = 2000, step_tol: float = 1e-12
) -> float:
    """Lower bound on ``w(A)`` by multistart local ascent on the unit sphere.

    Each start alternates a phase alignment (maximize ``Re(e^{i phi} <Ax,x>)``
    over ``phi``) with a locally optimal ascent step for ``x -> <H x, x>``,
    ``H = Re(e^{i phi} A)``, over the span of the current point, the projected
    gradient and the previous step. Iterates until the step is below
    ``step_tol``. Uses no eigensolver on the full matrix, so it is independent
    of :func:`numerical_radius`.
    """
    m = _square(a)
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    n = m.shape[0]
    if n == 1:
        return float(abs(m[0, 0]))
    if not np.any(m):
        return 0.0
    rng = np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), 0x6F7261636C65]))
    x = rng.standard_normal((n_starts, n)) + 1j * rng.standard_normal((n_starts, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    # row-vector convention: x @ m.T == (m x)^T and x @ m.conj() == (m* x)^T
    mt, mc = m.T, m.conj()
    prev = np.zeros_like(x)
    done = np.zeros(n_starts, dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(~done)
        if idx.size == 0:
            break
        xs, ps = x[idx], prev[idx]
        ax = xs @ mt
        z = np.einsum("ij,ij->i", xs.conj(), ax)
        phase = np.exp(-1j * np.angle(z))[:, None]
        hx = (phase * ax + phase.conj() * (xs @ mc)) / 2
        rq = np.einsum("ij,ij->i", xs.conj(), hx).real
        g = hx - rq[:, None] * xs
        basis = np.stack([xs, g, ps], axis=2) if n > 2 else np.stack([xs, g], axis=2)
        q, r = np.linalg.qr(basis)
        # drop directions that vanished after orthogonalization
        diag = np.abs(np.diagonal(r, axis1=1, axis2=2))
        q = q * (diag > 1e-14)[:, None, :]
        aq = np.einsum("jk,ski->sji", m, q)
        ahq = np.einsum("kj,ski->sji", mc, q)
        hq = (phase[:, :, None] * aq + phase.conj()[:, :, None] * ahq) / 2
        small = np.einsum("sji,sjk->sik", q.conj(), hq)
        w, v = np.linalg.eigh(small)
        top = v[:, :, -1]
        x_new = np.einsum("sji,si->sj", q, top)
        x_new /= np.linalg.norm(x_new, axis=1, keepdims=True)
        ph = np.einsum("ij,ij->i", xs.conj(), x_new)
        x_new *= np.exp(-1j * np.angle(ph))[:, None]
        step = np.linalg.norm(x_new - xs, axis=1)
        x[idx] = x_new
        prev[idx] = x_new - xs
        done[idx] = step < step_tol
    vals = np.abs(np.einsum("ij,ij->i", x.conj(), x @ mt))
    return float(vals.max())
