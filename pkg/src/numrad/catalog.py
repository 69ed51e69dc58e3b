"""Registry of numerical radius inequalities, identities and orderings.

Each :class:`CatalogEntry` names its operand roles and a term function that
returns the sides of the relation as :class:`CertifiedValue` objects:

* ``INEQUALITY``: ``[lhs, rhs]`` or, for min-forms, ``[lhs, rhs_1, rhs_2]``
  (every branch must bound ``lhs`` individually);
* ``IDENTITY``: two or more values that must agree;
* ``ORDERING``: a chain ``v0 <= v1 <= ...``.

Numerical radii inside the terms are certified; norms and inner products are
taken as exact (their rounding error is far below the pass threshold).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import linalg as la
from .radius import (
    CertifiedValue,
    numerical_radius,
    sup_real_part_norm,
    sup_theta_product_norm,
)
from .transforms import aluthge_t, polar_decompose

DEFAULT_TOL = 1e-8


class Kind(str, Enum):
    INEQUALITY = "INEQUALITY"
    IDENTITY = "IDENTITY"
    ORDERING = "ORDERING"


class Role(str, Enum):
    MATRIX = "matrix"
    PSD = "psd"
    VECTOR = "vector"
    UNIT = "unit_vector"
    T = "t"
    SIGN = "sign"


class CatalogError(ValueError):
    code = "CATALOG_ERROR"


class SignatureMismatch(CatalogError):
    code = "SIGNATURE_MISMATCH"


class ZeroNormOperand(CatalogError):
    code = "ZERO_NORM_OPERAND"


class HypothesisNotMet(CatalogError):
    code = "HYPOTHESIS_NOT_MET"


class UnknownEntry(KeyError):
    code = "UNKNOWN_ENTRY"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    anchor: str
    quote: str
    arity: tuple[Role, ...]
    kind: Kind
    relation: str
    terms: Callable = field(repr=False, compare=False)
    hypothesis: str | None = None
    nonzero: tuple[int, ...] = ()
    branches: tuple[str, ...] = ()

    @property
    def has_t(self) -> bool:
        return Role.T in self.arity

    @property
    def has_sign(self) -> bool:
        return Role.SIGN in self.arity

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": {"where": self.anchor, "quote": self.quote},
            "arity": [r.value for r in self.arity],
            "kind": self.kind.value,
            "relation": self.relation,
            "hypothesis": self.hypothesis,
        }


@dataclass(frozen=True)
class EvalResult:
    """Outcome of one evaluation.

    ``margin`` is ``rhs - lhs`` of the worst link (raw units); ``scale`` is
    ``max(1, |rhs|)`` of that link. ``values`` holds every evaluated side.
    """

    entry_id: str
    kind: Kind
    lhs: float
    rhs: float
    margin: float
    certified_error: float
    scale: float
    passed: bool
    values: tuple[float, ...] = ()
    branches: dict = field(default_factory=dict)

    @property
    def scaled_margin(self) -> float:
        if self.kind is Kind.IDENTITY:
            return -abs(self.margin) / self.scale
        return self.margin / self.scale

    def to_dict(self) -> dict:
        return {
            "entry": self.entry_id,
            "kind": self.kind.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "certified_error": self.certified_error,
            "passed": self.passed,
            "values": list(self.values),
            "branches": dict(self.branches),
        }


# ---------------------------------------------------------------------------
# evaluation context


@lru_cache(maxsize=2048)
def _omega_cached(key: bytes, n: int, tol: float) -> CertifiedValue:
    m = np.frombuffer(key, dtype=np.complex128).reshape(n, n)
    return numerical_radius(m, tol=tol * max(1.0, la.spectral_norm(m)))


class _Ctx:
    def __init__(self, tol: float):
        self.tol = tol
        # sub-term tolerance (relative to max(1, |X|))
        self.sub = tol / 4

    def w(self, x: np.ndarray) -> CertifiedValue:
        x = np.ascontiguousarray(x, dtype=np.complex128)
        return _omega_cached(x.tobytes(), x.shape[0], self.sub)

    def sup_re_norm(self, x) -> CertifiedValue:
        return sup_real_part_norm(x, tol=self.sub * max(1.0, la.spectral_norm(x)))

    def sup_prod(self, a, b) -> CertifiedValue:
        scale = max(1.0, la.spectral_norm(a) * la.spectral_norm(b))
        return sup_theta_product_norm(a, b, tol=self.sub * scale)


def _n(x) -> float:
    return la.spectral_norm(x)


def _h(x):
    return x.conj().T


def _sq(x):
    """``|X|^2 = X* X``."""
    return _h(x) @ x


def _sqs(x):
    """``|X*|^2 = X X*``."""
    return x @ _h(x)


def _abs_pow(x, p):
    """``|X|^p`` with the range-projection convention at ``p = 0``."""
    return la.psd_power(la.abs_matrix(x), p)


def _abs_star_pow(x, p):
    return la.psd_power(la.abs_matrix(_h(x)), p)


def _inner(u, v) -> complex:
    """``<u, v>``, linear in the first argument."""
    return complex(np.vdot(v, u))


def _zero(n):
    return np.zeros((n, n), dtype=np.complex128)


def _balanced_sum(t_mat, t):
    """``|T|^{2t-1} |T|^{2(1-t)} + |T|^{1-2t} |T|^{2t}`` with scalar weights ``|T|``."""
    nt = _n(t_mat)
    return nt ** (2 * t - 1) * _abs_pow(t_mat, 2 * (1 - t)) + nt ** (1 - 2 * t) * _abs_pow(
        t_mat, 2 * t
    )


def _e15_rhs(c: _Ctx, a, b, s):
    ba = b @ a
    inner = (
        CertifiedValue(0.25 * _n(s) ** 2)
        + c.w(ba).square()
        + 0.5 * c.w(s @ ba + ba @ s)
    )
    return 0.5 * inner.sqrt()


def _t28_rhs(c: _Ctx, t_mat, t):
    g = _balanced_sum(t_mat, t)
    tt = aluthge_t(t_mat, t)
    inner = CertifiedValue(_n(t_mat) ** 2) + c.w(tt).square() + 0.5 * c.w(g @ tt + tt @ g)
    return 0.5 * inner.sqrt()


def _t25_factors(a, b, c_, d, e, f, t):
    """``P = C*|B|^{2t}C + F*|E|^{2t}F`` and both forms of the second factor.

    ``q_norm`` is ``A|B*|^{2(1-t)}A* + D|E*|^{2(1-t)}D*`` (the norm factor as
    displayed); ``q_omega`` is ``A*|B*|^{2(1-t)}A + D*|E*|^{2(1-t)}D`` (the
    factor displayed inside the numerical radius).
    """
    p = _h(c_) @ _abs_pow(b, 2 * t) @ c_ + _h(f) @ _abs_pow(e, 2 * t) @ f
    bs = _abs_star_pow(b, 2 * (1 - t))
    es = _abs_star_pow(e, 2 * (1 - t))
    q_norm = a @ bs @ _h(a) + d @ es @ _h(d)
    q_omega = _h(a) @ bs @ a + _h(d) @ es @ d
    return p, q_norm, q_omega


# ---------------------------------------------------------------------------
# term functions; each returns a list of CertifiedValue


def _equiv_lo(c, a):
    return [CertifiedValue(0.5 * _n(a)), c.w(a)]


def _equiv_hi(c, a):
    return [c.w(a), CertifiedValue(_n(a))]


def _kitt_product(c, a, b):
    return [c.w(a @ b), CertifiedValue(0.5 * _n(_sqs(a) + _sq(b)))]


def _kitt_square(c, a):
    return [c.w(a).square(), CertifiedValue(0.5 * _n(_sq(a) + _sqs(a)))]


def _kitt_abs(c, a):
    return [c.w(a), CertifiedValue(0.5 * _n(la.abs_matrix(a) + la.abs_matrix(_h(a))))]


def _kitt_power(c, a):
    return [c.w(a), CertifiedValue(0.5 * (_n(a) + math.sqrt(_n(a @ a))))]


def _yam1(c, a):
    return [c.w(a), 0.5 * (_n(a) + c.w(aluthge_t(a, 0.5)))]


def _yam2(c, a):
    at = aluthge_t(a, 0.5)
    return [c.w(at), CertifiedValue(_n(at)), CertifiedValue(math.sqrt(_n(a @ a))), CertifiedValue(_n(a))]


def _comm1(c, a, b):
    return [c.w(a @ b + b @ a), 2 * math.sqrt(2) * c.w(a) * _n(b)]


def _comm2(c, a, b):
    return [c.w(a @ b + _h(b) @ a), 2 * c.w(a) * _n(b)]


def _pos_sum(c, p, q):
    cross = la.psd_power(p, 0.5) @ la.psd_power(q, 0.5)
    return [CertifiedValue(_n(p + q)), CertifiedValue(max(_n(p), _n(q)) + _n(cross))]


def _kato(c, t_mat, x, y, t):
    lhs = abs(_inner(t_mat @ x, y)) ** 2
    left = _inner(_abs_pow(t_mat, 2 * t) @ x, x).real
    right = _inner(_abs_star_pow(t_mat, 2 * (1 - t)) @ y, y).real
    return [CertifiedValue(lhs), CertifiedValue(left * right)]


def _buzano(c, x, y, e):
    lhs = abs(_inner(x, e) * _inner(y, e))
    rhs = 0.5 * (abs(_inner(x, y)) + np.linalg.norm(x) * np.linalg.norm(y))
    return [CertifiedValue(lhs), CertifiedValue(rhs)]


def _aok_sum(c, a, b):
    wa, wb = c.w(a), c.w(b)
    root = ((wa - wb).square() + 4 * c.sup_prod(a, b)).sqrt()
    return [c.w(a + b), 0.5 * (wa + wb + root)]


def _sup_re(c, a):
    return [c.w(a), c.sup_re_norm(a)]


def _block(c, x, y):
    o = _zero(x.shape[0])
    return [
        c.w(la.block_2x2(o, x, y, o)),
        c.w(la.block_2x2(o, y, x, o)),
        c.w(la.block_2x2(o, x, -y, o)),
    ]


def _t21(c, a, b, c_, d):
    o = _zero(a.shape[0])
    ab, cd = a @ b, c_ @ d
    dc = _h(d) @ _h(c_)
    inner = c.w(ab @ ab) + c.w(dc @ dc) + _n(ab @ dc + dc @ ab)
    return [c.w(ab + cd), c.w(la.block_2x2(o, ab, cd, o)) + 0.5 * inner.sqrt()]


def _t21p(c, a, c_, s):
    o = _zero(a.shape[0])
    inner = c.w(a @ a) + c.w(c_ @ c_) + _n(a @ _h(c_) + _h(c_) @ a)
    return [c.w(a + s * c_), c.w(la.block_2x2(o, a, c_, o)) + 0.5 * inner.sqrt()]


def _eq17(c, a, c_, s):
    inner = c.w(a @ a) + c.w(c_ @ c_) + _n(a @ _h(c_) + _h(c_) @ a)
    return [c.w(a + s * c_), c.w(a - s * c_) + abs(inner).sqrt()]


def _eq19(c, a):
    gap = _n(la.real_part(a)) - _n(la.imag_part(a))
    a2 = a @ a
    return [CertifiedValue(gap * gap), 0.5 * (c.w(a2) + _n(a2))]


def _nilp(c, a):
    return [CertifiedValue(_n(la.real_part(a))), CertifiedValue(_n(la.imag_part(a)))]


def _t25t(c, a, b, c_, d, e, f, t):
    p, q_norm, q_omega = _t25_factors(a, b, c_, d, e, f, t)
    lhs = c.w(a @ b @ c_ + d @ e @ f).square()
    return [lhs, 0.5 * c.w(q_omega @ p) + 0.5 * _n(p) * _n(q_norm)]


def _t25min(c, a, b, c_, d, e, f):
    lhs = c.w(a @ b @ c_ + d @ e @ f).square()
    p1 = _h(c_) @ _sq(b) @ c_ + _h(f) @ _sq(e) @ f
    alpha = c.w((_sq(a) + _sq(d)) @ p1) + _n(p1) * _n(_sqs(a) + _sqs(d))
    q0 = _h(a) @ _sqs(b) @ a + _h(d) @ _sqs(e) @ d
    p0 = _sq(c_) + _sq(f)
    beta = c.w(q0 @ p0) + _n(p0) * _n(a @ _sqs(b) @ _h(a) + d @ _sqs(e) @ _h(d))
    return [lhs, 0.5 * alpha, 0.5 * beta]


def _rem1(c, a, c_, d, f):
    lhs = c.w(a @ c_ + d @ f).square()
    right = _sq(c_) + _sq(f)
    rhs = 0.5 * (c.w((_sq(a) + _sq(d)) @ right) + _n(right) * _n(_sqs(a) + _sqs(d)))
    return [lhs, rhs]


def _rem2(c, a, b, c_):
    lhs = c.w(a @ b @ c_).square()
    cbc = _h(c_) @ _sq(b) @ c_
    alpha = c.w(_sq(a) @ cbc) + _n(a) ** 2 * _n(cbc)
    aba = _h(a) @ _sqs(b) @ a
    beta = c.w(aba @ _sq(c_)) + _n(c_) ** 2 * _n(a @ _sqs(b) @ _h(a))
    return [lhs, 0.5 * alpha, 0.5 * beta]


def _cor2(c, a, b):
    alpha = math.sqrt(2) * math.sqrt(_n(_h(b) @ _sq(a) @ b + a @ _sqs(b) @ _h(a)))
    beta = _n(_sqs(a) + _sq(b))
    return [c.w(a @ b), CertifiedValue(0.5 * alpha), CertifiedValue(0.5 * beta)]


def _wab(c, t_mat, t):
    alpha = math.sqrt(2) * math.sqrt(_n(_sq(t_mat) + _sqs(t_mat)))
    beta = _n(_abs_star_pow(t_mat, 2 * (1 - t)) + _abs_pow(t_mat, 2 * t))
    return [c.w(t_mat), CertifiedValue(0.5 * alpha), CertifiedValue(0.5 * beta)]


def _e15(c, a, b):
    return [c.w(a @ b), _e15_rhs(c, a, b, _sq(a) + _sqs(b))]


def _t27(c, a, b):
    ratio = _n(b) / _n(a)
    s = ratio * _sq(a) + _sqs(b) / ratio
    return [c.w(a @ b), _e15_rhs(c, a, b, s)]


def _mcintosh(c, a, x, b):
    return [CertifiedValue(2 * _n(a @ x @ b)), CertifiedValue(_n(_sq(a) @ x + x @ _sqs(b)))]


def _e4(c, t_mat, t):
    return [CertifiedValue(_n(_balanced_sum(t_mat, t))), CertifiedValue(2 * _n(t_mat))]


def _t28(c, t_mat, t):
    return [c.w(t_mat), _t28_rhs(c, t_mat, t)]


def _chain1(c, t_mat, t):
    nt = _n(t_mat)
    wt = c.w(aluthge_t(t_mat, t))
    g_norm = _n(_balanced_sum(t_mat, t))
    mid = 0.5 * (CertifiedValue(nt**2) + wt.square() + wt * g_norm).sqrt()
    return [c.w(t_mat), _t28_rhs(c, t_mat, t), mid, 0.5 * (nt + wt)]


def _chain2(c, t_mat, t):
    parts = polar_decompose(t_mat)
    a = parts.isometry @ la.psd_power(parts.positive, 1 - t)
    b = la.psd_power(parts.positive, t)
    s = _abs_pow(t_mat, 2 * (1 - t)) + _abs_pow(t_mat, 2 * t)
    wt = c.w(aluthge_t(t_mat, t))
    ns = _n(s)
    mid = 0.5 * (CertifiedValue(0.25 * ns**2) + wt.square() + wt * ns).sqrt()
    return [c.w(t_mat), _e15_rhs(c, a, b, _sq(a) + _sqs(b)), mid, 0.25 * ns + 0.5 * wt]


def _zero_aluthge(c, t_mat, t):
    return [c.w(t_mat), CertifiedValue(0.5 * _n(t_mat))]


# ---------------------------------------------------------------------------
# registry

M, P, V, U, T, S = Role.MATRIX, Role.PSD, Role.VECTOR, Role.UNIT, Role.T, Role.SIGN
INEQ, IDEN, ORD = Kind.INEQUALITY, Kind.IDENTITY, Kind.ORDERING

_KITT = ("Lemma 1.1", "Among the most interesting bounds")
_COMM = ("Sec. 1, product bounds", "It was shown in")
_T25 = ("Theorem 2.5", "Then for any $0\\le t\\le 1$")

_ENTRIES: tuple[CatalogEntry, ...] = (
    CatalogEntry("EQ-equiv-lo", "Sec. 1, eq_equivalent", "a more manageable quantity to compute",
                 (M,), INEQ, "1/2 |A| <= w(A)", _equiv_lo),
    CatalogEntry("EQ-equiv-hi", "Sec. 1, eq_equivalent", "a more manageable quantity to compute",
                 (M,), INEQ, "w(A) <= |A|", _equiv_hi),
    CatalogEntry("L1.1a-eq10", *_KITT, (M, M), INEQ,
                 "w(AB) <= 1/2 | |A*|^2 + |B|^2 |", _kitt_product),
    CatalogEntry("L1.1b", *_KITT, (M,), INEQ, "w(A)^2 <= 1/2 | |A|^2 + |A*|^2 |", _kitt_square),
    CatalogEntry("L1.1c", *_KITT, (M,), INEQ, "w(A) <= 1/2 | |A| + |A*| |", _kitt_abs),
    CatalogEntry("L1.1d-eq16", *_KITT, (M,), INEQ, "w(A) <= 1/2 (|A| + |A^2|^(1/2))", _kitt_power),
    CatalogEntry("EQ-yam1", "Sec. 1, eq_yam_1", "it is shown that", (M,), INEQ,
                 "w(A) <= 1/2 (|A| + w(Aluthge(A)))", _yam1),
    CatalogEntry("EQ-yam2", "Sec. 1, eq_yam_2", "refines the second inequality", (M,), ORD,
                 "w(Aluthge(A)) <= |Aluthge(A)| <= |A^2|^(1/2) <= |A|", _yam2),
    CatalogEntry("EQ-comm1", *_COMM, (M, M), INEQ, "w(AB + BA) <= 2 sqrt(2) w(A) |B|", _comm1),
    CatalogEntry("EQ-comm2-eq12", *_COMM, (M, M), INEQ, "w(AB + B*A) <= 2 w(A) |B|", _comm2),
    CatalogEntry("L-pos-sum", "Lemma (positive sum)", "be two positive operators", (P, P), INEQ,
                 "|A + B| <= max(|A|, |B|) + |A^(1/2) B^(1/2)|, A, B >= 0", _pos_sum),
    CatalogEntry("L-kato", "Lemma (mixed Schwarz)", "Then for any $x,y\\in \\mathcal H$",
                 (M, V, V, T), INEQ,
                 "|<Tx,y>|^2 <= <|T|^(2t) x,x> <|T*|^(2(1-t)) y,y>", _kato),
    CatalogEntry("L-buzano", "Lemma (Buzano)", "with $\\left\\| e \\right\\|=1$. Then", (V, V, U), INEQ,
                 "|<x,e><y,e>| <= 1/2 (|<x,y>| + |x||y|), |e| = 1", _buzano),
    CatalogEntry("L-AOK-sum", "Lemma (sum refinement)", "refinement of the triangle inequality",
                 (M, M), INEQ,
                 "w(A+B) <= 1/2 (w(A) + w(B) + sqrt((w(A)-w(B))^2 + 4 sup_th |Re(e^ith A) Re(e^ith B)|))",
                 _aok_sum),
    CatalogEntry("EQ-supR", "Sec. 1, support identity", "due to the fact that", (M,), IDEN,
                 "w(A) = sup_th |Re(e^ith A)|", _sup_re),
    CatalogEntry("L-block", "Lemma (block)", "Let $X,Y\\in\\mathcal{B}(\\mathcal{H})$. Then", (M, M), IDEN,
                 "w([O X; Y O]) = w([O Y; X O]) = w([O X; -Y O])", _block),
    CatalogEntry("T2.1", "Theorem 2.1", "excellent application of Lemma", (M, M, M, M), INEQ,
                 "w(AB+CD) <= w([O AB; CD O]) + 1/2 sqrt(w((AB)^2) + w((D*C*)^2) + |AB D*C* + D*C* AB|)",
                 _t21),
    CatalogEntry("T2.1p", "Theorem 2.1", "excellent application of Lemma", (M, M, S), INEQ,
                 "w(A +- C) <= w([O A; C O]) + 1/2 sqrt(w(A^2) + w(C^2) + |AC* + C*A|)", _t21p),
    CatalogEntry("C-eq17", "Corollary (difference bound)", "can be obtained from", (M, M, S), INEQ,
                 "w(A +- C) <= w(A -+ C) + sqrt(|w(A^2) + w(C^2) + |AC* + C*A||)", _eq17),
    CatalogEntry("C-eq19", "Corollary (difference bound)", "As a byproduct of inequality", (M,), INEQ,
                 "| |Re A| - |Im A| |^2 <= 1/2 (w(A^2) + |A^2|)", _eq19),
    CatalogEntry("C-nilp", "Corollary (square zero)", "If ${{A}^{2}}=O$, then", (M,), IDEN,
                 "A^2 = O  =>  |Re A| = |Im A|", _nilp, hypothesis="square_zero"),
    CatalogEntry("T2.5-t", *_T25, (M, M, M, M, M, M, T), INEQ,
                 "w^2(ABC+DEF) <= 1/2 w((A*|B*|^(2(1-t))A + D*|E*|^(2(1-t))D)(C*|B|^(2t)C + F*|E|^(2t)F))"
                 " + 1/2 |C*|B|^(2t)C + F*|E|^(2t)F| |A|B*|^(2(1-t))A* + D|E*|^(2(1-t))D*|", _t25t),
    CatalogEntry("T2.5-min", *_T25, (M, M, M, M, M, M), INEQ,
                 "w^2(ABC+DEF) <= 1/2 min(alpha, beta)", _t25min, branches=("alpha", "beta")),
    CatalogEntry("R-I", "Remark (I)", "The case $B=E=I$", (M, M, M, M), INEQ,
                 "w(AC+DF)^2 <= 1/2 (w((|A|^2+|D|^2)(|C|^2+|F|^2)) + ||C|^2+|F|^2| ||A*|^2+|D*|^2|)",
                 _rem1),
    CatalogEntry("R-II", "Remark (II)", "The case $D=E=F=O$", (M, M, M), INEQ,
                 "w(ABC)^2 <= 1/2 min(alpha', beta')", _rem2, branches=("alpha'", "beta'")),
    CatalogEntry("C2-prod", "Corollary 2", "taking supremum over $\\theta \\in \\mathbb{R}$", (M, M), INEQ,
                 "w(AB) <= 1/2 min(sqrt(2) |B*|A|^2B + A|B*|^2A*|^(1/2), ||A*|^2 + |B|^2|)",
                 _cor2, branches=("alpha0", "beta0")),
    CatalogEntry("C-wAB", "Corollary (single operator)",
                 "We notice that the above corollary implies two particular inequalities", (M, T), INEQ,
                 "w(T) <= 1/2 min(sqrt(2) ||T|^2+|T*|^2|^(1/2), ||T*|^(2(1-t)) + |T|^(2t)|)",
                 _wab, branches=("alpha1", "beta1")),
    CatalogEntry("E15-unbal", "Theorem 2.7, unbalanced form", "By the Polarization identity", (M, M), INEQ,
                 "w(AB) <= 1/2 sqrt(1/4 |S|^2 + w(BA)^2 + 1/2 w(S BA + BA S)), S = |A|^2 + |B*|^2", _e15),
    CatalogEntry("T2.7-bal", "Theorem 2.7", "Replacing $A$ by", (M, M), INEQ,
                 "E15-unbal with S = (|B|/|A|) |A|^2 + (|A|/|B|) |B*|^2", _t27, nonzero=(0, 1)),
    CatalogEntry("E3-mcintosh", "Eq. (3)", "we also know that", (M, M, M), INEQ,
                 "2 |AXB| <= |A*AX + XBB*|", _mcintosh),
    CatalogEntry("E4-identity", "Eq. (4)", "we also used the following identity", (M, T), IDEN,
                 "| |T|^(2t-1) |T|^(2(1-t)) + |T|^(1-2t) |T|^(2t) | = 2 |T|", _e4, nonzero=(0,)),
    CatalogEntry("T2.8-aluthge", "Theorem 2.8", "be the polar decomposition of $T$", (M, T), INEQ,
                 "w(T) <= 1/2 sqrt(|T|^2 + w(T_t)^2 + 1/2 w(G T_t + T_t G)), T_t = |T|^t U |T|^(1-t)",
                 _t28, nonzero=(0,)),
    CatalogEntry("R-chain1", "Remark after Theorem 2.8", "obtained by Abu Omar and Kittaneh", (M, T), ORD,
                 "w(T) <= T2.8 bound <= 1/2 sqrt(|T|^2 + w(T_t)^2 + w(T_t)|G|) <= 1/2 (|T| + w(T_t))",
                 _chain1, nonzero=(0,)),
    CatalogEntry("R-chain2", "Remark after Theorem 2.8", "our result improves", (M, T), ORD,
                 "w(T) <= unbalanced bound <= ... <= 1/4 ||T|^(2(1-t)) + |T|^(2t)| + 1/2 w(T_t)",
                 _chain2, nonzero=(0,)),
    CatalogEntry("R-zero", "Final remark", "Combining the first inequality in", (M, T), IDEN,
                 "T_t = O  =>  w(T) = 1/2 |T|", _zero_aluthge, hypothesis="aluthge_zero", nonzero=(0,)),
)

_BY_ID = {e.id: e for e in _ENTRIES}
assert len(_BY_ID) == len(_ENTRIES), "duplicate entry ids"


def list_entries() -> list[CatalogEntry]:
    return list(_ENTRIES)


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return _BY_ID[entry_id]
    except KeyError:
        raise UnknownEntry(entry_id) from None


def registry_json() -> list[dict]:
    return [e.to_dict() for e in _ENTRIES]


# ---------------------------------------------------------------------------
# validation


def _check_operands(entry: CatalogEntry, operands: Sequence) -> list:
    if len(operands) != len(entry.arity):
        raise SignatureMismatch(
            f"{entry.id} takes {len(entry.arity)} operands {[r.value for r in entry.arity]}, "
            f"got {len(operands)}"
        )
    out = []
    dim = None
    for i, (role, op) in enumerate(zip(entry.arity, operands)):
        if role in (Role.T, Role.SIGN):
            try:
                val = float(op)
            except (TypeError, ValueError):
                raise SignatureMismatch(f"operand {i} of {entry.id} must be a scalar") from None
            if role is Role.T and not 0.0 <= val <= 1.0:
                raise ValueError(f"t outside [0, 1]: {val}")
            if role is Role.SIGN and val not in (1.0, -1.0):
                raise SignatureMismatch(f"sign operand must be +1 or -1, got {val}")
            out.append(val)
            continue
        arr = np.asarray(op, dtype=np.complex128)
        if role in (Role.VECTOR, Role.UNIT):
            arr = arr.reshape(-1) if arr.ndim == 2 and 1 in arr.shape else arr
            if arr.ndim != 1:
                raise SignatureMismatch(f"operand {i} of {entry.id} must be a vector")
            size = arr.shape[0]
            if role is Role.UNIT and abs(np.linalg.norm(arr) - 1.0) > 1e-12:
                raise SignatureMismatch(f"operand {i} of {entry.id} must have unit norm")
        else:
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise SignatureMismatch(f"operand {i} of {entry.id} must be a square matrix")
            size = arr.shape[0]
            if role is Role.PSD and not la.is_psd(arr):
                raise SignatureMismatch(f"operand {i} of {entry.id} must be positive semidefinite")
        if not np.all(np.isfinite(arr)):
            raise SignatureMismatch(f"operand {i} of {entry.id} has non-finite entries")
        if dim is None:
            dim = size
        elif size != dim:
            raise SignatureMismatch(f"operand {i} of {entry.id} has dimension {size}, expected {dim}")
        out.append(arr)
    for i in entry.nonzero:
        if _n(out[i]) == 0.0:
            raise ZeroNormOperand(f"operand {i} of {entry.id} must be nonzero")
    return out


def hypothesis_holds(entry: CatalogEntry, operands: Sequence) -> bool:
    if entry.hypothesis is None:
        return True
    if entry.hypothesis == "square_zero":
        a = np.asarray(operands[0], dtype=np.complex128)
        return _n(a @ a) <= 1e-12 * max(_n(a) ** 2, 1e-300)
    if entry.hypothesis == "aluthge_zero":
        t_mat = np.asarray(operands[0], dtype=np.complex128)
        return _n(aluthge_t(t_mat, float(operands[1]))) <= 1e-12 * _n(t_mat)
    raise AssertionError(f"unknown hypothesis {entry.hypothesis}")


# ---------------------------------------------------------------------------
# evaluation


def _link(entry, kind, lo: CertifiedValue, hi: CertifiedValue, tol: float) -> EvalResult:
    margin = hi.value - lo.value
    cert = lo.error_radius + hi.error_radius
    scale = max(1.0, abs(hi.value))
    slack = (tol + cert) * scale
    passed = abs(margin) <= slack if kind is Kind.IDENTITY else margin >= -slack
    return EvalResult(entry.id, kind, lo.value, hi.value, margin, cert, scale, passed, (lo.value, hi.value))


def evaluate_chain(entry_id: str, operands: Sequence, tol: float = DEFAULT_TOL) -> list[EvalResult]:
    """Evaluate an entry and return one result per adjacent pair (or branch).

    For a min-form inequality each branch is its own result, checked against
    the same left-hand side.
    """
    entry = get_entry(entry_id)
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    ops = _check_operands(entry, operands)
    if not hypothesis_holds(entry, ops):
        raise HypothesisNotMet(f"{entry.id} requires {entry.hypothesis}")
    vals = entry.terms(_Ctx(tol), *ops)
    if entry.kind is Kind.INEQUALITY:
        return [_link(entry, entry.kind, vals[0], rhs, tol) for rhs in vals[1:]]
    return [_link(entry, entry.kind, lo, hi, tol) for lo, hi in zip(vals, vals[1:])]


def evaluate(entry_id: str, operands: Sequence, tol: float = DEFAULT_TOL) -> EvalResult:
    """Evaluate one relation on concrete operands.

    Numerical radii are certified to ``tol / 4`` (relative to
    ``max(1, |X|)``). The relation passes iff
    ``margin >= -(tol + certified_error) * max(1, |rhs|)``; for identities the
    absolute deviation is compared against the same threshold.

    Raises
    ------
    SignatureMismatch, ZeroNormOperand, HypothesisNotMet
        On operands that do not fit the entry.
    ValueError
        If a ``t`` operand lies outside ``[0, 1]``.
    """
    entry = get_entry(entry_id)
    links = evaluate_chain(entry_id, operands, tol)
    worst = min(links, key=lambda r: r.scaled_margin)
    values = tuple(x for r in links[:1] for x in r.values) + tuple(r.values[1] for r in links[1:])
    branches = {}
    if entry.branches:
        values = (links[0].lhs,) + tuple(r.rhs for r in links)
        branches = {name: r.margin for name, r in zip(entry.branches, links)}
        # the displayed bound is the minimum of the branches
        worst = min(links, key=lambda r: r.rhs)
        if not all(r.passed for r in links):
            worst = min(links, key=lambda r: r.scaled_margin)
    lhs = links[0].lhs
    rhs = links[-1].rhs if entry.kind is not Kind.INEQUALITY else worst.rhs
    return EvalResult(
        entry.id,
        entry.kind,
        lhs,
        rhs,
        worst.margin,
        worst.certified_error,
        worst.scale,
        all(r.passed for r in links),
        values,
        branches,
    )
