"""Seeded operand generators, corpus sweeps, tightness search and refinement tables.

Random streams come from numpy's Philox counter-based generator keyed by
``(seed, stream)``. Trial ``i`` of a spec always uses stream ``i``, so a trial
can be reproduced on its own and the schedule never changes the result.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import catalog as cat
from . import linalg as la
from .catalog import Role

FAMILIES = ("gaussian", "hermitian", "psd", "normal", "unitary", "nilpotent", "rank_deficient")
T_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))
SIGNS = (1.0, -1.0)
PREDICATE_TOL = 1e-12

# key of the stream used by ``generate``; trials use their own index
_GENERATE_STREAM = 0x67656E
_SEED_MASK = (1 << 64) - 1


class IncompatiblePairing(ValueError):
    code = "INCOMPATIBLE_PAIRING"


class FamilyPredicateError(AssertionError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    dim: int
    seed: int = 42
    scale: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if int(self.dim) < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    def to_dict(self) -> dict:
        return asdict(self)


def rng_for(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & _SEED_MASK, stream & _SEED_MASK]))


# ---------------------------------------------------------------------------
# families


def _ginibre(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _haar(rng, n):
    q, r = np.linalg.qr(_ginibre(rng, n))
    d = np.diagonal(r)
    phase = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * phase


def sample(family: str, rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """Draw one matrix of ``family``. Unitary draws ignore ``scale``."""
    if family == "gaussian":
        return scale * _ginibre(rng, n)
    if family == "hermitian":
        g = _ginibre(rng, n)
        return scale * (g + g.conj().T) / 2
    if family == "psd":
        g = _ginibre(rng, n)
        p = scale * (g @ g.conj().T) / n
        return (p + p.conj().T) / 2
    if family == "normal":
        q = _haar(rng, n)
        lam = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        return (q * lam) @ q.conj().T
    if family == "unitary":
        return _haar(rng, n)
    if family == "nilpotent":
        return scale * np.triu(_ginibre(rng, n), 1)
    if family == "rank_deficient":
        d = np.ones(n)
        d[-1] = 0.0
        return scale * (_ginibre(rng, n) * d) @ _ginibre(rng, n)
    raise ValueError(f"unknown family {family!r}")


def satisfies_family(family: str, a: np.ndarray, tol: float = PREDICATE_TOL) -> bool:
    a = np.asarray(a, dtype=np.complex128)
    if not np.all(np.isfinite(a)):
        return False
    n = a.shape[0]
    size = max(1.0, la.spectral_norm(a))
    if family == "gaussian":
        return True
    if family == "hermitian":
        return la.spectral_norm(a - a.conj().T) <= tol * size
    if family == "psd":
        return la.is_psd(a, rel=tol)
    if family == "normal":
        return la.spectral_norm(a.conj().T @ a - a @ a.conj().T) <= tol * size**2
    if family == "unitary":
        return la.spectral_norm(a.conj().T @ a - np.eye(n)) <= tol
    if family == "nilpotent":
        return not np.any(np.tril(a))
    if family == "rank_deficient":
        s = np.linalg.svd(a, compute_uv=False)
        return s[-1] <= tol * size
    raise ValueError(f"unknown family {family!r}")


def _checked(family, a):
    if not satisfies_family(family, a):
        raise FamilyPredicateError(f"generated matrix violates the {family} predicate")
    return a


def generate(spec: GeneratorSpec, count: int) -> list[np.ndarray]:
    """Deterministic stream of ``count`` matrices from ``spec``."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = rng_for(spec.seed, _GENERATE_STREAM)
    return [_checked(spec.family, sample(spec.family, rng, spec.dim, spec.scale)) for _ in range(count)]


def draw_operands(entry: cat.CatalogEntry, spec: GeneratorSpec, rng) -> list:
    """Operands for one trial; ``t`` and sign slots are left as ``None``."""
    ops = []
    n = spec.dim
    for role in entry.arity:
        if role in (Role.MATRIX, Role.PSD):
            ops.append(_checked(spec.family, sample(spec.family, rng, n, spec.scale)))
        elif role is Role.VECTOR:
            ops.append(spec.scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n)))
        elif role is Role.UNIT:
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            ops.append(v / np.linalg.norm(v))
        else:
            ops.append(None)
    return ops


# ---------------------------------------------------------------------------
# compatibility


def incompatibility(entry: cat.CatalogEntry, spec: GeneratorSpec) -> str | None:
    """Reason why ``spec`` cannot feed ``entry``, or ``None`` if it can."""
    if Role.PSD in entry.arity and spec.family != "psd":
        return "entry needs positive semidefinite operands"
    if entry.hypothesis is not None and not (spec.family == "nilpotent" and spec.dim == 2):
        return f"hypothesis {entry.hypothesis} is guaranteed only for nilpotent 2x2 input"
    if entry.nonzero and spec.dim == 1 and spec.family in ("nilpotent", "rank_deficient"):
        return "family produces the zero matrix in dimension 1"
    return None


def compatible(entry: cat.CatalogEntry, spec: GeneratorSpec) -> bool:
    return incompatibility(entry, spec) is None


# ---------------------------------------------------------------------------
# suite


@dataclass(frozen=True)
class Violation:
    seed: int
    trial: int
    digest: str
    margin: float
    t: float | None = None
    sign: float | None = None


@dataclass
class CheckReport:
    entry: str
    spec: GeneratorSpec
    trials: int
    evaluations: int
    min_margin: float
    quantiles: tuple[float, float, float, float, float]
    violations: list[Violation] = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self, include_runtime: bool = True) -> dict:
        out = {
            "entry": self.entry,
            "spec": self.spec.to_dict(),
            "trials": self.trials,
            "evaluations": self.evaluations,
            "min_margin": self.min_margin,
            "quantiles": list(self.quantiles),
            "violations": [asdict(v) for v in self.violations],
        }
        if include_runtime:
            out["runtime_ms"] = self.runtime_ms
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "CheckReport":
        return cls(
            entry=obj["entry"],
            spec=GeneratorSpec(**obj["spec"]),
            trials=int(obj["trials"]),
            evaluations=int(obj["evaluations"]),
            min_margin=float(obj["min_margin"]),
            quantiles=tuple(float(q) for q in obj["quantiles"]),
            violations=[Violation(**v) for v in obj["violations"]],
            runtime_ms=float(obj.get("runtime_ms", 0.0)),
        )


CSV_FIELDS = (
    "entry", "family", "dim", "seed", "scale", "trials", "evaluations", "min_margin",
    "p0", "p25", "p50", "p75", "p100", "violations", "runtime_ms",
)


def reports_to_json(reports: Sequence[CheckReport], include_runtime: bool = True) -> str:
    return json.dumps([r.to_dict(include_runtime) for r in reports], indent=2)


def reports_to_csv(reports: Sequence[CheckReport], include_runtime: bool = True) -> str:
    buf = io.StringIO()
    fields = [f for f in CSV_FIELDS if include_runtime or f != "runtime_ms"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in reports:
        row = {
            "entry": r.entry,
            "family": r.spec.family,
            "dim": r.spec.dim,
            "seed": r.spec.seed,
            "scale": repr(r.spec.scale),
            "trials": r.trials,
            "evaluations": r.evaluations,
            "min_margin": repr(r.min_margin),
            "violations": len(r.violations),
        }
        row.update({f"p{p}": repr(q) for p, q in zip((0, 25, 50, 75, 100), r.quantiles)})
        if include_runtime:
            row["runtime_ms"] = f"{r.runtime_ms:.3f}"
        w.writerow(row)
    return buf.getvalue()


def digest(operands: Iterable) -> str:
    h = hashlib.sha256()
    for op in operands:
        arr = np.ascontiguousarray(np.asarray(op, dtype=np.complex128))
        h.update(repr(arr.shape).encode())
        h.update(arr.tobytes())
    return h.hexdigest()[:16]


def sweep_points(entry: cat.CatalogEntry, t_grid: Sequence[float] = T_GRID):
    """Every ``(t, sign)`` combination an entry is evaluated at."""
    ts = tuple(t_grid) if entry.has_t else (None,)
    signs = SIGNS if entry.has_sign else (None,)
    return [(t, s) for t in ts for s in signs]


def _fill(entry, ops, t, s):
    out = list(ops)
    for i, role in enumerate(entry.arity):
        if role is Role.T:
            out[i] = t
        elif role is Role.SIGN:
            out[i] = s
    return out


class _Accumulator:
    def __init__(self, entry, spec):
        self.entry, self.spec = entry, spec
        self.margins: list[float] = []
        self.violations: list[Violation] = []
        self.evaluations = 0
        self.elapsed = 0.0

    def report(self) -> CheckReport:
        m = np.asarray(self.margins)
        qs = tuple(float(q) for q in np.quantile(m, [0, 0.25, 0.5, 0.75, 1.0]))
        return CheckReport(
            entry=self.entry.id,
            spec=self.spec,
            trials=len(self.margins),
            evaluations=self.evaluations,
            min_margin=float(m.min()),
            quantiles=qs,
            violations=self.violations,
            runtime_ms=1e3 * self.elapsed,
        )


def _run_trial(acc: _Accumulator, trial: int, tol: float, t_grid) -> None:
    entry, spec = acc.entry, acc.spec
    start = time.perf_counter()
    ops = draw_operands(entry, spec, rng_for(spec.seed, trial))
    worst = math.inf
    for t, s in sweep_points(entry, t_grid):
        filled = _fill(entry, ops, t, s)
        res = cat.evaluate(entry.id, filled, tol)
        acc.evaluations += 1
        worst = min(worst, res.scaled_margin)
        if not res.passed:
            acc.violations.append(
                Violation(spec.seed, trial, digest(o for o in ops if o is not None), res.scaled_margin, t, s)
            )
    acc.margins.append(worst)
    acc.elapsed += time.perf_counter() - start


def run_suite(
    entries: Sequence[str],
    specs: Sequence[GeneratorSpec],
    trials: int,
    tol: float = cat.DEFAULT_TOL,
    t_grid: Sequence[float] = T_GRID,
    skip_incompatible: bool = False,
    progress=None,
) -> list[CheckReport]:
    """Run every entry against every spec and return one report per pair.

    Margins are scaled by ``max(1, |rhs|)``; each trial records its worst
    margin over the ``t`` grid and both signs. Trials iterate inside specs so
    sub-terms shared between entries on the same operands hit the cache.

    Raises
    ------
    IncompatiblePairing
        If an (entry, spec) pair cannot be run and ``skip_incompatible`` is
        false.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    resolved = [cat.get_entry(e) for e in entries]
    reports = []
    for spec in specs:
        accs = []
        for entry in resolved:
            why = incompatibility(entry, spec)
            if why is None:
                accs.append(_Accumulator(entry, spec))
            elif not skip_incompatible:
                raise IncompatiblePairing(f"{entry.id} with {spec.family} dim {spec.dim}: {why}")
        for trial in range(trials):
            for acc in accs:
                _run_trial(acc, trial, tol, t_grid)
        done = [acc.report() for acc in accs]
        if progress is not None:
            for r in done:
                progress(r)
        reports.extend(done)
    return reports


def default_specs(dims: Iterable[int] = range(2, 7), families: Iterable[str] = FAMILIES, seed: int = 42):
    return [GeneratorSpec(f, d, seed) for f in families for d in dims]


def t_sweep(
    entry_id: str,
    spec: GeneratorSpec,
    trials: int,
    t_grid: Sequence[float] = T_GRID,
    tol: float = cat.DEFAULT_TOL,
) -> list[dict]:
    """Worst scaled margin per ``t`` over ``trials`` operand draws."""
    entry = cat.get_entry(entry_id)
    if not entry.has_t:
        raise ValueError(f"{entry_id} has no t parameter")
    why = incompatibility(entry, spec)
    if why is not None:
        raise IncompatiblePairing(why)
    rows = []
    draws = [draw_operands(entry, spec, rng_for(spec.seed, i)) for i in range(trials)]
    signs = SIGNS if entry.has_sign else (None,)
    for t in t_grid:
        worst, bad = math.inf, 0
        for ops in draws:
            for s in signs:
                res = cat.evaluate(entry_id, _fill(entry, ops, t, s), tol)
                worst = min(worst, res.scaled_margin)
                bad += not res.passed
        rows.append({"t": float(t), "min_margin": worst, "violations": bad})
    return rows


# ---------------------------------------------------------------------------
# tightness search


def project(family: str, a: np.ndarray) -> np.ndarray:
    """Map an arbitrary matrix into ``family`` (used by the tightness search)."""
    if family == "gaussian":
        return a
    if family == "hermitian":
        return (a + a.conj().T) / 2
    if family == "psd":
        p = a @ a.conj().T
        return (p + p.conj().T) / 2
    if family == "normal":
        lam, vec = np.linalg.eig(a)
        q, _ = np.linalg.qr(vec)
        return (q * lam) @ q.conj().T
    if family == "unitary":
        w, _, v = la.svd(a)
        return w @ v.conj().T
    if family == "nilpotent":
        return np.triu(a, 1)
    if family == "rank_deficient":
        w, s, v = la.svd(a)
        s = s.copy()
        s[-1] = 0.0
        return (w * s) @ v.conj().T
    raise ValueError(f"unknown family {family!r}")


@dataclass
class SearchResult:
    entry: str
    operands: list
    margin: float
    evaluations: int

    def to_dict(self) -> dict:
        ops = []
        for op in self.operands:
            if isinstance(op, np.ndarray):
                ops.append(la.matrix_to_dict(op))
            else:
                ops.append(op)
        return {"entry": self.entry, "best_margin": self.margin, "evaluations": self.evaluations, "operands": ops}


class _Objective:
    def __init__(self, entry, spec, tol, t, sign):
        self.entry, self.spec, self.tol = entry, spec, tol
        self.t, self.sign = t, sign
        self.shapes = []
        for role in entry.arity:
            if role in (Role.MATRIX, Role.PSD):
                self.shapes.append((spec.dim, spec.dim))
            elif role in (Role.VECTOR, Role.UNIT):
                self.shapes.append((spec.dim,))
            else:
                self.shapes.append(None)
        self.size = sum(2 * int(np.prod(s)) for s in self.shapes if s is not None)
        self.calls = 0

    def operands(self, x: np.ndarray) -> list:
        ops, k = [], 0
        for role, shape in zip(self.entry.arity, self.shapes):
            if shape is None:
                ops.append(self.t if role is Role.T else self.sign)
                continue
            m = int(np.prod(shape))
            z = (x[k : k + m] + 1j * x[k + m : k + 2 * m]).reshape(shape)
            k += 2 * m
            if len(shape) == 2:
                z = project(self.spec.family, z)
            nz = np.linalg.norm(z)
            if nz > 0 and not (len(shape) == 2 and self.spec.family == "unitary"):
                z = z / nz
            ops.append(z)
        return ops

    def __call__(self, x) -> float:
        self.calls += 1
        try:
            return cat.evaluate(self.entry.id, self.operands(x), self.tol).scaled_margin
        except (cat.CatalogError, la.NotPSDError, np.linalg.LinAlgError):
            return math.inf


def tightness_search(
    entry_id: str,
    spec: GeneratorSpec,
    budget: int,
    tol: float = cat.DEFAULT_TOL,
    t: float = 0.5,
    sign: float = 1.0,
) -> SearchResult:
    """Minimize the scaled margin of an entry over operands from ``spec``.

    A fifth of the budget goes to random restarts from the family generator;
    the rest is coordinate-wise Gaussian hill descent from the best start
    with an adaptive step. Matrix and vector operands are normalized to unit
    Frobenius norm after projection onto the family, so the margin cannot
    shrink merely by scaling the operands toward zero. ``t`` and the sign
    stay fixed. The result is a deterministic function of the arguments.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    entry = cat.get_entry(entry_id)
    why = incompatibility(entry, spec)
    if why is not None:
        raise IncompatiblePairing(why)
    obj = _Objective(entry, spec, tol, t, sign)
    rng = rng_for(spec.seed, 0x7469676874)

    def start():
        parts = []
        for shape in obj.shapes:
            if shape is None:
                continue
            if len(shape) == 2:
                z = sample(spec.family, rng, spec.dim)
            else:
                z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            z = z.reshape(-1)
            parts += [z.real, z.imag]
        return np.concatenate(parts)

    restarts = max(1, budget // 5)
    best_x = start()
    best = obj(best_x)
    for _ in range(restarts - 1):
        x = start()
        m = obj(x)
        if m < best:
            best, best_x = m, x
    step = 0.3
    coord = 0
    while obj.calls < budget and step > 1e-12:
        trial = best_x.copy()
        trial[coord] += step * rng.standard_normal()
        m = obj(trial)
        if m < best:
            best, best_x = m, trial
            step = min(step * 1.5, 1.0)
        else:
            step *= 0.97
        coord = (coord + 1) % obj.size
    return SearchResult(entry.id, obj.operands(best_x), float(best), obj.calls)


# ---------------------------------------------------------------------------
# refinement comparison


@dataclass(frozen=True)
class RefinementRow:
    index: int
    t: float
    omega: float
    refined_bound: float
    classical_bound: float
    power_sum_bound: float
    unbalanced_bound: float
    chain1_ok: bool
    chain2_ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def refinement_comparison(
    matrices: Sequence[np.ndarray],
    t_grid: Sequence[float] = T_GRID,
    tol: float = cat.DEFAULT_TOL,
) -> list[RefinementRow]:
    """Aluthge-based upper bounds for ``w(T)`` side by side.

    Columns per ``(T, t)``: ``w(T)``, the refined bound, the classical
    ``(|T| + w(T_t)) / 2``, the power-sum bound and the unbalanced product
    bound. ``chain1_ok``/``chain2_ok`` report whether both orderings hold.

    Raises
    ------
    ZeroNormOperand
        If some ``T`` is zero.
    """
    rows = []
    for i, t_mat in enumerate(matrices):
        for t in t_grid:
            c1 = cat.evaluate_chain("R-chain1", [t_mat, t], tol)
            c2 = cat.evaluate_chain("R-chain2", [t_mat, t], tol)
            rows.append(
                RefinementRow(
                    index=i,
                    t=float(t),
                    omega=c1[0].lhs,
                    refined_bound=c1[0].rhs,
                    classical_bound=c1[-1].rhs,
                    power_sum_bound=c2[-1].rhs,
                    unbalanced_bound=c2[0].rhs,
                    chain1_ok=all(r.passed for r in c1),
                    chain2_ok=all(r.passed for r in c2),
                )
            )
    return rows
