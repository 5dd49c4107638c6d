"""Randomized property checks for the determinant and eigenvalue inequalities.

Float64 only; inequalities are accepted with a small negative slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NotPSD, ParamError, ShapeMismatch
from .exact import RatLike, as_rat

SLACK = 1e-9
PSD_TOL = 1e-10
MAX_FIEDLER_SIZE = 12


def _rel_tol(scale: float) -> float:
    return SLACK * max(1.0, abs(scale))


# -- random inputs ------------------------------------------------------------

def _psd_from_rng(rng: np.random.Generator, size: int, trace: float) -> np.ndarray:
    a = rng.standard_normal((size, size))
    m = a @ a.T
    m = (m + m.T) / 2
    return m * (trace / np.trace(m))


def random_psd(size: int, trace: RatLike, seed: int, max_tries: int = 1000) -> np.ndarray:
    """Seeded random real symmetric PSD matrix with the given trace.

    With trace 1 every eigenvalue is forced strictly below 1 by rejection,
    which is impossible for a 1x1 matrix.
    """
    if size < 1:
        raise ParamError("size must be >= 1")
    t = float(as_rat(trace))
    if t < 0:
        raise ParamError("trace must be >= 0")
    if t == 0:
        return np.zeros((size, size))
    rng = np.random.default_rng(seed)
    strict = t == 1.0
    if strict and size == 1:
        raise ParamError("a 1x1 matrix of trace 1 has eigenvalue 1, not < 1")
    for _ in range(max_tries):
        m = _psd_from_rng(rng, size, t)
        if not strict or np.linalg.eigvalsh(m)[-1] < 1.0:
            return m
    raise ParamError("rejection sampling did not produce eigenvalues < 1")


def random_orthogonal(rng: np.random.Generator, size: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((size, size)))
    return q * np.sign(np.diag(r))


def random_complex_structure(rng: np.random.Generator, size: int) -> np.ndarray:
    """O J0 O^T with J0 the standard block structure; orthogonal, J^2 = -Id."""
    if size % 2:
        raise ShapeMismatch("complex structures need even dimension")
    j0 = np.zeros((size, size))
    for k in range(0, size, 2):
        j0[k, k + 1] = -1.0
        j0[k + 1, k] = 1.0
    o = random_orthogonal(rng, size)
    return o @ j0 @ o.T


def random_subspace(rng: np.random.Generator, size: int, p: int) -> np.ndarray:
    """Orthonormal basis (columns) of a random p-dimensional subspace."""
    q, _ = np.linalg.qr(rng.standard_normal((size, p)))
    return q


# -- Fiedler ------------------------------------------------------------------

@dataclass
class FiedlerReport:
    det: float
    product: float
    margin: float
    passed: bool
    witness: Optional[list[np.ndarray]] = None


def _checked_spectrum(m: np.ndarray) -> np.ndarray:
    if np.max(np.abs(m - m.conj().T), initial=0.0) > PSD_TOL * max(1.0, np.max(np.abs(m))):
        raise NotPSD("matrix is not Hermitian")
    ev = np.linalg.eigvalsh(m)
    if ev[0] < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {ev[0]:.3e} < -{PSD_TOL}")
    return np.clip(ev, 0.0, None)


def fiedler_check(matrices: Sequence[np.ndarray]) -> FiedlerReport:
    """det(sum A_j) >= prod_i sum_j alpha_{i,j} with each summand's eigenvalues ascending."""
    if not matrices:
        raise ShapeMismatch("need at least one matrix")
    mats = [np.asarray(m) for m in matrices]
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ShapeMismatch(f"matrices must be square, got {shape}")
    if shape[0] > MAX_FIEDLER_SIZE:
        raise ShapeMismatch(f"size {shape[0]} exceeds {MAX_FIEDLER_SIZE}")
    if any(m.shape != shape for m in mats):
        raise ShapeMismatch("matrices differ in shape")
    spectra = [_checked_spectrum(m) for m in mats]
    product = float(np.prod(np.sum(spectra, axis=0)))
    det = float(np.real(np.linalg.det(sum(mats))))
    margin = det - product
    passed = margin >= -_rel_tol(product)
    return FiedlerReport(det, product, margin, passed, None if passed else mats)


# -- the compressed operator ----------------------------------------------------

@dataclass(frozen=True)
class SpectrumPair:
    """lambdas: compressed spectrum, descending; betas: ambient spectrum, ascending."""

    lambdas: np.ndarray
    betas: np.ndarray

    @classmethod
    def of(cls, h: np.ndarray, basis: np.ndarray) -> "SpectrumPair":
        lam = np.linalg.eigvalsh(basis.T @ h @ basis)[::-1]
        beta = np.linalg.eigvalsh(h)
        return cls(lam, beta)

    def interlaced(self) -> bool:
        nd = len(self.betas)
        return all(
            self.lambdas[i] <= self.betas[nd - 1 - i] + PSD_TOL for i in range(len(self.lambdas))
        )

    def trace_ok(self) -> bool:
        return abs(float(np.sum(self.betas)) - 1.0) <= 1e-12

    def in_unit_range(self) -> bool:
        return bool(np.all(self.betas > -PSD_TOL) and np.all(self.betas < 1.0))


@dataclass(frozen=True)
class KxwTrial:
    det: float
    product: float
    spectra: SpectrumPair
    jhj_ok: bool

    @property
    def margin(self) -> float:
        return self.det - self.product

    @property
    def passed(self) -> bool:
        return self.margin >= -_rel_tol(self.product)


def kxw_trial(d: int, h: np.ndarray, structures: Sequence[np.ndarray],
              basis: np.ndarray) -> KxwTrial:
    """Compress Id - h - sum J h J to span(basis) and compare its det with the eigenvalue product."""
    nd = h.shape[0]
    if len(structures) != d - 1:
        raise ShapeMismatch(f"need d - 1 = {d - 1} complex structures, got {len(structures)}")
    k = np.eye(nd) - h
    beta = np.linalg.eigvalsh(h)
    jhj_ok = True
    for j in structures:
        term = -j @ h @ j
        k += term
        ev = np.linalg.eigvalsh((term + term.T) / 2)
        jhj_ok &= bool(ev[0] >= -PSD_TOL and np.allclose(ev, beta, atol=1e-10))
    kw = basis.T @ k @ basis
    spectra = SpectrumPair.of(h, basis)
    p = basis.shape[1]
    product = float(np.prod(1.0 - spectra.lambdas + (d - 1) * spectra.betas[:p]))
    return KxwTrial(float(np.linalg.det(kw)), product, spectra, jhj_ok)


@dataclass
class KxwReport:
    d: int
    nd: int
    p: int
    trials: int
    passed: int
    interlacing_ok: bool
    jhj_ok: bool
    min_margin: float
    failures: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials and self.interlacing_ok and self.jhj_ok


def kxw_inequality_check(d: int, nd: int, p: int, trials: int, seed: int) -> KxwReport:
    """Randomized check of det k_W >= prod (1 - lambda_i + (d-1) beta_i); trial i uses seed ^ i."""
    if d not in (2, 4, 8):
        raise ParamError(f"d must be 2, 4 or 8, got {d}")
    if nd % 2 or nd < 2 or nd > 16:
        raise ShapeMismatch(f"nd must be even and <= 16, got {nd}")
    if not 1 <= p <= nd:
        raise ShapeMismatch(f"p must lie in 1..{nd}, got {p}")
    report = KxwReport(d, nd, p, trials, 0, True, True, float("inf"))
    for i in range(trials):
        rng = np.random.default_rng(seed ^ i)
        h = random_psd(nd, 1, int(rng.integers(2 ** 63)))
        js = [random_complex_structure(rng, nd) for _ in range(d - 1)]
        basis = random_subspace(rng, nd, p)
        t = kxw_trial(d, h, js, basis)
        report.min_margin = min(report.min_margin, t.margin)
        report.interlacing_ok &= t.spectra.interlaced()
        report.jhj_ok &= t.jhj_ok
        if t.passed:
            report.passed += 1
        else:
            report.failures.append(i)
    return report
