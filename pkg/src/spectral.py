"""
Spectral Toolkit
Cyclic Jacobi eigensolver for dense symmetric matrices, singular values,
multiplicity clustering and the spectrum of a join of regular blocks.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
CLUSTER_TOL = 1e-6


class SpectralError(ValueError):
    pass


class EigensolverError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (off-diagonal residual {residual:.3e})")
        self.residual = residual


def as_symmetric(m):
    """Copy m into a float64 array, rejecting anything not square and exactly symmetric."""
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise SpectralError("matrix is not symmetric")
    return a


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues, non-increasing."""

    values: tuple

    @classmethod
    def from_values(cls, values):
        return cls(tuple(sorted((float(v) for v in values), reverse=True)))

    @property
    def order(self):
        return len(self.values)

    def as_array(self):
        return np.array(self.values)


@dataclass(frozen=True)
class ClusteredSpectrum:
    """(value, multiplicity) pairs, values descending."""

    pairs: tuple

    @property
    def order(self):
        return sum(m for _, m in self.pairs)

    def multiplicity(self, value, tol=CLUSTER_TOL):
        for center, mult in self.pairs:
            if abs(center - value) <= tol:
                return mult
        return 0

    def matches(self, other, tol=CLUSTER_TOL):
        if len(self.pairs) != len(other.pairs):
            return False
        return all(
            m1 == m2 and abs(v1 - v2) <= tol
            for (v1, m1), (v2, m2) in zip(self.pairs, other.pairs)
        )


@dataclass(frozen=True)
class RegularBlockSpec:
    """A normal block with constant row sums: row sum r, the other eigenvalues, order."""

    row_sum: float
    residual: tuple
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise SpectralError(f"block size must be at least 1, got {self.size}")
        if len(self.residual) != self.size - 1:
            raise SpectralError(
                f"block of size {self.size} needs {self.size - 1} residual eigenvalues, got {len(self.residual)}"
            )


def _off_diagonal_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a, p, q):
    """Apply the Jacobi rotation that annihilates a[p, q], in place."""
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
        if theta < 0.0:
            t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    app = a[p, p] - t * apq
    aqq = a[q, q] + t * apq

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    a[p, :] = a[:, p]
    a[q, :] = a[:, q]
    a[p, p] = app
    a[q, q] = aqq
    a[p, q] = a[q, p] = 0.0


def eigenvalues_symmetric(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """
    All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps visit (p, q), p < q, row-major. Converged once the off-diagonal
    Frobenius mass is at most tol * ||m||_F.
    """
    a = as_symmetric(m)
    n = a.shape[0]
    if n == 0:
        raise SpectralError("eigensolver needs a matrix of order >= 1")
    threshold = tol * float(np.linalg.norm(a))
    # entries below this never hold the off-diagonal mass above threshold
    skip = threshold / n

    off = _off_diagonal_norm(a)
    sweeps = 0
    while off > threshold:
        if sweeps == max_sweeps:
            raise EigensolverError(f"Jacobi did not converge in {max_sweeps} sweeps (order {n})", off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > skip:
                    _rotate(a, p, q)
        sweeps += 1
        off = _off_diagonal_norm(a)
    logger.debug("Jacobi converged: order %d, %d sweep(s), residual %.2e", n, sweeps, off)
    return Spectrum.from_values(np.diag(a))


def singular_values_symmetric(m):
    return Spectrum.from_values(abs(v) for v in eigenvalues_symmetric(m).values)


def trace_norm(m):
    """Sum of singular values."""
    return math.fsum(singular_values_symmetric(m).values)


def cluster_spectrum(s, tol=CLUSTER_TOL):
    if tol <= 0:
        raise SpectralError(f"clustering tolerance must be positive, got {tol}")
    clusters = []
    for v in s.values:
        if clusters and abs(v - np.mean(clusters[-1])) <= tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    return ClusteredSpectrum(tuple((float(np.mean(c)), len(c)) for c in clusters))


def join_spectrum_regular(b1, b2, a=1.0, b=1.0):
    """
    Spectrum of [[M1, a J], [b J, M2]] for normal blocks with constant row sums:
    both residual lists plus the roots of (x - r1)(x - r2) - a b n1 n2 = 0.
    """
    r1, r2 = b1.row_sum, b2.row_sum
    disc = (r1 - r2) ** 2 + 4.0 * a * b * b1.size * b2.size
    if disc < 0:
        raise SpectralError(f"join quadratic has complex roots (discriminant {disc:.6g})")
    root = math.sqrt(disc)
    roots = ((r1 + r2 + root) / 2.0, (r1 + r2 - root) / 2.0)
    return Spectrum.from_values(list(b1.residual) + list(b2.residual) + list(roots))


def regular_block(m):
    """RegularBlockSpec of a symmetric matrix with constant row sums."""
    a = as_symmetric(m)
    sums = a.sum(axis=1)
    if not np.allclose(sums, sums[0], rtol=0.0, atol=1e-12):
        raise SpectralError("matrix row sums are not constant")
    r = float(sums[0])
    values = list(eigenvalues_symmetric(a).values)
    del values[int(np.argmin([abs(v - r) for v in values]))]
    return RegularBlockSpec(r, tuple(values), a.shape[0])


def subadditivity_gap(a, b):
    """sum s(A) + sum s(B) - sum s(A + B); non-negative for any A, B."""
    a = as_symmetric(a)
    b = as_symmetric(b)
    if a.shape != b.shape:
        raise SpectralError(f"order mismatch: {a.shape[0]} vs {b.shape[0]}")
    return trace_norm(a) + trace_norm(b) - trace_norm(a + b)


def is_positive_semidefinite(m, tol=1e-10):
    a = as_symmetric(m)
    scale = max(1.0, float(np.linalg.norm(a)))
    return eigenvalues_symmetric(a).values[-1] >= -tol * scale


def zero_diagonal_leak(m):
    """Largest |entry| in any row whose diagonal entry is zero (0.0 when no such row)."""
    a = as_symmetric(m)
    rows = np.flatnonzero(np.diag(a) == 0.0)
    if rows.size == 0:
        return 0.0
    return float(np.abs(a[rows, :]).max())
