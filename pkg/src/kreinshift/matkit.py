"""Dense complex linear algebra kit.

Matrices are plain numpy arrays of complex128; every public function accepts
anything array-like and validates shape and finiteness at the boundary.
Everything here is a pure function of its inputs and safe to call from
several threads at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError

__all__ = [
    "HermitianEig",
    "SignedFactorization",
    "as_matrix",
    "trace",
    "frobenius",
    "operator_norm",
    "trace_norm",
    "is_hermitian",
    "hermitian_part",
    "imaginary_part",
    "inverse",
    "eig_hermitian",
    "apply_spectral_function",
    "solve_shifted",
    "det",
    "expm",
    "positive_negative_parts",
    "sign_factorization",
]

HERMITIAN_RTOL = 1e-12
SOLVE_COND_LIMIT = 1e14


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square complex128 matrix with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise PreconditionError("matrix entries must be finite")
    return m


def trace(a) -> complex:
    m = np.asarray(a)
    return complex(np.trace(m)) if m.size else 0.0 + 0.0j


def frobenius(a) -> float:
    m = np.asarray(a)
    return float(np.linalg.norm(m)) if m.size else 0.0


def operator_norm(a) -> float:
    """Spectral norm (largest singular value)."""
    m = np.asarray(a)
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def trace_norm(a) -> float:
    """Sum of singular values, computed from the eigenvalues of A*A."""
    m = as_matrix(a)
    if m.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(m.conj().T @ m)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))))


def hermitian_part(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    return 0.5 * (m + m.conj().T)


def imaginary_part(a) -> np.ndarray:
    """The Hermitian matrix (A - A*)/(2i)."""
    m = np.asarray(a, dtype=np.complex128)
    return (m - m.conj().T) / 2j


def is_hermitian(a, rtol: float = HERMITIAN_RTOL) -> bool:
    m = as_matrix(a)
    return frobenius(m - m.conj().T) <= rtol * max(frobenius(m), np.finfo(float).tiny)


def inverse(a) -> np.ndarray:
    return np.linalg.inv(as_matrix(a))


@dataclass(frozen=True)
class HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` is real and ascending; the columns of ``vectors`` are the
    matching orthonormal eigenvectors.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def eig_hermitian(a) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix (ascending eigenvalues).

    The input must be Hermitian within ``1e-12 * ||A||_F``; it is symmetrized
    before factorization so that roundoff-level asymmetry is harmless.
    """
    m = as_matrix(a)
    dev = frobenius(m - m.conj().T)
    if dev > HERMITIAN_RTOL * max(frobenius(m), np.finfo(float).tiny):
        raise PreconditionError(
            f"matrix is not Hermitian: asymmetry {dev:.3e} exceeds "
            f"{HERMITIAN_RTOL:g} * ||A||_F = {HERMITIAN_RTOL * frobenius(m):.3e}"
        )
    w, u = np.linalg.eigh(hermitian_part(m))
    return HermitianEig(w, u)


def apply_spectral_function(a, f) -> np.ndarray:
    """Return U diag(f(w_i)) U* for the Hermitian eigendecomposition of ``a``.

    ``f`` is a scalar function evaluated at each eigenvalue; it must be finite
    there.  The output is re-symmetrized when ``f`` is real valued.
    """
    e = eig_hermitian(a)
    try:
        vals = np.asarray(
            [complex(f(float(x))) for x in e.eigenvalues], dtype=np.complex128
        )
    except (ArithmeticError, ValueError) as exc:
        raise PreconditionError(f"function is undefined at an eigenvalue: {exc}") from exc
    if vals.size and not np.all(np.isfinite(vals)):
        bad = e.eigenvalues[~np.isfinite(vals)]
        raise PreconditionError(f"function is not finite at eigenvalue(s) {bad}")
    out = (e.vectors * vals) @ e.vectors.conj().T
    if vals.size == 0 or np.all(vals.imag == 0.0):
        out = hermitian_part(out)
    return out


def solve_shifted(a, z, b) -> np.ndarray:
    """Solve (A - z I) X = B.

    Refuses shifts whose condition estimate exceeds 1e14, which signals that
    ``z`` sits (numerically) inside the spectrum of ``A``.
    """
    m = as_matrix(a)
    rhs = np.asarray(b, dtype=np.complex128)
    if rhs.ndim == 1:
        rhs = rhs[:, None]
    if rhs.ndim != 2 or rhs.shape[0] != m.shape[0]:
        raise PreconditionError(
            f"right-hand side shape {rhs.shape} does not match dimension {m.shape[0]}"
        )
    shifted = m - complex(z) * np.eye(m.shape[0])
    cond = np.linalg.cond(shifted)
    if not np.isfinite(cond) or cond > SOLVE_COND_LIMIT:
        raise PreconditionError(
            f"shifted matrix is singular or near-singular: condition estimate "
            f"{cond:.3e} exceeds {SOLVE_COND_LIMIT:.0e} (shift may lie in the spectrum)"
        )
    return np.linalg.solve(shifted, rhs)


def det(a) -> complex:
    """Determinant via pivoted LU factorization."""
    m = as_matrix(a)
    return complex(np.linalg.det(m)) if m.size else 1.0 + 0.0j


_EXPM_TERMS = 18
_EXPM_TARGET = 0.5


def expm(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring.

    The argument is scaled by 2**-s until its Frobenius norm is at most 0.5,
    the series is summed through order 18 (remainder below 1e-20 at that
    norm), and the result is squared back up.
    """
    m = as_matrix(a)
    n = m.shape[0]
    nrm = frobenius(m)
    s = 0 if nrm <= _EXPM_TARGET else int(np.ceil(np.log2(nrm / _EXPM_TARGET)))
    b = m / (2.0**s)
    acc = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, _EXPM_TERMS + 1):
        term = term @ b / k
        acc = acc + term
    for _ in range(s):
        acc = acc @ acc
    return acc


def positive_negative_parts(v) -> tuple[np.ndarray, np.ndarray]:
    """Split a Hermitian matrix into its positive and negative parts.

    Returns (V+, V-) with V+ - V- = V, both positive semidefinite, and
    V+ V- = 0 up to roundoff.
    """
    e = eig_hermitian(v)
    plus = (e.vectors * np.clip(e.eigenvalues, 0.0, None)) @ e.vectors.conj().T
    minus = (e.vectors * np.clip(-e.eigenvalues, 0.0, None)) @ e.vectors.conj().T
    return hermitian_part(plus), hermitian_part(minus)


@dataclass(frozen=True)
class SignedFactorization:
    """Factorization V = K diag(j_signs) K* with the +1 block leading.

    ``k`` has one column per retained eigenpair (dim x r); ``j_signs`` holds
    the matching signs, all +1 entries first.
    """

    k: np.ndarray
    j_signs: np.ndarray
    n_plus: int
    n_minus: int

    @property
    def rank(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def dim(self) -> int:
        return self.k.shape[0]

    def j_matrix(self) -> np.ndarray:
        return np.diag(self.j_signs.astype(np.complex128))

    def reconstruct(self) -> np.ndarray:
        """K diag(j_signs) K*."""
        if self.rank == 0:
            return np.zeros((self.dim, self.dim), dtype=np.complex128)
        return hermitian_part((self.k * self.j_signs) @ self.k.conj().T)


def sign_factorization(v, rank_tol: float = 1e-12) -> SignedFactorization:
    """Factor a Hermitian V as K diag(+-1) K*.

    Eigenpairs with |w| > rank_tol * ||V|| (spectral norm) are retained;
    column i of K is sqrt(|w_i|) times the eigenvector, positives ordered
    by descending eigenvalue followed by negatives ascending.
    """
    if rank_tol <= 0:
        raise PreconditionError("rank_tol must be positive")
    e = eig_hermitian(v)
    w = e.eigenvalues
    thresh = rank_tol * (float(np.max(np.abs(w))) if w.size else 0.0)
    pos = [i for i in np.argsort(-w) if w[i] > thresh]
    neg = [i for i in np.argsort(w) if w[i] < -thresh]
    cols = [e.vectors[:, i] * np.sqrt(abs(w[i])) for i in pos + neg]
    n = e.dim
    k = np.column_stack(cols) if cols else np.zeros((n, 0), dtype=np.complex128)
    signs = np.array([1.0] * len(pos) + [-1.0] * len(neg))
    return SignedFactorization(k=k, j_signs=signs, n_plus=len(pos), n_minus=len(neg))
