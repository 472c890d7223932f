"""Matrix families with sign-split perturbations and their boundary logs.

A Hermitian base matrix H0 and a Hermitian perturbation V = K J K* (J a
difference of projections onto the positive and negative auxiliary blocks)
give rise to three block transfer matrices:

    phi(z)        = J  + K* (H0 - z)^(-1) K          on the full block,
    phi_plus(z)   = I+ + K+* (H0 - z)^(-1) K+        on the + block,
    phi_minus(z)~ = I- - K-* (H+ - z)^(-1) K-        on the - block,

where H+ = H0 + K+ K+*.  The first two have nonnegative imaginary part in
the upper half-plane, the third nonpositive.  Their logarithms at lambda+i0
carry the spectral shift data; off the real spectra the boundary value is an
honest limit and is computed directly, otherwise a vertical epsilon schedule
with Richardson extrapolation is used.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, PreconditionError
from .matkit import (
    HermitianEig,
    SignedFactorization,
    apply_spectral_function,
    as_matrix,
    eig_hermitian,
    frobenius,
    hermitian_part,
    sign_factorization,
)
from .oplog import (
    Branch,
    QuadratureConfig,
    logm_antidissipative,
    logm_dissipative,
    scalar_log,
)

__all__ = [
    "SignBlock",
    "EpsSchedule",
    "ConvergenceRecord",
    "HerglotzFamily",
    "boundary_log",
]

EXCLUSION_RTOL = 1e-9


class SignBlock(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class EpsSchedule:
    """Geometric schedule for the vertical limit lambda + i*eps, eps -> 0.

    The Cauchy criterion is applied to successive Richardson extrapolants of
    the iterates (the raw error is linear in eps, the extrapolated one
    quadratic, so the schedule meets tight tolerances within the step
    budget)."""

    eps0: float = 1e-2
    factor: float = 0.5
    max_steps: int = 20
    conv_tol: float = 1e-9

    def __post_init__(self):
        if self.eps0 <= 0:
            raise PreconditionError("eps0 must be positive")
        if not 0.0 < self.factor < 1.0:
            raise PreconditionError("factor must lie in (0, 1)")


DEFAULT_SCHEDULE = EpsSchedule()


@dataclass(frozen=True)
class ConvergenceRecord:
    """How a boundary value was obtained."""

    route: str
    steps: int
    cauchy: float
    converged: bool


class HerglotzFamily:
    """A bound pair (H0, V) with eagerly cached spectral data.

    Instances are immutable after construction and safe to share between
    threads.  The factorization fixes the auxiliary block sizes n_plus and
    n_minus; either block may be empty, in which case the corresponding
    transfer matrix is 0x0 with trace zero.
    """

    def __init__(self, h0, factorization: SignedFactorization):
        self.h0 = hermitian_part(as_matrix(h0))
        if frobenius(self.h0 - as_matrix(h0)) > 1e-12 * max(frobenius(h0), 1e-300):
            raise PreconditionError("base matrix must be Hermitian")
        self.fact = factorization
        if factorization.dim != self.h0.shape[0]:
            raise PreconditionError(
                f"factorization dimension {factorization.dim} does not match "
                f"base dimension {self.h0.shape[0]}"
            )
        k = factorization.k
        kplus = k[:, : factorization.n_plus]
        self.v = factorization.reconstruct()
        self.v_plus = hermitian_part(kplus @ kplus.conj().T)
        self.h_plus = hermitian_part(self.h0 + self.v_plus)
        self.h = hermitian_part(self.h0 + self.v)
        self.eig0: HermitianEig = eig_hermitian(self.h0)
        self.eig_plus: HermitianEig = eig_hermitian(self.h_plus)
        self.eig_h: HermitianEig = eig_hermitian(self.h)
        # resolvent sandwiches reduce to diagonal sums through these
        self._w0 = self.eig0.vectors.conj().T @ k
        self._wp = self.eig_plus.vectors.conj().T @ k

    @classmethod
    def from_potential(cls, h0, v, rank_tol: float = 1e-12) -> "HerglotzFamily":
        return cls(h0, sign_factorization(v, rank_tol))

    @classmethod
    def from_positive_root(cls, h0, v) -> "HerglotzFamily":
        """Family for a positive semidefinite V factored through its
        Hermitian square root, K = V^(1/2).

        Unlike the rank factorization this keeps the auxiliary block in the
        physical basis (K*K = V there), which is what closed-form statements
        about the shift operator of a nonnegative perturbation refer to.
        Traces are basis-independent, so either construction yields the same
        shift function.
        """
        v = as_matrix(v)
        w = np.linalg.eigvalsh(hermitian_part(v))
        scale = max(float(np.max(np.abs(w))) if w.size else 0.0, np.finfo(float).tiny)
        if w.size and w[0] < -1e-12 * scale:
            raise PreconditionError(
                f"perturbation is not positive semidefinite (min eigenvalue {w[0]:.3e})"
            )
        root = apply_spectral_function(v, lambda x: math.sqrt(max(x, 0.0)))
        fact = SignedFactorization(
            k=root, j_signs=np.ones(v.shape[0]), n_plus=v.shape[0], n_minus=0
        )
        return cls(h0, fact)

    # ------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.h0.shape[0]

    @property
    def rank(self) -> int:
        return self.fact.rank

    @property
    def n_plus(self) -> int:
        return self.fact.n_plus

    @property
    def n_minus(self) -> int:
        return self.fact.n_minus

    def all_spectra(self) -> np.ndarray:
        return np.concatenate(
            [self.eig0.eigenvalues, self.eig_plus.eigenvalues, self.eig_h.eigenvalues]
        )

    def spectral_diameter(self) -> float:
        s = self.all_spectra()
        diam = float(s.max() - s.min())
        return diam if diam > 0 else max(1.0, float(np.max(np.abs(s))))

    def exclusion_width(self) -> float:
        return EXCLUSION_RTOL * self.spectral_diameter()

    def check_off_spectrum(self, lam: float, which: SignBlock | None = None) -> None:
        """Raise if lam sits inside the exclusion zone of the spectra that
        the requested boundary value depends on (all three when ``which`` is
        None)."""
        if which is SignBlock.PLUS:
            eigs = self.eig0.eigenvalues
        elif which is SignBlock.MINUS:
            eigs = np.concatenate([self.eig0.eigenvalues, self.eig_plus.eigenvalues])
        else:
            eigs = self.all_spectra()
        width = self.exclusion_width()
        if eigs.size and float(np.min(np.abs(eigs - lam))) <= width:
            raise PreconditionError(
                f"lambda={lam!r} lies within the exclusion zone "
                f"({width:.3e}) of an eigenvalue"
            )

    # ------------------------------------------------------------------
    @staticmethod
    def _quad(eigs: np.ndarray, w: np.ndarray, z: complex) -> np.ndarray:
        """W* diag(1/(eigs - z)) W, the resolvent sandwich."""
        denom = eigs - z
        if denom.size and np.min(np.abs(denom)) < 1e-300:
            raise PreconditionError(f"z={z!r} is an eigenvalue of the resolvent base")
        return w.conj().T @ (w / denom[:, None])

    def evaluate_phi(self, z) -> np.ndarray:
        """J + K*(H0 - z)^(-1) K on the full auxiliary block."""
        z = complex(z)
        return self.fact.j_matrix() + self._quad(self.eig0.eigenvalues, self._w0, z)

    def evaluate_phi_plus(self, z) -> np.ndarray:
        """Transfer matrix of the pair (H0, H+) on the + block."""
        z = complex(z)
        npl = self.n_plus
        q = self._quad(self.eig0.eigenvalues, self._w0[:, :npl], z)
        return np.eye(npl, dtype=np.complex128) + q

    def evaluate_phi_minus_tilde(self, z) -> np.ndarray:
        """Transfer matrix of the pair (H+, H) on the - block; its negative
        has nonnegative imaginary part in the upper half-plane."""
        z = complex(z)
        npl = self.n_plus
        q = self._quad(self.eig_plus.eigenvalues, self._wp[:, npl:], z)
        return np.eye(self.n_minus, dtype=np.complex128) - q

    # closed-form inverses, used as independent cross-checks ------------
    def evaluate_phi_inverse(self, z) -> np.ndarray:
        """J - J K*(H - z)^(-1) K J."""
        z = complex(z)
        eig = eig_hermitian(self.h)
        w = eig.vectors.conj().T @ self.fact.k
        q = self._quad(eig.eigenvalues, w, z)
        s = self.fact.j_signs
        return self.fact.j_matrix() - s[:, None] * q * s[None, :]

    def evaluate_phi_plus_inverse(self, z) -> np.ndarray:
        """I+ - K+*(H+ - z)^(-1) K+."""
        z = complex(z)
        npl = self.n_plus
        q = self._quad(self.eig_plus.eigenvalues, self._wp[:, :npl], z)
        return np.eye(npl, dtype=np.complex128) - q

    def evaluate_phi_minus_tilde_inverse(self, z) -> np.ndarray:
        """I- + K-*(H - z)^(-1) K-."""
        z = complex(z)
        npl = self.n_plus
        w = self.eig_h.vectors.conj().T @ self.fact.k
        q = self._quad(self.eig_h.eigenvalues, w[:, npl:], z)
        return np.eye(self.n_minus, dtype=np.complex128) + q


def _direct_boundary_log(m0: np.ndarray, which: SignBlock) -> np.ndarray | None:
    """Spectral-calculus log of the Hermitian boundary matrix, or None when
    it is numerically singular."""
    e = eig_hermitian(m0)
    w = e.eigenvalues
    if w.size and np.min(np.abs(w)) <= 1e-12 * max(1.0, float(np.max(np.abs(w)))):
        return None
    if which is SignBlock.PLUS:
        vals = np.array([scalar_log(x, Branch.LOG) for x in w], dtype=np.complex128)
    else:
        vals = np.conj([scalar_log(x, Branch.LOG) for x in w]).astype(np.complex128)
    return (e.vectors * vals) @ e.vectors.conj().T


def boundary_log(
    fam: HerglotzFamily,
    which: SignBlock,
    lam: float,
    sched: EpsSchedule | None = None,
    cfg: QuadratureConfig | None = None,
    route: str = "auto",
) -> tuple[np.ndarray, ConvergenceRecord]:
    """Boundary value of the block logarithm at lambda + i0.

    ``route`` selects "direct" (evaluate at eps = 0, valid off the real
    spectra where the boundary matrix is invertible Hermitian), "eps" (the
    vertical schedule; approach is vertical only), or "auto" which prefers
    the direct path and falls back to the schedule.
    """
    sched = sched or DEFAULT_SCHEDULE
    lam = float(lam)
    if route not in ("auto", "direct", "eps"):
        raise PreconditionError(f"unknown route {route!r}")
    fam.check_off_spectrum(lam, which)
    if which is SignBlock.PLUS:
        evaluate = fam.evaluate_phi_plus
        block = fam.n_plus
        take_log = logm_dissipative
    else:
        evaluate = fam.evaluate_phi_minus_tilde
        block = fam.n_minus
        take_log = logm_antidissipative
    if block == 0:
        return (
            np.zeros((0, 0), dtype=np.complex128),
            ConvergenceRecord("empty", 0, 0.0, True),
        )

    if route in ("auto", "direct"):
        val = _direct_boundary_log(hermitian_part(evaluate(lam)), which)
        if val is not None:
            return val, ConvergenceRecord("direct", 0, 0.0, True)
        if route == "direct":
            raise PreconditionError(
                f"boundary matrix is singular at lambda={lam!r}; "
                "the direct route is unavailable"
            )

    prev = None
    prev_rich = None
    cauchy = np.inf
    eps = sched.eps0
    for step in range(1, sched.max_steps + 1):
        cur = take_log(evaluate(lam + 1j * eps), cfg)
        if prev is not None:
            rich = (cur - sched.factor * prev) / (1.0 - sched.factor)
            if prev_rich is not None:
                cauchy = frobenius(rich - prev_rich)
                if cauchy <= sched.conv_tol:
                    return rich, ConvergenceRecord("eps", step, cauchy, True)
            prev_rich = rich
        prev = cur
        eps *= sched.factor
    raise ConvergenceError(
        f"epsilon schedule did not converge at lambda={lam!r} within "
        f"{sched.max_steps} steps (last Cauchy difference {cauchy:.3e}); "
        "lambda may be too close to an eigenvalue"
    )
