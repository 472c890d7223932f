"""Spectral shift operators and the spectral shift function.

Three independent routes to the shift function of a pair (H0, H0 + V):

* operator route: traces of the boundary-value shift operators obtained
  from the imaginary parts of the block logarithms (the primary output,
  since it alone yields the operators themselves);
* determinant route: the tracked phase of det(I + V (H0 - z)^(-1)) as
  z = lambda + i*eps descends to the real axis;
* counting route: the difference of eigenvalue counting functions, exact
  in finite dimensions and used as ground truth throughout.

Also here: the trace-formula and trace-identity residuals, chain rule and
monotonicity checks, the 2x2 worked example showing that the shift
*operator* is not monotone, and grid utilities that keep evaluation points
out of the exclusion zones around eigenvalues.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .herglotz import (
    EpsSchedule,
    HerglotzFamily,
    SignBlock,
    boundary_log,
)
from .matkit import (
    as_matrix,
    eig_hermitian,
    frobenius,
    hermitian_part,
    imaginary_part,
    trace,
    trace_norm,
)
from .oplog import QuadratureConfig, logm_antidissipative, logm_dissipative
from .parallel import ordered_map
from .quadrature import integrate_piecewise

__all__ = [
    "ShiftProfile",
    "TraceIdentityReport",
    "ChainReport",
    "ExampleReport",
    "xi_operator",
    "xi_operator_full",
    "xi_at",
    "xi_counting_oracle",
    "xi_via_det",
    "counting_steps",
    "step_integral",
    "trace_formula_residual",
    "trace_identity_checks",
    "chain_and_monotonicity",
    "example_3_9",
    "herglotz_reconstruction_residual",
    "snap_grid",
    "auto_grid",
    "safe_grid",
    "compute_profile",
]

SNAP_RTOL = 1e-6


# ----------------------------------------------------------------------
# operator route


def _xi_operator_with_record(fam, which, lam, sched=None, cfg=None, route="auto"):
    l, rec = boundary_log(fam, which, lam, sched, cfg, route)
    sign = 1.0 if which is SignBlock.PLUS else -1.0
    return hermitian_part(sign * imaginary_part(l) / math.pi), rec


def xi_operator(
    fam: HerglotzFamily,
    which: SignBlock,
    lam: float,
    sched: EpsSchedule | None = None,
    cfg: QuadratureConfig | None = None,
    route: str = "auto",
) -> np.ndarray:
    """Shift operator of the pair (H0, H+) (PLUS) or (H+, H) (MINUS) at lam.

    Hermitian with spectrum in [0, 1] up to the boundary-value tolerance.
    """
    op, _ = _xi_operator_with_record(fam, which, lam, sched, cfg, route)
    return op


def xi_operator_full(
    fam: HerglotzFamily,
    lam: float,
    cfg: QuadratureConfig | None = None,
) -> np.ndarray:
    """Shift operator built from the full indefinite-block transfer matrix.

    Exposed for exploration only: when V is indefinite this object carries
    no asserted relation to the shift function (its blocks need not be
    simultaneously tamed), so nothing downstream consumes it.
    """
    fam.check_off_spectrum(lam)
    m0 = hermitian_part(fam.evaluate_phi(float(lam)))
    l = logm_dissipative(m0, cfg)
    return hermitian_part(imaginary_part(l) / math.pi)


def xi_at(
    fam: HerglotzFamily,
    lam: float,
    sched: EpsSchedule | None = None,
    cfg: QuadratureConfig | None = None,
    route: str = "auto",
) -> float:
    """Shift function at lam via the operator route: tr of the + operator
    minus tr of the - operator."""
    plus = xi_operator(fam, SignBlock.PLUS, lam, sched, cfg, route)
    minus = xi_operator(fam, SignBlock.MINUS, lam, sched, cfg, route)
    return float(trace(plus).real - trace(minus).real)


# ----------------------------------------------------------------------
# counting route

def xi_counting_oracle(fam: HerglotzFamily, lam: float) -> int:
    """Exact integer shift: eigenvalues of H0 up to lam minus eigenvalues of
    H up to lam.  The brute-force ground truth for everything else."""
    lam = float(lam)
    scale = fam.spectral_diameter()
    for eigs in (fam.eig0.eigenvalues, fam.eig_h.eigenvalues):
        if eigs.size and float(np.min(np.abs(eigs - lam))) <= 1e-12 * scale:
            raise PreconditionError(f"lambda={lam!r} coincides with an eigenvalue")
    n0 = int(np.count_nonzero(fam.eig0.eigenvalues <= lam))
    n1 = int(np.count_nonzero(fam.eig_h.eigenvalues <= lam))
    return n0 - n1


def counting_steps(eigs0, eigs1) -> tuple[np.ndarray, np.ndarray]:
    """Step representation of the counting difference N_0 - N_1.

    Returns knots (sorted union of both spectra) and the value taken on each
    open interval (knots[i], knots[i+1]); the function vanishes outside the
    hull.
    """
    eigs0 = np.asarray(eigs0, dtype=float)
    eigs1 = np.asarray(eigs1, dtype=float)
    knots = np.concatenate([eigs0, eigs1])
    deltas = np.concatenate([np.ones_like(eigs0), -np.ones_like(eigs1)])
    order = np.argsort(knots, kind="stable")
    return knots[order], np.cumsum(deltas[order])


def step_integral(knots: np.ndarray, values: np.ndarray, antiderivative) -> complex:
    """Exact integral of a step function against f, given F with F' = f."""
    if knots.size < 2:
        return 0.0
    fk = np.asarray([antiderivative(float(t)) for t in knots])
    return complex(np.sum(values[:-1] * (fk[1:] - fk[:-1])))


# ----------------------------------------------------------------------
# determinant route

def xi_via_det(
    fam: HerglotzFamily,
    lam: float,
    eps: float | None = None,
    sched: EpsSchedule | None = None,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Shift function via the phase of the perturbation determinant.

    The winding is seeded at the starting height by the traces of the two
    block logarithms (whose sum is the canonical logarithm of the
    determinant), then continued down to the real axis with step halving
    whenever the determinant phase moves by more than pi/2 between samples.
    """
    lam = float(lam)
    fam.check_off_spectrum(lam)
    if fam.rank == 0:
        return 0.0
    sched = sched or EpsSchedule()
    eps0 = float(eps) if eps is not None else sched.eps0
    z0 = lam + 1j * eps0
    seed = (
        trace(logm_dissipative(fam.evaluate_phi_plus(z0), cfg)).imag
        + trace(logm_antidissipative(fam.evaluate_phi_minus_tilde(z0), cfg)).imag
    )

    eigs0 = fam.eig0.eigenvalues
    eigs1 = fam.eig_h.eigenvalues

    def det_at(e: float) -> complex:
        z = lam + 1j * e
        val = complex(np.prod((eigs1 - z) / (eigs0 - z)))
        if val == 0:
            raise PreconditionError(
                f"perturbation determinant vanished on the path at eps={e!r}"
            )
        return val

    floor = 1e-10 * max(1.0, abs(lam), fam.spectral_diameter())
    targets: list[float] = []
    e = eps0
    while e > floor and len(targets) < 200:
        e *= sched.factor
        targets.append(e)
    targets.append(0.0)

    theta = seed
    e_prev = eps0
    d_prev = det_at(eps0)
    pending = deque(targets)
    refinements = 0
    while pending:
        e_next = pending[0]
        d_next = det_at(e_next)
        dphi = cmath.phase(d_next / d_prev)
        if abs(dphi) > 0.5 * math.pi and (e_prev - e_next) > 1e-300 and refinements < 2000:
            pending.appendleft(0.5 * (e_prev + e_next))
            refinements += 1
            continue
        theta += dphi
        e_prev, d_prev = e_next, d_next
        pending.popleft()
    return theta / math.pi


# ----------------------------------------------------------------------
# trace formula and trace identities

def trace_formula_residual(fam: HerglotzFamily, z: complex) -> float:
    """Residual of the resolvent trace formula at z.

    The left side is the exact trace of the resolvent difference; the right
    side integrates the counting-route step function against (lam - z)^(-2)
    with the exact antiderivative per step.  Both sides are independent of
    the operator route.
    """
    z = complex(z)
    scale = fam.spectral_diameter()
    for eigs in (fam.eig0.eigenvalues, fam.eig_h.eigenvalues):
        dist = float(np.min(np.abs(eigs - z))) if eigs.size else np.inf
        if dist == 0.0 or scale / dist > 1e12:
            raise PreconditionError(
                f"z={z!r} is too close to the spectra (resolvent condition > 1e12)"
            )
    lhs = complex(np.sum(1.0 / (fam.eig_h.eigenvalues - z)) - np.sum(1.0 / (fam.eig0.eigenvalues - z)))
    knots, values = counting_steps(fam.eig0.eigenvalues, fam.eig_h.eigenvalues)
    integral = step_integral(knots, values, lambda t: -1.0 / (t - z))
    return abs(lhs + integral)


@dataclass(frozen=True)
class TraceIdentityReport:
    trace_v_residual: float
    l1_bound_holds: bool
    l1_slack: float
    fd_plus_residual: float
    fd_minus_residual: float


def trace_identity_checks(
    fam: HerglotzFamily,
    zs=(1.0 + 2.0j,),
    cfg: QuadratureConfig | None = None,
) -> TraceIdentityReport:
    """tr V against the exact step integral of the shift function, the L1
    bound against the trace norm of V, and finite-difference residuals of
    the derivative identities for the traced block logarithms."""
    cfg = cfg or QuadratureConfig(rel_tol=1e-13)
    knots, values = counting_steps(fam.eig0.eigenvalues, fam.eig_h.eigenvalues)
    integral = step_integral(knots, values, lambda t: t).real
    tr_v = trace(fam.v).real
    l1 = float(np.sum(np.abs(values[:-1]) * np.diff(knots))) if knots.size > 1 else 0.0
    v1norm = trace_norm(fam.v)

    fd_plus = 0.0
    fd_minus = 0.0
    for z in zs:
        z = complex(z)
        h = 1e-5 * (1.0 + abs(z))

        def tr_log_plus(w):
            return trace(logm_dissipative(fam.evaluate_phi_plus(w), cfg))

        def tr_log_minus(w):
            return trace(logm_antidissipative(fam.evaluate_phi_minus_tilde(w), cfg))

        d_plus = (tr_log_plus(z + h) - tr_log_plus(z - h)) / (2.0 * h)
        d_minus = (tr_log_minus(z + h) - tr_log_minus(z - h)) / (2.0 * h)
        lhs_plus = complex(
            np.sum(1.0 / (fam.eig0.eigenvalues - z)) - np.sum(1.0 / (fam.eig_plus.eigenvalues - z))
        )
        lhs_minus = complex(
            np.sum(1.0 / (fam.eig_plus.eigenvalues - z)) - np.sum(1.0 / (fam.eig_h.eigenvalues - z))
        )
        fd_plus = max(fd_plus, abs(d_plus - lhs_plus))
        fd_minus = max(fd_minus, abs(d_minus - lhs_minus))

    return TraceIdentityReport(
        trace_v_residual=abs(integral - tr_v),
        l1_bound_holds=l1 <= v1norm + 1e-8,
        l1_slack=v1norm + 1e-8 - l1,
        fd_plus_residual=fd_plus,
        fd_minus_residual=fd_minus,
    )


# ----------------------------------------------------------------------
# chain rule, antisymmetry, monotonicity

@dataclass(frozen=True)
class ChainReport:
    chain_residual: float
    antisymmetry_residual: float
    oracle_residual: float
    monotonicity_violation_totals: float | None
    monotonicity_violation_added: float | None
    points_used: int


def chain_and_monotonicity(
    h0,
    v1,
    v2,
    grid,
    sched: EpsSchedule | None = None,
    cfg: QuadratureConfig | None = None,
    rank_tol: float = 1e-12,
) -> ChainReport:
    """Chain rule, antisymmetry and monotonicity of the shift function.

    All shift values are computed through the operator route and guarded by
    the counting oracle.  The monotonicity comparisons are reported only
    when the relevant semidefiniteness actually holds: totals compares the
    pairs (H0, H0+V2) vs (H0, H0+V1) when V2 - V1 >= 0; added compares
    (H0, H0+V1+V2) vs (H0, H0+V1) when V2 >= 0.
    """
    h0 = as_matrix(h0)
    v1 = as_matrix(v1)
    v2 = as_matrix(v2)
    fam_sum = HerglotzFamily.from_potential(h0, v1 + v2, rank_tol)
    fam_1 = HerglotzFamily.from_potential(h0, v1, rank_tol)
    fam_2 = HerglotzFamily.from_potential(h0, v2, rank_tol)
    fam_12 = HerglotzFamily.from_potential(h0 + v1, v2, rank_tol)
    fam_back = HerglotzFamily.from_potential(h0 + v1, -v1, rank_tol)
    fams = (fam_sum, fam_1, fam_2, fam_12, fam_back)

    pts = []
    for lam in np.asarray(grid, dtype=float):
        try:
            for f in fams:
                f.check_off_spectrum(float(lam))
                xi_counting_oracle(f, float(lam))
            pts.append(float(lam))
        except PreconditionError:
            continue
    if not pts:
        raise PreconditionError("no grid points clear the exclusion zones of all pairs")

    chain = 0.0
    antisym = 0.0
    oracle = 0.0
    mono_tot = -np.inf
    mono_add = -np.inf
    tol_psd = 1e-12
    v2_minus_v1_psd = float(np.min(np.linalg.eigvalsh(hermitian_part(v2 - v1)))) >= -tol_psd * max(
        frobenius(v2 - v1), 1.0
    )
    v2_psd = float(np.min(np.linalg.eigvalsh(hermitian_part(v2)))) >= -tol_psd * max(
        frobenius(v2), 1.0
    )
    for lam in pts:
        vals = {}
        for name, f in zip(("sum", "v1", "v2", "step", "back"), fams):
            x = xi_at(f, lam, sched, cfg)
            vals[name] = x
            oracle = max(oracle, abs(x - xi_counting_oracle(f, lam)))
        chain = max(chain, abs(vals["sum"] - vals["v1"] - vals["step"]))
        antisym = max(antisym, abs(vals["v1"] + vals["back"]))
        if v2_minus_v1_psd:
            mono_tot = max(mono_tot, vals["v1"] - vals["v2"])
        if v2_psd:
            mono_add = max(mono_add, vals["v1"] - vals["sum"])

    return ChainReport(
        chain_residual=chain,
        antisymmetry_residual=antisym,
        oracle_residual=oracle,
        monotonicity_violation_totals=(mono_tot if v2_minus_v1_psd else None),
        monotonicity_violation_added=(mono_add if v2_psd else None),
        points_used=len(pts),
    )


# ----------------------------------------------------------------------
# the 2x2 worked example

@dataclass(frozen=True)
class ExampleReport:
    """Shift operators of two ordered rank-structured perturbations of 0.

    Although the second perturbation dominates the first, the two shift
    operators are rank-one projections onto non-parallel directions, so
    neither dominates the other; ``difference_eigenvalues`` certifies the
    indefiniteness.  Both traces equal 1 exactly (a projection onto a line
    has unit trace regardless of where its eigenvalue sits).
    """

    xi_op_1: np.ndarray
    xi_op_2: np.ndarray
    projection_residual_1: float
    projection_residual_2: float
    step_route_residual: float
    difference_eigenvalues: np.ndarray
    trace_1: float
    trace_2: float


def _projection_above(m: np.ndarray, lam: float) -> np.ndarray:
    e = eig_hermitian(m)
    sel = (e.eigenvalues > lam).astype(float)
    return hermitian_part((e.vectors * sel) @ e.vectors.conj().T)


def example_3_9(
    a: float,
    b: float,
    c: float,
    lam: float,
    sched: EpsSchedule | None = None,
    cfg: QuadratureConfig | None = None,
) -> ExampleReport:
    """2x2 counterexample to operator monotonicity of the spectral shift.

    Requires 0 < a < b < c < 1 with a*c - b*b >= 0 and lam strictly between
    1+a and 1+b; then the first perturbation has eigenvalues {1-b, 1+b}, the
    second {1+a, 1+c}, the second dominates the first, and at lam the two
    shift operators are the spectral projections onto the top eigenvectors.
    """
    if not (0.0 < a < b < c < 1.0):
        raise PreconditionError("parameters must satisfy 0 < a < b < c < 1")
    if a * c - b * b < 0.0:
        raise PreconditionError("parameters must satisfy a*c - b^2 >= 0")
    if not (1.0 + a < lam < 1.0 + b):
        raise PreconditionError("lambda must lie in (1+a, 1+b)")
    v1 = np.array([[1.0, b], [b, 1.0]], dtype=np.complex128)
    v2 = np.diag([1.0 + a, 1.0 + c]).astype(np.complex128)
    h0 = np.zeros((2, 2), dtype=np.complex128)
    # square-root factorizations keep the operators in the physical basis,
    # where the closed-form spectral projections live
    xi1 = xi_operator(HerglotzFamily.from_positive_root(h0, v1), SignBlock.PLUS, lam, sched, cfg)
    xi2 = xi_operator(HerglotzFamily.from_positive_root(h0, v2), SignBlock.PLUS, lam, sched, cfg)
    e1 = _projection_above(v1, lam)
    e2 = _projection_above(v2, lam)
    # independent route: imaginary part of log(I - V/lam) has the same
    # projection structure for lam > 0
    step = hermitian_part(
        imaginary_part(logm_dissipative(np.eye(2) - v1 / lam, cfg)) / math.pi
    )
    diff_eigs = np.linalg.eigvalsh(hermitian_part(xi2 - xi1))
    return ExampleReport(
        xi_op_1=xi1,
        xi_op_2=xi2,
        projection_residual_1=frobenius(xi1 - e1),
        projection_residual_2=frobenius(xi2 - e2),
        step_route_residual=frobenius(step - xi1),
        difference_eigenvalues=diff_eigs,
        trace_1=float(trace(xi1).real),
        trace_2=float(trace(xi2).real),
    )


# ----------------------------------------------------------------------
# reconstruction of the block logarithm from the shift operator

def herglotz_reconstruction_residual(
    fam: HerglotzFamily,
    z: complex,
    cfg: QuadratureConfig | None = None,
    rel_tol: float = 1e-7,
    max_panels: int = 4096,
) -> float:
    """Frobenius distance between log(phi_plus(z)) and the integral of the
    + shift operator against (lam - z)^(-1) over the support hull."""
    z = complex(z)
    if z.imag == 0:
        raise PreconditionError("z must be off the real axis")
    target = logm_dissipative(fam.evaluate_phi_plus(z), cfg)
    if fam.n_plus == 0:
        return 0.0
    breakpoints = np.unique(
        np.concatenate([fam.eig0.eigenvalues, fam.eig_plus.eigenvalues])
    )
    if breakpoints.size < 2:
        return float(frobenius(target))

    def integrand(lams):
        out = np.empty((lams.size, fam.n_plus, fam.n_plus), dtype=np.complex128)
        for i, lam in enumerate(lams):
            op = xi_operator(fam, SignBlock.PLUS, float(lam))
            out[i] = op / (lam - z)
        return out

    val, _ = integrate_piecewise(integrand, breakpoints, rel_tol, max_panels, abs_tol=1e-9)
    return float(frobenius(val - target))


# ----------------------------------------------------------------------
# grids

def _snap_point(x: float, eigs: np.ndarray, excl: float, snap: float, center: float) -> float:
    d = np.abs(eigs - x)
    i = int(np.argmin(d))
    if d[i] > excl:
        return x
    e = float(eigs[i])
    direction = 1.0 if e <= center else -1.0
    step = snap
    for _ in range(60):
        cand = e + direction * step
        if float(np.min(np.abs(eigs - cand))) > excl:
            return cand
        step *= 2.0
    raise PreconditionError(f"could not snap grid point {x!r} off the exclusion zones")


def snap_grid(fam: HerglotzFamily, pts) -> np.ndarray:
    """Move any grid point inside an exclusion zone to a safe spot nearby,
    nudging toward the midpoint of the joint spectral hull."""
    eigs = np.sort(fam.all_spectra())
    excl = fam.exclusion_width()
    snap = SNAP_RTOL * fam.spectral_diameter()
    center = 0.5 * (eigs[0] + eigs[-1])
    return np.asarray(
        [_snap_point(float(x), eigs, excl, snap, center) for x in np.asarray(pts, dtype=float)]
    )


def auto_grid(fam: HerglotzFamily, margin: float = 0.05, points_per_gap: int = 1) -> np.ndarray:
    """Eigenvalue-derived grid: the joint spectra (snapped off their own
    exclusion zones), interior points per gap, and hull endpoints padded by
    the margin."""
    eigs = np.sort(fam.all_spectra())
    keep = [eigs[0]]
    scale = fam.spectral_diameter()
    for x in eigs[1:]:
        if x - keep[-1] > 1e-12 * scale:
            keep.append(float(x))
    eigs = np.asarray(keep)
    pad = margin * max(fam.spectral_diameter(), 1.0)
    pts = [eigs[0] - pad, eigs[-1] + pad]
    pts.extend(eigs)
    for a, b in zip(eigs[:-1], eigs[1:]):
        for i in range(points_per_gap):
            pts.append(a + (b - a) * (i + 1) / (points_per_gap + 1))
    return np.unique(snap_grid(fam, np.asarray(sorted(pts))))


def safe_grid(fam: HerglotzFamily, n_min: int = 50, margin: float = 0.05) -> np.ndarray:
    """At least n_min points clear of every exclusion zone: gap interiors of
    the joint spectra plus padded hull endpoints."""
    eigs = np.sort(fam.all_spectra())
    scale = fam.spectral_diameter()
    keep = [float(eigs[0])]
    for x in eigs[1:]:
        if x - keep[-1] > 1e-12 * scale:
            keep.append(float(x))
    eigs = np.asarray(keep)
    excl = fam.exclusion_width()
    pad = margin * max(scale, 1.0)
    for k in range(1, 64):
        pts = [eigs[0] - pad, eigs[-1] + pad, eigs[0] - 0.5 * pad, eigs[-1] + 0.5 * pad]
        for a, b in zip(eigs[:-1], eigs[1:]):
            for i in range(k):
                x = a + (b - a) * (i + 1) / (k + 1)
                if min(x - a, b - x) > 10 * excl:
                    pts.append(x)
        if len(pts) >= n_min:
            return np.unique(np.asarray(pts))
    raise PreconditionError(
        f"could not place {n_min} safe grid points; spectra may be too clustered"
    )


# ----------------------------------------------------------------------
# profiles

@dataclass
class ShiftProfile:
    """Shift data on a grid: the shift function, its two halves, the
    eigenvalues of both shift operators per point (descending), the counting
    oracle, optionally the determinant route, and per-point convergence
    records."""

    grid: np.ndarray
    xi: np.ndarray
    xi_plus: np.ndarray
    xi_minus: np.ndarray
    xi_op_plus_eigs: list
    xi_op_minus_eigs: list
    xi_oracle: np.ndarray
    xi_det: np.ndarray
    diagnostics: list = field(default_factory=list)

    @property
    def converged(self) -> np.ndarray:
        return np.asarray([d[0].converged and d[1].converged for d in self.diagnostics])


def compute_profile(
    fam: HerglotzFamily,
    grid,
    sched: EpsSchedule | None = None,
    cfg: QuadratureConfig | None = None,
    include_det: bool = False,
    threads: int | None = None,
) -> ShiftProfile:
    """Evaluate the shift data over a grid (snapped off exclusion zones).

    Points are independent; the evaluation is farmed out to a thread pool
    and reassembled in grid order, so the result does not depend on the
    thread count.
    """
    grid = snap_grid(fam, grid)

    def point(lam: float):
        op_p, rec_p = _xi_operator_with_record(fam, SignBlock.PLUS, lam, sched, cfg)
        op_m, rec_m = _xi_operator_with_record(fam, SignBlock.MINUS, lam, sched, cfg)
        eigs_p = np.sort(np.linalg.eigvalsh(op_p))[::-1] if op_p.size else np.zeros(0)
        eigs_m = np.sort(np.linalg.eigvalsh(op_m))[::-1] if op_m.size else np.zeros(0)
        xp = float(trace(op_p).real)
        xm = float(trace(op_m).real)
        oracle = float(xi_counting_oracle(fam, lam))
        dv = xi_via_det(fam, lam, None, sched, cfg) if include_det else math.nan
        return xp, xm, eigs_p, eigs_m, oracle, dv, (rec_p, rec_m)

    rows = ordered_map(point, [float(x) for x in grid], threads)
    return ShiftProfile(
        grid=grid,
        xi=np.asarray([r[0] - r[1] for r in rows]),
        xi_plus=np.asarray([r[0] for r in rows]),
        xi_minus=np.asarray([r[1] for r in rows]),
        xi_op_plus_eigs=[r[2] for r in rows],
        xi_op_minus_eigs=[r[3] for r in rows],
        xi_oracle=np.asarray([r[4] for r in rows]),
        xi_det=np.asarray([r[5] for r in rows]),
        diagnostics=[r[6] for r in rows],
    )
