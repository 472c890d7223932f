"""Adaptive Gauss-Kronrod quadrature for matrix-valued integrands.

A 15-point Kronrod rule with its embedded 7-point Gauss rule supplies per
panel error estimates (Frobenius norm of the difference of the two rules,
a deliberately conservative choice).  The panel with the largest estimate
is bisected until the summed estimate drops below the relative tolerance.
Panels are stored and accumulated in left-endpoint order, so results are
bit-stable regardless of how callers schedule the work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

__all__ = ["PanelInfo", "integrate_adaptive", "integrate_piecewise"]

_NODES = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)

_KRONROD_W = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)

_GAUSS_W = np.array(
    [
        0.0,
        0.129484966168870,
        0.0,
        0.279705391489277,
        0.0,
        0.381830050505119,
        0.0,
        0.417959183673469,
        0.0,
        0.381830050505119,
        0.0,
        0.279705391489277,
        0.0,
        0.129484966168870,
        0.0,
    ]
)

# Termination floor: relative criteria cannot beat roundoff in the panel
# sums, which scales with the absolute mass of the integrand rather than
# with the (possibly cancelling) result.
_EPS_FLOOR = 256 * np.finfo(float).eps


@dataclass(frozen=True)
class PanelInfo:
    """Diagnostics of one adaptive integration run."""

    panels: int
    error: float


def _panel(f, a: float, b: float):
    half = 0.5 * (b - a)
    xs = 0.5 * (a + b) + half * _NODES
    vals = np.asarray(f(xs), dtype=np.complex128)
    ik = half * np.tensordot(_KRONROD_W, vals, axes=(0, 0))
    ig = half * np.tensordot(_GAUSS_W, vals, axes=(0, 0))
    mags = np.sqrt(np.sum(np.abs(vals.reshape(vals.shape[0], -1)) ** 2, axis=1))
    mass = half * float(np.dot(_KRONROD_W, mags))
    return a, b, ik, float(np.linalg.norm(ik - ig)), mass


def integrate_adaptive(
    f,
    segments,
    rel_tol: float,
    max_panels: int,
    split_fraction: float = 0.5,
    abs_tol: float = 0.0,
):
    """Integrate a batched integrand over a union of intervals.

    ``f`` maps an array of abscissae (m,) to stacked values (m, ...); the
    interval endpoints themselves are never evaluated (the Kronrod nodes are
    interior), so integrable endpoint behavior is tolerated.

    Returns ``(value, PanelInfo)`` or raises ConvergenceError when the panel
    budget is exhausted.
    """
    panels = [_panel(f, a, b) for a, b in segments if b > a]
    if not panels:
        raise ConvergenceError("no integration segments supplied")
    while True:
        total = panels[0][2]
        err = panels[0][3]
        mass = panels[0][4]
        for _, _, val, perr, pmass in panels[1:]:
            total = total + val
            err += perr
            mass += pmass
        tnorm = float(np.linalg.norm(total))
        if err <= max(rel_tol * tnorm, abs_tol, _EPS_FLOOR * mass, np.finfo(float).tiny):
            return total, PanelInfo(len(panels), err)
        if len(panels) >= max_panels:
            raise ConvergenceError(
                f"quadrature left a residual estimate {err:.3e} after "
                f"{len(panels)} panels (rel_tol {rel_tol:g})"
            )
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        a, b, _, _, _ = panels[worst]
        mid = a + (b - a) * split_fraction
        panels[worst : worst + 1] = [_panel(f, a, mid), _panel(f, mid, b)]


def integrate_piecewise(f, breakpoints, rel_tol: float, max_panels: int, abs_tol: float = 0.0):
    """Integrate over [min(breakpoints), max(breakpoints)] splitting at each
    interior breakpoint.  Each piece gets its own panel budget; zero-length
    pieces are skipped."""
    pts = np.sort(np.asarray(breakpoints, dtype=float))
    total = None
    worst = 0.0
    npanels = 0
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        val, info = integrate_adaptive(
            f, [(float(a), float(b))], rel_tol, max_panels, abs_tol=abs_tol
        )
        total = val if total is None else total + val
        worst += info.error
        npanels += info.panels
    if total is None:
        raise ConvergenceError("breakpoints span an empty interval")
    return total, PanelInfo(npanels, worst)
