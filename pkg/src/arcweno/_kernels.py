"""Compiled per-row reconstruction kernels.

These repeat the vectorised numpy path of :mod:`arcweno.reconstruction` one
cell at a time, which avoids the large temporaries of the array version.  The
numpy code remains the reference; tests compare the two.
"""

from __future__ import annotations

import math

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

from .polynomials import BRANCH_TOL
from .weights import EPS, EPS_Z

# scheme codes used by the kernel
ENO3, ENO3L, WENO5JS, WENO5Z, WENO5L, WENO5ZL = range(6)

AVAILABLE = numba is not None


def _jit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, error_model="numpy")(fn)


# asinh(x)/x = sum_n (-1)^n C(2n, n) / (4^n (2n + 1)) x^(2n); nine terms reach
# roundoff for |x| < SERIES_CUTOFF and are much cheaper than a libm asinh call
SERIES_CUTOFF = 0.125
_S = tuple((-1) ** n * math.comb(2 * n, n) / (4**n * (2 * n + 1)) for n in range(9))


@_jit
def _weights(b0, b1, b2, g0, g1, g2):
    a0 = g0 / ((EPS + b0) ** 2)
    a1 = g1 / ((EPS + b1) ** 2)
    a2 = g2 / ((EPS + b2) ** 2)
    inv = 1.0 / (a0 + a1 + a2)
    return a0 * inv, a1 * inv, a2 * inv


@_jit
def _arc_parts(sl, sr, rb, ra):
    """Branch-free pieces of the arc length over a cell with end slopes ``sl``,
    ``sr`` and ``rb = sqrt(1 + sl^2)``, ``ra = sqrt(1 + sr^2)``.

    Returns ``(t1, t2)``; the length is ``dx/2 * (t1 + t2 * asinh(x)/x)`` with
    ``x = 2 c dx t2``.
    """
    both = 1.0 + sl * sl + sr * sr
    prod = sl * sr
    # ra*rb + |prod| is cancellation-free; the conjugate follows from it
    big = ra * rb + abs(prod)
    # one division serves both 1 / big and 1 / (ra + rb)
    q = 1.0 / (big * (ra + rb))
    small = both * (ra + rb) * q
    plus = big if prod >= 0.0 else small
    minus = small if prod >= 0.0 else big
    inv = big * q
    return (both + plus) * inv, (1.0 + minus) * inv


@_jit
def _series_length(sl, sr, rb, ra, d, half, tol, local):
    """Series-based length of one candidate over its cell and the series
    argument (inf when the candidate is flat)."""
    t1, t2 = _arc_parts(sl, sr, rb, ra)
    x = d * t2
    z = x * x
    sc = _S[0] + z * (_S[1] + z * (_S[2] + z * (_S[3] + z * (
        _S[4] + z * (_S[5] + z * (_S[6] + z * (_S[7] + z * _S[8])))))))
    flat = abs(d) <= tol * (1.0 + abs(local))
    return half * (t1 + t2 * sc), (math.inf if flat else abs(x))


@_jit
def _stencil_slopes(v, j, h):
    """Centre slope, curvature term ``c h`` and edge slopes of the quadratic
    through ``v[j:j+3]``."""
    c = (v[j] - 2.0 * v[j + 1] + v[j + 2]) * (1.0 / (2.0 * h * h))
    b = (v[j + 2] - v[j]) * (1.0 / (2.0 * h))
    ch = c * h
    return b, ch, b - 3.0 * ch, b - ch, b + ch, b + 3.0 * ch


@_jit
def _length_indicators(v, dx, beta, arg):
    """Arc lengths of all candidates over their cells, squared.

    Candidate ``k`` of cell ``i`` is the quadratic through stencil ``j = i + k``
    and lands in ``beta[k, j]``.  Each stencil's quadratic serves three cells,
    so its four edge slopes are computed once.  ``arg`` is scratch space.
    """
    ns = beta.shape[1]
    half = 0.5 * dx
    tol = BRANCH_TOL
    # branch-free pass that the compiler can vectorise
    for j in range(ns):
        b, ch, e0, e1, e2, e3 = _stencil_slopes(v, j, dx)
        r0 = math.sqrt(1.0 + e0 * e0)
        r1 = math.sqrt(1.0 + e1 * e1)
        r2 = math.sqrt(1.0 + e2 * e2)
        r3 = math.sqrt(1.0 + e3 * e3)
        d = 2.0 * ch
        # candidate k covers the cell at offset 1 - k from the stencil centre
        beta[0, j], arg[0, j] = _series_length(e2, e3, r2, r3, d, half, tol, b + d)
        beta[1, j], arg[1, j] = _series_length(e1, e2, r1, r2, d, half, tol, b)
        beta[2, j], arg[2, j] = _series_length(e0, e1, r0, r1, d, half, tol, b - d)
    # scalar fix-up where the series argument is too large or the candidate is flat
    for k in range(3):
        for j in range(ns):
            ax = arg[k, j]
            if ax >= SERIES_CUTOFF:
                b, ch, e0, e1, e2, e3 = _stencil_slopes(v, j, dx)
                d = 2.0 * ch
                local = b + d * (1 - k)
                if ax == math.inf:
                    beta[k, j] = math.sqrt(1.0 + local * local) * dx
                else:
                    sl = local - ch
                    sr = local + ch
                    t1, t2 = _arc_parts(sl, sr, math.sqrt(1.0 + sl * sl), math.sqrt(1.0 + sr * sr))
                    sc = math.log(ax + math.sqrt(1.0 + ax * ax)) / ax
                    beta[k, j] = half * (t1 + t2 * sc)
        for j in range(ns):
            beta[k, j] = beta[k, j] * beta[k, j]


@_jit
def _row(v, dx, code, want_minus, want_plus, minus, plus):
    n = v.shape[0]
    m = n - 4
    h = dx
    half = 0.5 * dx
    # pass 1: smoothness indicators for all cells; candidate k of cell i
    # sits in beta[k, i + off * k]
    if code == WENO5JS or code == WENO5Z:
        off = 0
        beta = np.empty((3, m))
        ic = 1.0 / (2.0 * h * h)
        ib = 1.0 / (2.0 * h)
        h2 = dx * dx
        for i in range(m):
            vm2 = v[i]
            vm1 = v[i + 1]
            v0 = v[i + 2]
            vp1 = v[i + 3]
            vp2 = v[i + 4]
            c0 = (vm2 - 2.0 * vm1 + v0) * ic
            c1 = (vm1 - 2.0 * v0 + vp1) * ic
            c2 = (v0 - 2.0 * vp1 + vp2) * ic
            b0 = (vm2 - 4.0 * vm1 + 3.0 * v0) * ib
            b1 = (vp1 - vm1) * ib
            b2 = (-3.0 * v0 + 4.0 * vp1 - vp2) * ib
            beta[0, i] = (b0 * dx) ** 2 + (13.0 / 3.0) * (c0 * h2) ** 2
            beta[1, i] = (b1 * dx) ** 2 + (13.0 / 3.0) * (c1 * h2) ** 2
            beta[2, i] = (b2 * dx) ** 2 + (13.0 / 3.0) * (c2 * h2) ** 2
    elif code != ENO3:
        off = 1
        beta = np.empty((3, m + 2))
        _length_indicators(v, dx, beta, np.empty((3, m + 2)))
    else:
        off = 0
        beta = np.empty((3, 0))
    # pass 2: selection or weighting per cell
    for i in range(m):
        vm2 = v[i]
        vm1 = v[i + 1]
        v0 = v[i + 2]
        vp1 = v[i + 3]
        vp2 = v[i + 4]
        r0 = (1 / 3) * vm2 + (-7 / 6) * vm1 + (11 / 6) * v0
        r1 = (-1 / 6) * vm1 + (5 / 6) * v0 + (1 / 3) * vp1
        r2 = (1 / 3) * v0 + (5 / 6) * vp1 + (-1 / 6) * vp2
        l0 = (-1 / 6) * vm2 + (5 / 6) * vm1 + (1 / 3) * v0
        l1 = (1 / 3) * vm1 + (5 / 6) * v0 + (-1 / 6) * vp1
        l2 = (11 / 6) * v0 + (-7 / 6) * vp1 + (1 / 3) * vp2

        if code == ENO3:
            r = 1 if abs(v0 - vm1) < abs(vp1 - v0) else 0
            c_im1 = abs(vm2 - 2.0 * vm1 + v0)
            c_i = abs(vm1 - 2.0 * v0 + vp1)
            c_ip1 = abs(v0 - 2.0 * vp1 + vp2)
            if r == 0:
                r += 1 if c_i < c_ip1 else 0
            else:
                r += 1 if c_im1 < c_i else 0
            j = 2 - r
        else:
            be0 = beta[0, i]
            be1 = beta[1, i + off]
            be2 = beta[2, i + 2 * off]
            if code == ENO3L:
                j = 0
                best = be0
                if be1 < best:
                    j = 1
                    best = be1
                if be2 < best:
                    j = 2
            else:
                j = -1
                if code == WENO5Z or code == WENO5ZL:
                    tau = abs(be0 - be2)
                    # 1 / (1 + tau / (beta + eps)) with one division
                    be0 = (be0 + EPS_Z) / (be0 + EPS_Z + tau)
                    be1 = (be1 + EPS_Z) / (be1 + EPS_Z + tau)
                    be2 = (be2 + EPS_Z) / (be2 + EPS_Z + tau)
                if want_minus:
                    w0, w1, w2 = _weights(be0, be1, be2, 0.1, 0.6, 0.3)
                    minus[i] = w0 * r0 + w1 * r1 + w2 * r2
                if want_plus:
                    w0, w1, w2 = _weights(be0, be1, be2, 0.3, 0.6, 0.1)
                    plus[i] = w0 * l0 + w1 * l1 + w2 * l2
        if j >= 0:
            if want_minus:
                minus[i] = r0 if j == 0 else (r1 if j == 1 else r2)
            if want_plus:
                plus[i] = l0 if j == 0 else (l1 if j == 1 else l2)


@_jit
def reconstruct_rows(v, dx, code):
    """``v`` has shape ``(rows, n)``; returns ``(minus, plus)`` of shape ``(rows, n-4)``."""
    rows, n = v.shape
    minus = np.empty((rows, n - 4))
    plus = np.empty((rows, n - 4))
    for r in range(rows):
        _row(v[r], dx, code, True, True, minus[r], plus[r])
    return minus, plus


@_jit
def split_flux_rows(f, u, alpha, dx, code):
    """Lax-Friedrichs interface fluxes along rows of ``f`` and ``u``.

    Returns shape ``(rows, n-5)``; entry ``k`` sits between cells ``k+2`` and
    ``k+3``.  Only the faces the flux needs are reconstructed.
    """
    rows, n = f.shape
    out = np.empty((rows, n - 5))
    fp = np.empty(n)
    fm = np.empty(n)
    minus = np.empty(n - 4)
    plus = np.empty(n - 4)
    for r in range(rows):
        for k in range(n):
            au = alpha * u[r, k]
            fp[k] = 0.5 * (f[r, k] + au)
            fm[k] = 0.5 * (f[r, k] - au)
        _row(fp, dx, code, True, False, minus, plus)
        _row(fm, dx, code, False, True, minus, plus)
        for k in range(n - 5):
            out[r, k] = minus[k] + plus[k + 1]
    return out


@_jit
def _split_line(f, u, alpha, dx, code, fp, fm, minus, plus, out):
    n = f.shape[0]
    for k in range(n):
        au = alpha * u[k]
        fp[k] = 0.5 * (f[k] + au)
        fm[k] = 0.5 * (f[k] - au)
    _row(fp, dx, code, True, False, minus, plus)
    _row(fm, dx, code, False, True, minus, plus)
    for k in range(n - 5):
        out[k] = minus[k] + plus[k + 1]


@_jit
def euler_flux_hat(view, normal, gamma, alpha, dx, code):
    """Interface fluxes of the Euler equations along axis 1 of ``view``.

    ``view`` has shape ``(ncomp, n_line, n_lines)`` and may be strided; the
    physical flux in direction ``normal`` is formed on the fly.  Returns
    ``(ncomp, n_lines, n_line - 5)``.
    """
    ncomp, n, lines = view.shape
    ndim = ncomp - 2
    out = np.empty((ncomp, lines, n - 5))
    w = np.empty((ncomp, n))
    f = np.empty((ncomp, n))
    fp = np.empty(n)
    fm = np.empty(n)
    minus = np.empty(n - 4)
    plus = np.empty(n - 4)
    for r in range(lines):
        for k in range(n):
            for c in range(ncomp):
                w[c, k] = view[c, k, r]
        for k in range(n):
            rho = w[0, k]
            kinetic = 0.0
            for d in range(ndim):
                kinetic += w[1 + d, k] * w[1 + d, k]
            p = (gamma - 1.0) * (w[ncomp - 1, k] - 0.5 * kinetic / rho)
            mn = w[1 + normal, k]
            un = mn / rho
            f[0, k] = mn
            for d in range(ndim):
                f[1 + d, k] = un * w[1 + d, k]
            f[1 + normal, k] += p
            f[ncomp - 1, k] = un * (w[ncomp - 1, k] + p)
        for c in range(ncomp):
            _split_line(f[c], w[c], alpha, dx, code, fp, fm, minus, plus, out[c, r])
    return out


@_jit
def divergence_2d(fx, fy, dx, dy):
    """``-(dfx/dx + dfy/dy)`` and the net boundary outflow per component.

    ``fx`` is ``(ncomp, ny, nx + 1)`` with lines along the first spatial axis
    of the result, ``fy`` is ``(ncomp, nx, ny + 1)``; the result is
    ``(ncomp, nx, ny)`` in the layout of ``fy``'s lines.
    """
    ncomp, ny, nx1 = fx.shape
    nx = nx1 - 1
    rhs = np.empty((ncomp, nx, ny))
    outflow = np.zeros(ncomp)
    for c in range(ncomp):
        for i in range(nx):
            for k in range(ny):
                rhs[c, i, k] = -(fy[c, i, k + 1] - fy[c, i, k]) / dy
        for k in range(ny):
            for i in range(nx):
                rhs[c, i, k] -= (fx[c, k, i + 1] - fx[c, k, i]) / dx
        out_x = 0.0
        for k in range(ny):
            out_x += fx[c, k, nx] - fx[c, k, 0]
        out_y = 0.0
        for i in range(nx):
            out_y += fy[c, i, ny] - fy[c, i, 0]
        outflow[c] = dy * out_x + dx * out_y
    return rhs, outflow


@_jit
def euler_speeds(u, gamma):
    """Largest ``|u_d| + c`` per direction, minimum density and pressure, and
    whether any value is non-finite.

    ``u`` is ``(ncomp, m)`` with all cells flattened into the second axis.
    """
    ncomp, m = u.shape
    ndim = ncomp - 2
    speeds = np.zeros(ndim)
    rho_min = np.inf
    p_min = np.inf
    finite = True
    for k in range(m):
        for c in range(ncomp):
            if not math.isfinite(u[c, k]):
                finite = False
        rho = u[0, k]
        kinetic = 0.0
        for d in range(ndim):
            kinetic += u[1 + d, k] * u[1 + d, k]
        p = (gamma - 1.0) * (u[ncomp - 1, k] - 0.5 * kinetic / rho)
        rho_min = min(rho_min, rho)
        p_min = min(p_min, p)
        if rho > 0.0 and p > 0.0:
            c = math.sqrt(gamma * p / rho)
            for d in range(ndim):
                speeds[d] = max(speeds[d], abs(u[1 + d, k] / rho) + c)
    return speeds, rho_min, p_min, finite
