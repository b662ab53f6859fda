"""Exact level-k kernels for the two model geometries, in log arithmetic.

Affine (Bargmann) model: bundle points are chart pairs (z, theta) for
the global trivializing chart, and the full kernel is
(k/pi)^n * exp(k*(i*(theta - theta') + psi2(z, z'))).  Projective model:
bundle points are unit vectors in C^{d+1}; the monomials
sqrt((k+d)!/(pi^d J!)) z^J are an orthonormal basis of the level-k
space and the full kernel is ((k+d)!/(pi^d k!)) <x, y>^k.

The equivariant kernel for a torus character is the character-weighted
group average of the full kernel.  It is computed two independent ways:

  * weight-sum: a sum over lattice points J with -W.J = irrep, exact
    (finite in the projective model, a truncated series in the affine
    model where the truncation tail is provably below e^-40 of the
    largest term);
  * quadrature: tensor-product trapezoid rule over the torus, with node
    doubling until successive values agree to 1e-12 relative (the
    trapezoid rule is exact for the projective integrand, a trig
    polynomial, and spectrally accurate for the affine one).

Values are LogComplex throughout; k up to ~10^4 stays exact.
"""

from __future__ import annotations

import math
from math import lgamma
from typing import Iterator, Sequence

import numpy as np

from .geometry import as_cvec, norm_sq, psi2
from .logcomplex import NEG_INF, LogComplex, LogSum, log_diff_mod
from .torus import IrrepLabel, WeightMatrix

_LOG_PI = math.log(math.pi)
_MAX_ENUM_DIM = 4  # enumeration is O(k^d); beyond this use the quadrature path
_NODE_CAP_TOTAL = 2**20
_UNIT_TOL = 1e-9


class QuadratureError(RuntimeError):
    """Node doubling hit the cap; carries the last two iterates."""

    def __init__(self, message: str, last_two):
        super().__init__(message)
        self.last_two = last_two


# -- points -------------------------------------------------------------------


def affine_point(p):
    """Coerce to a chart pair (vector, angle); bare vectors get angle 0."""
    if isinstance(p, tuple) and len(p) == 2 and np.ndim(p[0]) == 1:
        return as_cvec(p[0]), float(p[1])
    return as_cvec(p), 0.0


def _unit_point(z) -> np.ndarray:
    z = as_cvec(z)
    if abs(math.sqrt(norm_sq(z)) - 1.0) > _UNIT_TOL:
        raise ValueError("projective bundle points must be unit vectors")
    return z


# -- full kernels -------------------------------------------------------------


def bargmann_kernel(k: int, n: int, p, q) -> LogComplex:
    """(k/pi)^n * exp(k*(i*(theta_p - theta_q) + psi2(z_p, z_q)))."""
    zp, tp = affine_point(p)
    zq, tq = affine_point(q)
    if len(zp) != n or len(zq) != n:
        raise ValueError("point dimension does not match n")
    expo = k * (1j * (tp - tq) + psi2(zp, zq))
    return LogComplex(n * (math.log(k) - _LOG_PI) + expo.real, expo.imag)


def monomial_section(k: int, d: int, J: Sequence[int], z) -> LogComplex:
    """Value of the normalized monomial sqrt((k+d)!/(pi^d J!)) z^J."""
    z = as_cvec(z)
    J = tuple(int(j) for j in J)
    if len(J) != d + 1 or len(z) != d + 1:
        raise ValueError("index and point must have d+1 coordinates")
    if any(j < 0 for j in J) or sum(J) != k:
        raise ValueError("index must be nonnegative with total degree k")
    log_norm = 0.5 * (lgamma(k + d + 1) - d * _LOG_PI - sum(lgamma(j + 1) for j in J))
    log_mod = log_norm
    phase = 0.0
    for j, zl in zip(J, z):
        if j == 0:
            continue
        if zl == 0:
            return LogComplex.zero()
        log_mod += j * math.log(abs(zl))
        phase += j * math.atan2(zl.imag, zl.real)
    return LogComplex(log_mod, phase)


def projective_kernel(k: int, d: int, x, y) -> LogComplex:
    """((k+d)!/(pi^d k!)) <x, y>^k for unit vectors x, y in C^{d+1}."""
    x = _unit_point(x)
    y = _unit_point(y)
    inner = complex(np.vdot(y, x))
    pref = lgamma(k + d + 1) - lgamma(k + 1) - d * _LOG_PI
    return LogComplex(pref, 0.0) * LogComplex.from_complex(inner).pow_int(k)


# -- index enumeration --------------------------------------------------------


def _suffix_ranges(cols):
    """Per-component min/max of the remaining columns, for pruning."""
    g = len(cols[0])
    mins = [[0] * g for _ in range(len(cols) + 1)]
    maxs = [[0] * g for _ in range(len(cols) + 1)]
    mins[-1] = [0] * g
    maxs[-1] = [0] * g
    for i in range(len(cols) - 1, -1, -1):
        for c in range(g):
            mins[i][c] = min(cols[i][c], mins[i + 1][c]) if i < len(cols) - 1 else cols[i][c]
            maxs[i][c] = max(cols[i][c], maxs[i + 1][c]) if i < len(cols) - 1 else cols[i][c]
    return mins, maxs


def _two_var_solutions(r: int, ca, cb, target) -> Iterator[tuple]:
    """Solutions of j_a + j_b = r, j_a*ca + j_b*cb = target, j >= 0."""
    if ca == cb:
        if all(t == r * c for t, c in zip(target, ca)):
            for ja in range(r + 1):
                yield (ja, r - ja)
        return
    pivot = next(i for i in range(len(ca)) if ca[i] != cb[i])
    num = target[pivot] - r * cb[pivot]
    den = ca[pivot] - cb[pivot]
    if num % den != 0:
        return
    ja = num // den
    if not 0 <= ja <= r:
        return
    jb = r - ja
    if all(ja * a + jb * b == t for a, b, t in zip(ca, cb, target)):
        yield (ja, jb)


def _constrained_indices(m: int, cols, target) -> Iterator[tuple]:
    """Multi-indices J >= 0 with |J| = m and sum_l cols[l]*j_l = target.

    Lexicographically ascending; prunes on the achievable range of each
    torus component over the remaining coordinates.
    """
    n = len(cols)
    g = len(cols[0])
    if n == 1:
        if all(m * cols[0][c] == target[c] for c in range(g)):
            yield (m,)
        return
    if n == 2:
        yield from _two_var_solutions(m, cols[0], cols[1], target)
        return
    mins, maxs = _suffix_ranges(cols)

    def rec(pos: int, remaining: int, residual):
        if pos == n - 2:
            for ja, jb in _two_var_solutions(remaining, cols[pos], cols[pos + 1], residual):
                yield (ja, jb)
            return
        for j0 in range(remaining + 1):
            rest = remaining - j0
            new_res = tuple(residual[c] - j0 * cols[pos][c] for c in range(g))
            ok = all(
                rest * mins[pos + 1][c] <= new_res[c] <= rest * maxs[pos + 1][c]
                for c in range(g)
            )
            if not ok:
                continue
            for tail in rec(pos + 1, rest, new_res):
                yield (j0,) + tail

    yield from rec(0, m, tuple(target))


def _plain_indices(m: int, n: int) -> Iterator[tuple]:
    if n == 1:
        yield (m,)
        return
    for j0 in range(m + 1):
        for tail in _plain_indices(m - j0, n - 1):
            yield (j0,) + tail


def enumerate_indices(d: int, k: int, constraint=None) -> list:
    """Multi-indices of total degree k in d+1 variables, lexicographic.

    With constraint = (W, irrep), keeps only J with -W.J = irrep.
    Enumeration cost grows like k^d, so d > 4 is rejected; use the
    quadrature kernel there instead.
    """
    if d > _MAX_ENUM_DIM:
        raise ValueError(
            f"enumeration in d = {d} is too large; use the quadrature kernel"
        )
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if constraint is None:
        return list(_plain_indices(k, d + 1))
    W, irrep = constraint
    cols = [tuple(-int(x) for x in W.column(l)) for l in range(W.n_coords)]
    if len(cols) != d + 1:
        raise ValueError("weight matrix does not match d+1 coordinates")
    target = tuple(irrep.weights)
    return list(_constrained_indices(k, cols, target))


# -- equivariant kernels ------------------------------------------------------


def _occurring_irreps(W: WeightMatrix, k: int) -> list:
    """All irrep labels -W.J over |J| = k, sorted."""
    seen = set()
    for J in _plain_indices(k, W.n_coords):
        seen.add(tuple(int(-x) for x in (W.matrix @ np.asarray(J))))
    return [IrrepLabel(w) for w in sorted(seen)]


def equivariant_kernel_weightsum(
    W: WeightMatrix,
    irrep: IrrepLabel,
    k: int,
    x,
    y,
    model: str,
    tail_nats: float = 40.0,
) -> LogComplex:
    """Isotypic kernel by direct summation over the weight lattice.

    Projective: sum of s_J(x) conj(s_J(y)) over the finite set
    {|J| = k, -W.J = irrep}; an empty set gives an exact zero (the
    selection rule).  Affine: the series
    (k/pi)^n e^{i k (theta_x - theta_y)} e^{-k(|a|^2+|b|^2)/2}
        sum_{-W.J = irrep} k^{|J|} a^J conj(b)^J / J!,
    which is the character-weighted group average of the full kernel
    evaluated term by term.  The series is truncated once the
    unconstrained degree envelope S^m/m! guarantees the remaining tail
    is below e^{-tail_nats} of the largest term seen (S = k sum|a_l b_l|).
    """
    if irrep.g != W.g:
        raise ValueError("irrep label rank does not match weight matrix")
    if model == "projective":
        d = W.n_coords - 1
        x = _unit_point(x)
        y = _unit_point(y)
        acc = LogSum()
        for J in enumerate_indices(d, k, constraint=(W, irrep)):
            sx = monomial_section(k, d, J, x)
            sy = monomial_section(k, d, J, y)
            acc.add(sx * sy.conjugate())
        return acc.total()
    if model != "affine":
        raise ValueError(f"unknown model {model!r}")

    a, ta = affine_point(x)
    b, tb = affine_point(y)
    n = W.n_coords
    if len(a) != n or len(b) != n:
        raise ValueError("point dimension does not match the weight matrix")
    cols = [tuple(-int(v) for v in W.column(l)) for l in range(n)]
    target = tuple(irrep.weights)
    if n - 1 > _MAX_ENUM_DIM:
        raise ValueError(
            f"enumeration in n = {n} is too large; use the quadrature kernel"
        )

    c = k * a * np.conj(b)
    abs_c = np.abs(c)
    log_abs_c = np.full(n, NEG_INF)
    log_abs_c[abs_c > 0.0] = np.log(abs_c[abs_c > 0.0])
    arg_c = np.angle(c)
    S = float(abs_c.sum())
    log_S = math.log(S) if S > 0.0 else NEG_INF

    acc = LogSum()
    m = 0
    m_cap = int(3.0 * S) + 600
    while True:
        for J in _constrained_indices(m, cols, target):
            log_mod = 0.0
            phase = 0.0
            dead = False
            for j, lc, ac in zip(J, log_abs_c, arg_c):
                if j == 0:
                    continue
                if lc == NEG_INF:
                    dead = True
                    break
                log_mod += j * lc - lgamma(j + 1)
                phase += j * ac
            if not dead:
                acc.add(LogComplex(log_mod, phase))
        # unconstrained envelope of everything past degree m
        if S == 0.0:
            tail_log = NEG_INF
        else:
            tail_log = (m + 1) * log_S - lgamma(m + 2)
            if m + 2 > S:
                tail_log -= math.log1p(-S / (m + 2))
        if m > S:
            if acc.max_log_mod > NEG_INF and tail_log < acc.max_log_mod - tail_nats:
                break
            # no matching index found anywhere: compare the envelope
            # against the full-kernel scale e^S instead
            if acc.max_log_mod == NEG_INF and tail_log < S - 2.0 * tail_nats:
                break
        m += 1
        if m > m_cap:
            raise RuntimeError("affine weight sum failed to truncate")

    pref_expo = k * (1j * (ta - tb) - 0.5 * (norm_sq(a) + norm_sq(b)))
    pref = LogComplex(n * (math.log(k) - _LOG_PI) + pref_expo.real, pref_expo.imag)
    return pref * acc.total()


def _theta_grid(g: int, n_per_dim: int):
    axes = [np.arange(n_per_dim) * (2.0 * math.pi / n_per_dim) for _ in range(g)]
    if g == 1:
        return [axes[0]]
    mesh = np.meshgrid(*axes, indexing="ij")
    return [m.ravel() for m in mesh]


def _quadrature_pass(W, irrep, k, cvals, pref: LogComplex, model: str, n_per_dim: int):
    """One trapezoid evaluation; returns (value, max node log-modulus)."""
    g = W.g
    thetas = _theta_grid(g, n_per_dim)
    n_total = len(thetas[0])
    s = np.zeros(n_total, dtype=np.complex128)
    for l in range(W.n_coords):
        if cvals[l] == 0.0:
            continue
        wl = W.column(l)
        ph = np.zeros(n_total)
        for i in range(g):
            ph = ph - wl[i] * thetas[i]
        s = s + cvals[l] * np.exp(1j * ph)
    char_phase = np.zeros(n_total)
    for i in range(g):
        char_phase = char_phase - irrep.weights[i] * thetas[i]

    if model == "projective":
        mods = np.abs(s)
        live = mods > 0.0
        expo_re = np.full(n_total, NEG_INF)
        expo_im = np.zeros(n_total)
        expo_re[live] = k * np.log(mods[live])
        expo_im[live] = k * np.angle(s[live]) + char_phase[live]
    else:
        expo_re = k * s.real
        expo_im = k * s.imag + char_phase

    m = float(np.max(expo_re))
    if m == NEG_INF:
        return pref * LogComplex.zero(), NEG_INF
    total = np.sum(np.exp(expo_re - m + 1j * expo_im))
    mean = total / n_total
    if mean == 0.0:
        return pref * LogComplex.zero(), pref.log_mod + m
    node_scale = pref.log_mod + m
    value = pref * LogComplex(m + math.log(abs(mean)), float(np.angle(mean)))
    return value, node_scale


def equivariant_kernel_quadrature(
    W: WeightMatrix,
    irrep: IrrepLabel,
    k: int,
    x,
    y,
    model: str,
    start_nodes: int | None = None,
) -> LogComplex:
    """Isotypic kernel by trapezoid quadrature of the character average.

    Integrates chi_irrep(t)^{-1} * Pi_k(t^{-1}.x, y) over the torus with
    a tensor-product trapezoid rule, doubling the per-dimension node
    count until two successive values agree to 1e-12 relative (or both
    sit at the round-off floor of the integrand scale, which is the
    selection-rule zero).  The rule is exact once the node count passes
    the trig degree k*max|w| + |irrep| in the projective model, which
    guides the starting count.  Raises QuadratureError with the last two
    iterates if the 2^20 total node cap is hit without convergence.
    """
    if irrep.g != W.g:
        raise ValueError("irrep label rank does not match weight matrix")
    g = W.g
    max_w = int(np.max(np.abs(W.matrix))) if W.matrix.size else 0
    max_irrep = max(abs(w) for w in irrep.weights)

    if model == "projective":
        d = W.n_coords - 1
        xu = _unit_point(x)
        yu = _unit_point(y)
        cvals = (xu * np.conj(yu)).astype(np.complex128)
        pref = LogComplex(lgamma(k + d + 1) - lgamma(k + 1) - d * _LOG_PI, 0.0)
        bandwidth = k * max_w + max_irrep
    elif model == "affine":
        a, ta = affine_point(x)
        b, tb = affine_point(y)
        if len(a) != W.n_coords or len(b) != W.n_coords:
            raise ValueError("point dimension does not match the weight matrix")
        cvals = (a * np.conj(b)).astype(np.complex128)
        expo = k * (1j * (ta - tb) - 0.5 * (norm_sq(a) + norm_sq(b)))
        pref = LogComplex(W.n_coords * (math.log(k) - _LOG_PI) + expo.real, expo.imag)
        # exp(k sum c_l e^{-i w_l theta}) has Fourier mass out to ~ k*sum|c_l|*max|w|
        bandwidth = int(1.2 * k * float(np.abs(cvals).sum()) * max_w) + max_irrep + 64
    else:
        raise ValueError(f"unknown model {model!r}")

    cap_per_dim = 2 ** (20 // g)
    n_per_dim = 8
    while n_per_dim <= bandwidth and n_per_dim < cap_per_dim:
        n_per_dim *= 2
    if start_nodes is not None:
        n_per_dim = max(n_per_dim, int(start_nodes))

    prev, scale_prev = _quadrature_pass(W, irrep, k, cvals, pref, model, n_per_dim)
    while True:
        n_next = n_per_dim * 2
        if n_next**g > _NODE_CAP_TOTAL:
            raise QuadratureError(
                f"quadrature did not converge within {_NODE_CAP_TOTAL} nodes",
                (prev, None),
            )
        cur, scale = _quadrature_pass(W, irrep, k, cvals, pref, model, n_next)
        diff = log_diff_mod(cur, prev)
        floor = max(scale, scale_prev) + math.log(3e-13)
        if diff <= cur.log_mod + math.log(1e-12) or diff <= floor or diff == NEG_INF:
            return cur
        prev, scale_prev = cur, scale
        n_per_dim = n_next


def isotypic_sum(W: WeightMatrix, k: int, x, y) -> LogComplex:
    """Sum of the projective isotypic kernels over every occurring irrep."""
    acc = LogSum()
    for irrep in _occurring_irreps(W, k):
        acc.add(equivariant_kernel_weightsum(W, irrep, k, x, y, "projective"))
    return acc.total()
