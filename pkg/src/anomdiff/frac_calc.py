"""Riemann-Liouville (left/right) and Dzhrbashyan-Caputo fractional operators
on the half-line, of order alpha in (0, 1).

Left-sided operators integrate from 0 to x, right-sided ones from x to
infinity.  Singular kernels (x-s)^(-alpha) are integrated exactly against
piecewise-linear grid samples and by algebraic-weight quadrature for plain
callables; power laws are differentiated by the exact rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DivergentTailError, DomainError
from .specfun import gamma_fn

__all__ = [
    "PowerLaw",
    "GridFunction",
    "rl_left",
    "rl_right",
    "caputo",
    "frac_integral",
]


@dataclass(frozen=True)
class PowerLaw:
    """The function c * x^(exponent - 1) on (0, inf)."""

    coefficient: float
    exponent: float

    def __post_init__(self):
        if not self.exponent > 0:
            raise DomainError("PowerLaw exponent must be positive")

    def __call__(self, s):
        return self.coefficient * np.asarray(s, dtype=float) ** (self.exponent - 1.0)


class GridFunction:
    """A function sampled on strictly increasing nodes in (0, X_max].

    Evaluation interpolates linearly between nodes, clamps below the first
    node, and extrapolates beyond the last node as
    f(X_max) * (s / X_max)^extrapolation_decay.  A decay of -inf means the
    function is treated as zero past the grid.
    """

    def __init__(self, nodes, values, extrapolation_decay: float = -np.inf):
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
            raise DomainError("nodes/values must be 1-d arrays of equal length >= 2")
        if not np.all(np.diff(nodes) > 0):
            raise DomainError("nodes must be strictly increasing")
        if not nodes[0] > 0:
            raise DomainError("nodes must be positive")
        if not np.all(np.isfinite(values)):
            raise DomainError("values must be finite")
        self.nodes = nodes
        self.values = values
        self.extrapolation_decay = float(extrapolation_decay)

    @classmethod
    def from_callable(cls, f, nodes, extrapolation_decay: float = -np.inf) -> "GridFunction":
        nodes = np.asarray(nodes, dtype=float)
        return cls(nodes, np.asarray([f(s) for s in nodes], dtype=float), extrapolation_decay)

    def __call__(self, s):
        scalar = np.ndim(s) == 0
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.interp(s_arr, self.nodes, self.values)
        beyond = s_arr > self.nodes[-1]
        if np.any(beyond):
            if self.extrapolation_decay == -np.inf:
                out[beyond] = 0.0
            else:
                out[beyond] = (
                    self.values[-1]
                    * (s_arr[beyond] / self.nodes[-1]) ** self.extrapolation_decay
                )
        return float(out[0]) if scalar else out

    def derivative(self) -> "GridFunction":
        if self.nodes.size >= 4:
            from scipy.interpolate import CubicSpline

            dv = CubicSpline(self.nodes, self.values)(self.nodes, 1)
        else:
            dv = np.gradient(self.values, self.nodes)
        decay = self.extrapolation_decay
        if math.isfinite(decay):
            decay -= 1.0
        return GridFunction(self.nodes, np.asarray(dv, dtype=float), decay)

    @property
    def min_gap(self) -> float:
        return float(np.min(np.diff(self.nodes)))

    @property
    def x_max(self) -> float:
        return float(self.nodes[-1])


def _quad(fn, a, b, **kw):
    kw.setdefault("epsabs", 1e-11)
    kw.setdefault("epsrel", 1e-9)
    kw.setdefault("limit", 200)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(fn, a, b, **kw)
    return val


def _grid_left_alg_integral(gf: GridFunction, a: float, y: float) -> float:
    """int_0^y (y-s)^(-a) gf(s) ds, exact for the piecewise-linear interpolant."""
    inner = gf.nodes[gf.nodes < y]
    xs = np.concatenate([[0.0], inner, [y]])
    keep = np.concatenate([[True], np.diff(xs) > 0.0])
    xs = xs[keep]
    vs = gf(xs)
    x0, x1 = xs[:-1], xs[1:]
    v0, v1 = vs[:-1], vs[1:]
    slope = (v1 - v0) / (x1 - x0)
    const = v0 - slope * x0
    w_hi = y - x0  # larger kernel argument
    w_lo = y - x1
    p1 = 1.0 - a
    p2 = 2.0 - a
    term1 = (const + slope * y) * (w_hi**p1 - w_lo**p1) / p1
    term2 = -slope * (w_hi**p2 - w_lo**p2) / p2
    return float(np.sum(term1 + term2))


def _left_alg_integral(f, a: float, y: float) -> float:
    """int_0^y (y-s)^(-a) f(s) ds for a < 1; algebraic-weight quadrature, or the
    exact segment sum when f is a sampled grid."""
    if y <= 0:
        return 0.0
    if isinstance(f, GridFunction):
        return _grid_left_alg_integral(f, a, y)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, 0.0, y, weight="alg", wvar=(0.0, -a),
                                epsabs=1e-12, epsrel=1e-10, limit=200)
    return val


def _check_alpha(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise DomainError("fractional order must lie in (0, 1)")


def _fd_step(x: float) -> float:
    return min(max(1e-4 * x, 1e-8), 0.45 * x)


def rl_left(alpha: float, f, x: float) -> float:
    """Left Riemann-Liouville derivative
    (d/dx) int_0^x (x-s)^(-alpha) f(s) ds / Gamma(1-alpha).

    PowerLaw inputs use the exact rule
    Gamma(b)/Gamma(b-alpha) * c * x^(b-alpha-1); sampled inputs difference the
    regularized integral with a centered step.
    """
    _check_alpha(alpha)
    if x <= 0:
        raise DomainError("x must be positive")
    if isinstance(f, PowerLaw):
        b = f.exponent
        return gamma_fn(b) / gamma_fn(b - alpha) * f.coefficient * x ** (b - alpha - 1.0)
    if isinstance(f, GridFunction) and x > f.x_max:
        raise DomainError("x outside grid coverage")
    h = _fd_step(x)
    c = 1.0 / gamma_fn(1.0 - alpha)
    up = _left_alg_integral(f, alpha, x + h)
    dn = _left_alg_integral(f, alpha, x - h)
    return c * (up - dn) / (2.0 * h)


def _tail_decay_of(f, tail_decay):
    if tail_decay is not None:
        return float(tail_decay)
    if isinstance(f, GridFunction):
        return f.extrapolation_decay
    if isinstance(f, PowerLaw):
        return f.exponent - 1.0
    return -np.inf


def _derivative_callable(f):
    if isinstance(f, GridFunction):
        return f.derivative()
    if isinstance(f, PowerLaw):
        c, b = f.coefficient, f.exponent
        return lambda s: c * (b - 1.0) * s ** (b - 2.0)

    def num_diff(s):
        h = 1e-6 * max(abs(s), 1.0)
        return (f(s + h) - f(s - h)) / (2.0 * h)

    return num_diff


def rl_right(alpha: float, f, x: float, tail_decay: float | None = None) -> float:
    """Right Riemann-Liouville derivative
    -(d/dx) int_x^inf (s-x)^(-alpha) f(s) ds / Gamma(1-alpha).

    The x-derivative is taken inside the integral (equal by dominated
    convergence), giving -int_0^inf w^(-alpha) f'(x+w) dw / Gamma(1-alpha).
    The tail of f must decay like s^p with p < -alpha.
    """
    _check_alpha(alpha)
    if x < 0:
        raise DomainError("x must be non-negative")
    decay = _tail_decay_of(f, tail_decay)
    if not decay < -alpha:
        raise DivergentTailError(
            f"tail exponent {decay} too weak for right derivative of order {alpha}"
        )
    if isinstance(f, PowerLaw):
        b = f.exponent
        # exact rule, valid when the defining integral converges (b < alpha)
        return gamma_fn(1.0 + alpha - b) / gamma_fn(1.0 - b) * f.coefficient * x ** (
            b - alpha - 1.0
        )
    fp = _derivative_callable(f)
    w0 = max(1.0, 0.5 * abs(x))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        near, _ = integrate.quad(lambda w: fp(x + w), 0.0, w0, weight="alg",
                                 wvar=(-alpha, 0.0), epsabs=1e-12, epsrel=1e-10, limit=200)
    far = _quad(lambda w: w ** (-alpha) * fp(x + w), w0, np.inf)
    return -(near + far) / gamma_fn(1.0 - alpha)


def caputo(alpha: float, f, t: float) -> float:
    """Dzhrbashyan-Caputo derivative
    int_0^t (t-s)^(-alpha) f'(s) ds / Gamma(1-alpha), alpha in (0, 1).

    f' comes from differencing grid samples (or a centered difference for
    plain callables); constants map to zero.
    """
    _check_alpha(alpha)
    if t <= 0:
        raise DomainError("t must be positive")
    if isinstance(f, GridFunction) and t > f.x_max:
        raise DomainError("t outside grid coverage")
    fp = _derivative_callable(f)
    return _left_alg_integral(fp, alpha, t) / gamma_fn(1.0 - alpha)


def frac_integral(side: str, alpha: float, f, x: float, tail_decay: float | None = None) -> float:
    """Fractional integrals used by the Mellin boundary terms:

      left : int_0^x (x-s)^(alpha-1) f(s) ds / Gamma(alpha)
      right: int_x^inf (s-x)^(alpha-1) f(s) ds / Gamma(alpha)

    The right version requires the tail of f to decay like s^p, p < -alpha.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if side == "left":
        if x <= 0:
            raise DomainError("x must be positive")
        return _left_alg_integral(f, 1.0 - alpha, x) / gamma_fn(alpha)
    if side != "right":
        raise DomainError("side must be 'left' or 'right'")
    decay = _tail_decay_of(f, tail_decay)
    if not decay < -alpha:
        raise DivergentTailError(
            f"tail exponent {decay} too weak for the right fractional integral"
        )
    w0 = max(1.0, 0.5 * abs(x))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        near, _ = integrate.quad(lambda w: f(x + w), 0.0, w0, weight="alg",
                                 wvar=(alpha - 1.0, 0.0), epsabs=1e-12, epsrel=1e-10, limit=200)
    far = _quad(lambda w: w ** (alpha - 1.0) * f(x + w), w0, np.inf)
    return (near + far) / gamma_fn(alpha)
