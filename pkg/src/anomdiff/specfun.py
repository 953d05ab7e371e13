"""Special functions used by every other module.

Gamma/Beta wrappers, the two-parameter Mittag-Leffler function, the Wright
function, Bessel J/I/K and zeros of J.  All arguments and results are real;
complex arguments are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "SeriesControl",
    "MLParams",
    "gamma_fn",
    "beta_fn",
    "mittag_leffler",
    "wright_w",
    "bessel_j",
    "bessel_i",
    "bessel_k",
    "bessel_j_prime",
    "bessel_j_zeros",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SeriesControl:
    """Termination budget for power-series evaluation."""

    abs_tol: float = 1e-14
    max_terms: int = 2000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")


_DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class MLParams:
    """Index pair (alpha, beta) of the two-parameter Mittag-Leffler function."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")


def _is_nonpositive_integer(x: float, tol: float = 1e-12) -> bool:
    return x < 0.5 and abs(x - round(x)) <= tol * max(1.0, abs(x))


def gamma_fn(x: float) -> float:
    """Gamma function on the real line; poles at 0, -1, -2, ... are rejected."""
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma pole at x={x}")
    return float(sp.gamma(x))


def beta_fn(a: float, b: float) -> float:
    """Euler Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b)."""
    for arg in (a, b, a + b):
        if _is_nonpositive_integer(arg):
            raise PoleError(f"beta pole at ({a}, {b})")
    return float(sp.beta(a, b))


def _series_peak_log(alpha: float, beta: float, absz: float) -> float:
    """log of the largest term of sum |z|^k / Gamma(alpha*k + beta).

    The peak sits near alpha*k + beta = |z|^(1/alpha); the returned value
    bounds the round-off floor of the summed series.
    """
    if absz <= 1.0:
        return 0.0
    y = absz ** (1.0 / alpha)
    k = max((y - beta) / alpha, 0.0)
    a = alpha * k + beta
    if a <= 0:
        return 0.0
    return k * math.log(absz) - float(sp.gammaln(a))


def _ml_series(alpha: float, beta: float, z: float, control: SeriesControl) -> float:
    absz = abs(z)
    logz = math.log(absz) if absz > 0 else -math.inf
    k_peak = max(absz ** (1.0 / alpha) - beta, 0.0) / alpha
    acc = 0.0
    small = 0
    for k in range(control.max_terms):
        a = alpha * k + beta
        if a > 0:
            log_mag = k * logz - float(sp.gammaln(a)) if k > 0 else -float(sp.gammaln(a))
            if log_mag > 700.0:
                raise ConvergenceError("Mittag-Leffler series overflow")
            term = math.exp(log_mag)
            if z < 0 and k % 2 == 1:
                term = -term
        else:
            term = (z**k) * float(sp.rgamma(a))
        acc += term
        if abs(term) < control.abs_tol and k >= k_peak:
            small += 1
            if small >= 2:
                return acc
        else:
            small = 0
    raise ConvergenceError("Mittag-Leffler series did not converge within max_terms")


def _ml_asymptotic(alpha: float, beta: float, z: float, control: SeriesControl) -> float:
    # algebraic expansion on the negative axis, 0 < alpha < 1:
    #   E_{a,b}(z) = -sum_{k>=1} z^{-k} / Gamma(b - a*k),   z -> -inf
    acc = 0.0
    prev = math.inf
    zk = 1.0
    for k in range(1, 200):
        zk *= z
        if not math.isfinite(zk):
            break
        rg = float(sp.rgamma(beta - alpha * k))
        if rg == 0.0:
            continue  # gamma pole: the term vanishes identically
        term = -rg / zk
        mag = abs(term)
        if mag > prev:
            break  # optimal truncation reached
        acc += term
        if mag < control.abs_tol:
            break
        prev = mag
    return acc


def mittag_leffler(p: MLParams, z: float, control: SeriesControl = _DEFAULT_CONTROL) -> float:
    """E_{alpha,beta}(z) = sum_{k>=0} z^k / Gamma(alpha*k + beta) for real z.

    The power series is summed directly where its round-off floor stays small;
    for large negative z the algebraic tail expansion -sum z^{-k}/Gamma(beta -
    alpha*k) is used instead.  The branch is picked by comparing a-priori error
    estimates (cancellation floor of the series versus the optimal-truncation
    error exp(-|z|^(1/alpha)) of the expansion); if neither reaches 1e-6 a
    ConvergenceError is raised.
    """
    alpha, beta = p.alpha, p.beta
    if z == 0.0:
        return float(sp.rgamma(beta))
    if alpha == 1.0 and beta == 1.0:
        return math.exp(z)

    err_series = _EPS * math.exp(min(_series_peak_log(alpha, beta, abs(z)), 700.0))
    if z < 0 and alpha < 1.0:
        err_asym = math.exp(-abs(z) ** (1.0 / alpha))
        if err_asym < err_series:
            if err_asym > 1e-6:
                raise ConvergenceError(
                    f"E_{{{alpha},{beta}}}({z}) not computable to tolerance"
                )
            return _ml_asymptotic(alpha, beta, z, control)
    if err_series > 1e-6:
        raise ConvergenceError(f"E_{{{alpha},{beta}}}({z}) series loses all precision")
    return _ml_series(alpha, beta, z, control)


def wright_w(alpha: float, beta: float, z: float, control: SeriesControl = _DEFAULT_CONTROL) -> float:
    """Wright function W_{alpha,beta}(z) = sum_{k>=0} z^k / (k! Gamma(alpha*k + beta)).

    Requires alpha > -1.  Summation stops once terms have passed their peak and
    dropped below the absolute tolerance; the round-off floor of the recorded
    peak term guards against silent cancellation loss.
    """
    if not alpha > -1.0:
        raise DomainError("wright_w requires alpha > -1")
    if z == 0.0:
        return float(sp.rgamma(beta))
    absz = abs(z)
    logz = math.log(absz)
    acc = 0.0
    peak = 0.0
    falling = False
    small = 0
    for k in range(control.max_terms):
        a = alpha * k + beta
        rg = float(sp.rgamma(a))
        if rg == 0.0:
            term = 0.0
            mag = 0.0
        else:
            log_mag = k * logz - float(sp.gammaln(k + 1.0)) + math.log(abs(rg))
            if log_mag > 700.0:
                raise ConvergenceError("Wright series overflow")
            mag = math.exp(log_mag)
            term = mag if rg > 0 else -mag
            if z < 0 and k % 2 == 1:
                term = -term
        acc += term
        if mag > peak:
            peak = mag
        elif mag > 0:
            falling = True
        if falling and mag < control.abs_tol:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    else:
        raise ConvergenceError("Wright series did not converge within max_terms")
    if peak * _EPS > 1e-6:
        raise ConvergenceError(f"W_{{{alpha},{beta}}}({z}) series loses all precision")
    return acc


def bessel_j(order: float, x: float) -> float:
    """Bessel function of the first kind J_order(x), order > -1, x >= 0."""
    if not order > -1.0:
        raise DomainError("bessel_j requires order > -1")
    if x < 0:
        raise DomainError("bessel_j requires x >= 0")
    return float(sp.jv(order, x))


def bessel_j_prime(order: float, x: float) -> float:
    """First derivative of J_order at x."""
    return float(sp.jvp(order, x, 1))


def bessel_i(order: float, x: float) -> float:
    """Modified Bessel function of the first kind I_order(x), x >= 0."""
    if x < 0:
        raise DomainError("bessel_i requires x >= 0")
    return float(sp.iv(order, x))


def bessel_k(order: float, x: float) -> float:
    """Modified Bessel function of the second kind K_order(x), x > 0.

    K_{-order} = K_{order} holds exactly: the order enters through |order|.
    """
    if not x > 0:
        raise DomainError("bessel_k requires x > 0")
    return float(sp.kv(abs(order), x))


def bessel_j_zeros(order: float, count: int) -> np.ndarray:
    """First `count` positive zeros of J_order, strictly increasing.

    Zeros are bracketed by scanning for sign changes in steps of pi/8 and
    refined with Brent's method; every root is validated to |J| <= 1e-10.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    if not order > -1.0:
        raise DomainError("bessel_j_zeros requires order > -1")

    zeros = []
    step = math.pi / 8.0
    x = max(order, 0.0) + 1e-9
    fx = sp.jv(order, x)
    # J_order(0+) has the sign of the leading term; tiny offsets avoid the origin
    budget = int((count + 2) * 16 * (2.0 + abs(order)))
    for _ in range(budget):
        x_next = x + step
        f_next = sp.jv(order, x_next)
        if fx == 0.0:
            zeros.append(x)
        elif np.sign(fx) != np.sign(f_next):
            root = brentq(lambda t: sp.jv(order, t), x, x_next, xtol=1e-14, rtol=4 * _EPS)
            zeros.append(float(root))
        if len(zeros) >= count:
            break
        x, fx = x_next, f_next
    else:
        raise ConvergenceError(f"failed to bracket {count} zeros of J_{order}")

    out = np.array(zeros[:count])
    resid = np.abs(sp.jv(order, out))
    if np.any(resid > 1e-10):
        raise ConvergenceError("Bessel zero refinement exceeded residual 1e-10")
    return out
