import math

import numpy as np
import pytest
from scipy.special import kv

from anomdiff.errors import PoleError, StripError
from anomdiff.laws import h_fox, l_fox
from anomdiff.mellin import (
    FoxH,
    MellinStrip,
    fox_h_eval,
    fox_h_mellin,
    mellin_convolve,
    mellin_numeric,
)
from anomdiff.specfun import gamma_fn

SQRT_PI = math.sqrt(math.pi)


def gamma_density(mu, t=1.0):
    def f(x):
        if x <= 0 or x > 700 * t:
            return 0.0
        return (x / t) ** (mu - 1.0) * math.exp(-x / t) / (t * gamma_fn(mu))

    return f


class TestMellinNumeric:
    def test_exponential_mean(self):
        assert mellin_numeric(gamma_density(1.0), 2.0) == pytest.approx(1.0, abs=1e-9)

    def test_normalization(self):
        for mu in (0.5, 1.0, 2.0):
            assert mellin_numeric(gamma_density(mu), 1.0) == pytest.approx(1.0, abs=1e-9)

    def test_gamma_ratio(self):
        got = mellin_numeric(gamma_density(2.0), 1.75)
        assert got == pytest.approx(gamma_fn(2.75) / gamma_fn(2.0), abs=1e-9)
        assert got == pytest.approx(1.6083594219855455, abs=1e-7)

    def test_strip_violation(self):
        with pytest.raises(StripError):
            mellin_numeric(gamma_density(1.0), 2.0, strip=MellinStrip(0.0, 1.5))

    def test_scaling_and_shift_rules(self):
        f = gamma_density(2.0)
        for eta in (0.8, 1.3):
            got = mellin_numeric(lambda x: f(2.5 * x), eta)
            assert got == pytest.approx(2.5**-eta * gamma_fn(eta + 1.0), abs=1e-8)
            got = mellin_numeric(lambda x: x**0.6 * f(x), eta)
            assert got == pytest.approx(gamma_fn(eta + 1.6), abs=1e-8)

    def test_tail_integral_rule(self):
        # M[int_x^inf f](eta) = M[f](eta+1)/eta on the shape-2 gamma law
        f = gamma_density(2.0)
        tail = lambda x: (1.0 + x) * math.exp(-x) if x < 700 else 0.0
        for eta in (0.7, 1.2):
            assert mellin_numeric(tail, eta) == pytest.approx(
                mellin_numeric(f, eta + 1.0) / eta, abs=1e-7
            )


class TestMellinConvolve:
    def test_point_mass_recovers_identity(self):
        # a gamma spike at 1 approximates the unit of the convolution; the
        # tolerance is the smoothing bias of the finite spike width
        mu = 150.0

        def spike(s):
            if s <= 0:
                return 0.0
            lg = (mu - 1.0) * math.log(s * mu) - s * mu - math.lgamma(mu) + math.log(mu)
            return math.exp(lg) if lg > -700 else 0.0

        f = gamma_density(2.0)
        assert mellin_convolve(f, spike, 1.3) == pytest.approx(f(1.3), abs=5e-3)

    def test_mixed_pair_closed_form(self):
        f1 = gamma_density(1.0)
        f2 = lambda s: s**-2.0 * math.exp(-1.0 / s) if s > 0 else 0.0
        assert mellin_convolve(f1, f2, 1.0) == pytest.approx(0.25, abs=1e-9)

    def test_equal_pair_bessel_form(self):
        fh = lambda s: s**-0.5 * math.exp(-s) / SQRT_PI if 0 < s < 700 else 0.0
        want = 2.0 / math.pi * kv(0, 2.0)
        got = mellin_convolve(fh, fh, 1.0)
        assert got == pytest.approx(want, abs=1e-9)
        assert got == pytest.approx(0.07250709134387024, abs=1e-9)

    def test_factorization(self):
        f1 = gamma_density(0.7)
        f2 = gamma_density(1.9)
        for eta in (0.8, 1.2):
            lhs = mellin_numeric(lambda x: mellin_convolve(f1, f2, x), eta, support=(1e-30, 200.0))
            rhs = mellin_numeric(f1, eta) * mellin_numeric(f2, eta)
            assert lhs == pytest.approx(rhs, abs=1e-6)


class TestFoxH:
    def test_inverse_law_kernel_values(self):
        lh = l_fox(0.5)
        assert fox_h_mellin(lh, 1.0) == pytest.approx(1.0, rel=1e-14)
        assert fox_h_mellin(lh, 0.5) == pytest.approx(gamma_fn(0.5) / gamma_fn(0.75), rel=1e-13)
        assert fox_h_mellin(lh, 0.5) == pytest.approx(1.4464090846320772, rel=1e-9)

    def test_stable_kernel_value(self):
        hh = h_fox(0.5)
        assert fox_h_mellin(hh, 0.5) == pytest.approx(2.0 / SQRT_PI, rel=1e-13)

    def test_eval_closed_forms(self):
        assert fox_h_eval(l_fox(0.5), 1.0) == pytest.approx(
            math.exp(-0.25) / SQRT_PI, abs=1e-10
        )
        assert fox_h_eval(h_fox(0.5), 1.0) == pytest.approx(
            math.exp(-0.25) / (2.0 * SQRT_PI), abs=1e-10
        )

    def test_shift_property(self):
        # shifting every parameter by c times its slope multiplies the
        # function by x^c (the kernel becomes kernel(eta + c)); equivalently
        # the original equals x^-c times the shifted evaluation
        lh = l_fox(0.5)
        shifted = FoxH(
            m=lh.m,
            n=lh.n,
            p=lh.p,
            q=lh.q,
            upper=tuple((a + al, al) for a, al in lh.upper),
            lower=tuple((b + be, be) for b, be in lh.lower),
            strip=MellinStrip(lh.strip.a - 1.0, lh.strip.b),
        )
        for eta in (1.2, 1.8):
            assert fox_h_mellin(shifted, eta) == pytest.approx(
                fox_h_mellin(lh, eta + 1.0), rel=1e-12
            )
        for x in (0.5, 1.0, 2.0):
            assert (1.0 / x) * fox_h_eval(shifted, x, abscissa=0.5) == pytest.approx(
                fox_h_eval(lh, x), abs=1e-8
            )

    @pytest.mark.parametrize("nu", [0.5, 1 / 3])
    def test_roundtrip(self, nu):
        lh, hh = l_fox(nu), h_fox(nu)
        for eta in (0.3, 0.6, 0.9):
            got = mellin_numeric(lambda x: fox_h_eval(lh, x), eta, support=(1e-30, 50.0))
            assert got == pytest.approx(fox_h_mellin(lh, eta), abs=1e-6)
            got = mellin_numeric(lambda x: fox_h_eval(hh, x), eta, support=(1e-30, 1e15))
            assert got == pytest.approx(fox_h_mellin(hh, eta), abs=1e-6)

    def test_pole_error_and_strip_error(self):
        lh = l_fox(0.5)
        with pytest.raises(StripError):
            fox_h_mellin(lh, -0.5)
        hh = h_fox(0.5)
        with pytest.raises(PoleError):
            fox_h_mellin(hh, 0.99999999999)  # Gamma(1-eta) argument hits 0

    def test_pole_free_strip_enforced(self):
        with pytest.raises(PoleError):
            FoxH(m=1, n=0, p=1, q=1, upper=((0.5, 0.5),), lower=((0.0, 1.0),),
                 strip=MellinStrip(-1.0, 1.0))

    def test_json_roundtrip(self):
        lh = l_fox(1 / 3)
        doc = lh.to_json()
        back = FoxH.from_json(doc)
        assert back == lh
        import json

        keys = set(json.loads(doc))
        assert {"m", "n", "p", "q", "upper", "lower", "strip"} <= keys
