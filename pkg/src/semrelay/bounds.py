"""First-order tangent surrogates used by the convex block subproblems.

Each nonconvex term in the design problem is replaced by the tangent of a
convex (or concave) reparametrization, taken at the incumbent iterate. The
surrogates are tight at the expansion point, globally one-sided, and their
coefficients are recomputed from the incumbent at every iteration; caching
them across iterations would break the ascent property of the outer loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from semrelay.model import SigmoidFit, SystemParams, lin_to_db, path_factor

_LOG2E = float(np.log2(np.e))
_LOG10E = float(np.log10(np.e))


@dataclass(frozen=True)
class LocalPoint:
    """Expansion point for the tangent surrogates, one field per variable."""

    d_br: float  # m
    d_ru: float  # m
    alpha_br: float  # bandwidth fraction, must stay positive
    gamma_br_db: float  # dB
    similarity: float  # similarity surrogate value at the point

    def __post_init__(self):
        if self.d_br < 0 or self.d_ru < 0:
            raise ValueError("expansion distances must be nonnegative")
        if not self.alpha_br > 0:
            raise ValueError("expansion alpha_br must be positive")


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -700.0, 700.0)))


def rate_ru_tangent(p: SystemParams, lp: LocalPoint, alpha_ru, d_ru):
    """Lower bound of the relay->user rate as the placement varies.

    The rate is convex in u = (d_ru^2 + H^2)^(beta/2); this is its tangent
    in u at lp.d_ru, so it never exceeds the true rate and touches it at
    d_ru = lp.d_ru. Can go negative for large d_ru; callers must not clamp,
    clamping would destroy convexity of the surrogate constraint.
    """
    u_t = path_factor(p, lp.d_ru)
    snr_t = p.P_r * p.rho0_lin / (u_t * alpha_ru * p.W * p.n0_w_hz)
    e1 = np.log1p(snr_t) * _LOG2E
    e2 = (snr_t / u_t) * _LOG2E / (1.0 + snr_t)
    return alpha_ru * p.W * (e1 - e2 * (path_factor(p, d_ru) - u_t))


def sigmoid_tangent(fit: SigmoidFit, lp: LocalPoint, gamma_db):
    """Lower bound of the logistic term 1/(1 + exp(-(c1*gamma + c2))).

    Tangent of 1/(1 + v) in v = exp(-(c1*gamma + c2)) at lp.gamma_br_db;
    tight there and below the exact value everywhere else.
    """
    chi_t = fit.c1 * lp.gamma_br_db + fit.c2
    sig_t = _sigmoid(chi_t)
    chi = np.clip(fit.c1 * gamma_db + fit.c2, -700.0, 700.0)
    return sig_t - sig_t * sig_t * (np.exp(-chi) - np.exp(-np.clip(chi_t, -700.0, 700.0)))


def log_path_tangent(lp: LocalPoint, H: float, d_br):
    """Upper bound of log10(d_br^2 + H^2), tangent in d_br^2 at lp.d_br."""
    base = lp.d_br * lp.d_br + H * H
    return np.log10(base) + (_LOG10E / base) * (d_br * d_br - lp.d_br * lp.d_br)


def square_tangent(lp: LocalPoint, alpha_br, S):
    """Lower bound of (alpha_br + S)^2, tangent at lp.alpha_br + lp.similarity."""
    t = lp.alpha_br + lp.similarity
    return -t * t + 2.0 * t * (alpha_br + S)


def snr_cap_tangent(p: SystemParams, lp: LocalPoint, d_br, alpha_br):
    """Lower bound in alpha_br of the SNR ceiling of the semantic hop, dB.

    The exact ceiling contains -10*log10(alpha_br), convex in alpha_br;
    linearizing it at lp.alpha_br gives a ceiling that never exceeds the
    exact one, so the constraint gamma <= ceiling stays conservative.
    """
    base_db = lin_to_db(p.P_b * p.rho0_lin / (path_factor(p, d_br) * p.W * p.n0_w_hz))
    e9 = 10.0 * np.log10(lp.alpha_br)
    e10 = 10.0 * _LOG10E / lp.alpha_br
    return base_db - e9 - e10 * (alpha_br - lp.alpha_br)


def similarity_tangent(fit: SigmoidFit, lp: LocalPoint, gamma_db):
    """Lower bound of semantic similarity in gamma; a1 + a2 times the
    logistic tangent."""
    return fit.a1 + fit.a2 * sigmoid_tangent(fit, lp, gamma_db)
