"""Physical-layer model of the semantic-relay text link.

Every formula here is a pure function of immutable inputs. All internal
arithmetic runs in linear units (watts, Hz); dB and dBm values appear only
at the API boundary and are converted on entry. The functions broadcast
over numpy arrays, which the grid oracle relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Single accuracy notion used for equality checks across the package.
TOL_EQ = 1e-8
# Solvers keep bandwidth fractions at or above this floor so the logarithms
# in the rate formulas stay finite.
DEFAULT_ALPHA_FLOOR = 1e-6
# Slack used when checking the minimum-similarity constraint on points that
# went through the final equality projection; the projection moves a
# converged point by at most TOL_EQ * D meters, which perturbs similarity
# by well under this amount.
SIMILARITY_SLACK = 1e-7

_LN2 = float(np.log(2.0))


def db_to_lin(value_db):
    """dB -> linear power ratio."""
    return 10.0 ** (value_db / 10.0)


def lin_to_db(value):
    """Linear power ratio -> dB."""
    return 10.0 * np.log10(value)


def dbm_per_hz_to_w_per_hz(value_dbm_hz):
    """Noise spectral density in dBm/Hz -> W/Hz."""
    return 10.0 ** ((value_dbm_hz - 30.0) / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Physical and link constants of the two-hop system."""

    D: float = 100.0  # BS to user horizontal distance, m
    H: float = 10.0  # relay altitude, m
    rho0_db: float = -60.0  # channel power gain at 1 m reference, dB
    beta: float = 3.0  # path loss exponent
    P_b: float = 0.1  # BS transmit power, W
    P_r: float = 0.1  # relay transmit power, W
    N0_dbm_hz: float = -169.0  # noise power spectral density, dBm/Hz
    W: float = 1e6  # total system bandwidth, Hz
    mu: float = 40.0  # bits per word in plain text transmission

    def __post_init__(self):
        if not self.D > 0:
            raise ValueError("D must be positive")
        if not self.H >= 0:
            raise ValueError("H must be nonnegative")
        if not self.beta >= 2:
            raise ValueError("beta must be at least 2")
        if not self.W > 0:
            raise ValueError("W must be positive")
        if not self.P_b > 0:
            raise ValueError("P_b must be positive")
        if not self.P_r > 0:
            raise ValueError("P_r must be positive")
        if not self.mu > 0:
            raise ValueError("mu must be positive")

    @property
    def rho0_lin(self) -> float:
        return db_to_lin(self.rho0_db)

    @property
    def n0_w_hz(self) -> float:
        return dbm_per_hz_to_w_per_hz(self.N0_dbm_hz)


@dataclass(frozen=True)
class SigmoidFit:
    """Logistic fit of semantic similarity versus received SNR in dB.

    The coefficients depend on the number of semantic symbols per word K,
    so the two travel together. eps_bar is the minimum similarity the link
    must sustain; it must lie strictly inside the sigmoid's range
    (a1, a1 + a2), otherwise the equivalent SNR threshold is undefined.
    """

    a1: float = 0.3980
    a2: float = 0.5385
    c1: float = 0.2815
    c2: float = -1.3135
    K: float = 4.0  # average semantic symbols per word
    eps_bar: float = 0.9  # minimum acceptable semantic similarity

    def __post_init__(self):
        if not 0 < self.a1:
            raise ValueError("a1 must be positive")
        if not self.a2 > 0:
            raise ValueError("a2 must be positive")
        if not self.a1 + self.a2 <= 1:
            raise ValueError("a1 + a2 must not exceed 1")
        if not self.c1 > 0:
            raise ValueError("c1 must be positive")
        if not self.K > 0:
            raise ValueError("K must be positive")
        if not self.a1 < self.eps_bar < self.a1 + self.a2:
            raise ValueError("eps_bar must lie strictly between a1 and a1 + a2")


@dataclass(frozen=True)
class DesignPoint:
    """A candidate solution: placement, bandwidth split, SNR and rate."""

    d_br: float  # BS to relay horizontal distance, m
    d_ru: float  # relay to user horizontal distance, m
    alpha_br: float  # bandwidth fraction of the BS->relay hop
    alpha_ru: float  # bandwidth fraction of the relay->user hop
    gamma_br_db: float  # received SNR at the relay, dB
    eta: float  # effective bit rate, bits/s

    def __post_init__(self):
        if self.d_br < 0 or self.d_ru < 0:
            raise ValueError("distances must be nonnegative")
        if self.alpha_br < 0 or self.alpha_ru < 0:
            raise ValueError("bandwidth fractions must be nonnegative")


def path_factor(p: SystemParams, d):
    """(d^2 + H^2)^(beta/2), the distance part of the path loss."""
    return (d * d + p.H * p.H) ** (p.beta / 2.0)


def snr_br_db(p: SystemParams, d_br, alpha_br):
    """Received SNR at the relay in dB for the BS->relay hop.

    Raises ValueError when alpha_br is not positive: the SNR diverges at
    zero allocated bandwidth and callers are expected to clamp to a floor.
    """
    if np.any(np.asarray(alpha_br) <= 0):
        raise ValueError("alpha_br must be positive")
    snr = p.P_b * p.rho0_lin / (path_factor(p, d_br) * alpha_br * p.W * p.n0_w_hz)
    return lin_to_db(snr)


def semantic_similarity(fit: SigmoidFit, gamma_db):
    """Semantic similarity in (a1, a1 + a2) at the given SNR in dB."""
    z = np.clip(fit.c1 * gamma_db + fit.c2, -700.0, 700.0)
    return fit.a1 + fit.a2 / (1.0 + np.exp(-z))


def semantic_rate(p: SystemParams, fit: SigmoidFit, alpha_br, eps, suts_per_word=1.0):
    """Semantic throughput in suts/s on the BS->relay hop.

    suts_per_word is the average semantic information per word; it scales
    this rate but cancels out of the bit-equivalent rate.
    """
    if suts_per_word <= 0:
        raise ValueError("suts_per_word must be positive")
    return alpha_br * p.W * suts_per_word * eps / fit.K


def semantic_bit_rate(p: SystemParams, fit: SigmoidFit, alpha_br, eps):
    """Bit-equivalent rate of the semantic hop, bits/s."""
    return p.mu * alpha_br * p.W * eps / fit.K


def bit_rate_ru(p: SystemParams, d_ru, alpha_ru):
    """Shannon rate of the relay->user bit hop, bits/s.

    Returns 0 at alpha_ru = 0, the continuous limit of x*log2(1 + c/x).
    log1p keeps full relative precision at the tiny SNRs reached when the
    allocated band is wide.
    """
    alpha = np.asarray(alpha_ru, dtype=float)
    safe = np.where(alpha > 0, alpha, 1.0)
    snr = p.P_r * p.rho0_lin / (path_factor(p, d_ru) * safe * p.W * p.n0_w_hz)
    rate = alpha * p.W * np.log1p(snr) / _LN2
    out = np.where(alpha > 0, rate, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def min_snr_threshold_db(fit: SigmoidFit):
    """SNR in dB at which similarity equals eps_bar exactly.

    The minimum-similarity constraint is equivalent to SNR >= this value.
    """
    if not fit.a1 < fit.eps_bar < fit.a1 + fit.a2:
        raise ValueError("eps_bar must lie strictly between a1 and a1 + a2")
    ratio = (fit.eps_bar - fit.a1) / (fit.a1 + fit.a2 - fit.eps_bar)
    return np.log(ratio) / fit.c1 - fit.c2 / fit.c1


def max_semantic_bandwidth(p: SystemParams, fit: SigmoidFit, d_br):
    """Largest alpha_br * W (Hz) keeping similarity at or above eps_bar."""
    thresh_lin = db_to_lin(min_snr_threshold_db(fit))
    return p.P_b * p.rho0_lin / (path_factor(p, d_br) * p.n0_w_hz * thresh_lin)


def effective_rate(p: SystemParams, fit: SigmoidFit, pt: DesignPoint):
    """min of the two hop rates in bits/s, or None when the similarity
    constraint cannot be met at the point (infeasible, distinct from a
    zero rate)."""
    if pt.alpha_br <= 0:
        return None  # no semantic bandwidth: similarity degenerates to a1 < eps_bar
    gamma = snr_br_db(p, pt.d_br, pt.alpha_br)
    eps = semantic_similarity(fit, gamma)
    if eps < fit.eps_bar:
        return None
    r_sem = semantic_bit_rate(p, fit, pt.alpha_br, eps)
    r_bit = bit_rate_ru(p, pt.d_ru, pt.alpha_ru)
    return float(min(r_sem, r_bit))


def is_feasible(p: SystemParams, fit: SigmoidFit, pt: DesignPoint, tol_eq: float = TOL_EQ) -> bool:
    """Check every constraint of the design problem at a point.

    Equalities are checked within tol_eq (distances relative to D); the
    similarity threshold gets SIMILARITY_SLACK of headroom so that points
    tightened by the final equality projection are not rejected for a
    sub-1e-8 drift.
    """
    if min(pt.d_br, pt.d_ru, pt.alpha_br, pt.alpha_ru) < -tol_eq:
        return False
    if abs(pt.d_br + pt.d_ru - p.D) > tol_eq * p.D:
        return False
    if abs(pt.alpha_br + pt.alpha_ru - 1.0) > tol_eq:
        return False
    if pt.alpha_br <= 0:
        return False
    eps = semantic_similarity(fit, snr_br_db(p, pt.d_br, pt.alpha_br))
    return bool(eps >= fit.eps_bar - SIMILARITY_SLACK)
