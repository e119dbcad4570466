"""Black-Scholes closed forms and the log-variable transform shared by the solvers.

The PIDE solvers work in the transformed frame tau = T - t, x = ln(S/K),
u(tau, x) = e^(r tau) V(t, S); this module owns that change of variables and
the no-jump closed forms used for boundary data and validation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "OptionSpec",
    "norm_cdf",
    "payoff",
    "bs_price",
    "to_log_coords",
    "from_log_coords",
    "u_from_price",
    "price_from_u",
    "u_bs",
]


@dataclass(frozen=True)
class OptionSpec:
    """Vanilla option contract plus the diffusion market parameters."""

    strike: float
    expiry: float
    rate: float
    sigma: float
    kind: str = "put"

    def __post_init__(self) -> None:
        if self.strike <= 0:
            raise ValueError(f"strike must be > 0, got {self.strike}")
        if self.expiry <= 0:
            raise ValueError(f"expiry must be > 0, got {self.expiry}")
        if self.rate < 0:
            raise ValueError(f"rate must be >= 0, got {self.rate}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.kind not in ("call", "put"):
            raise ValueError(f"kind must be 'call' or 'put', got {self.kind!r}")


def norm_cdf(d):
    """Standard normal CDF, evaluated through the complementary error function.

    Backed by scipy's erfc-based routine (absolute error well below 1e-12);
    vectorized over d.
    """
    out = special.ndtr(np.asarray(d, dtype=float))
    return float(out) if np.ndim(d) == 0 else out


def payoff(spec: OptionSpec, S):
    """Terminal payoff: (K - S)^+ for puts, (S - K)^+ for calls."""
    S = np.asarray(S, dtype=float)
    if spec.kind == "put":
        out = np.maximum(spec.strike - S, 0.0)
    else:
        out = np.maximum(S - spec.strike, 0.0)
    return float(out) if out.ndim == 0 else out


def bs_price(spec: OptionSpec, S, t: float = 0.0):
    """No-jump closed-form price at calendar time t < T; vectorized over S."""
    S_arr = np.asarray(S, dtype=float)
    if np.any(S_arr <= 0):
        raise ValueError("spot must be > 0")
    if t >= spec.expiry:
        raise ValueError(f"calendar time {t} is not before expiry {spec.expiry}")
    tau = spec.expiry - t
    sq = spec.sigma * math.sqrt(tau)
    d1 = (np.log(S_arr / spec.strike) + (spec.rate + 0.5 * spec.sigma**2) * tau) / sq
    d2 = d1 - sq
    disc = spec.strike * math.exp(-spec.rate * tau)
    if spec.kind == "call":
        out = S_arr * special.ndtr(d1) - disc * special.ndtr(d2)
    else:
        out = disc * special.ndtr(-d2) - S_arr * special.ndtr(-d1)
    return float(out) if out.ndim == 0 else out


def to_log_coords(spec: OptionSpec, t: float, S):
    """Map (calendar time, spot) to the solver frame (tau, x) = (T - t, ln(S/K))."""
    S_arr = np.asarray(S, dtype=float)
    if np.any(S_arr <= 0):
        raise ValueError("spot must be > 0")
    x = np.log(S_arr / spec.strike)
    return spec.expiry - t, (float(x) if x.ndim == 0 else x)


def from_log_coords(spec: OptionSpec, tau: float, x):
    """Inverse of to_log_coords: (tau, x) back to (t, S)."""
    x_arr = np.asarray(x, dtype=float)
    S = spec.strike * np.exp(x_arr)
    return spec.expiry - tau, (float(S) if S.ndim == 0 else S)


def u_from_price(spec: OptionSpec, tau: float, V):
    """Forward value transform u = e^(r tau) V."""
    out = np.asarray(V, dtype=float) * math.exp(spec.rate * tau)
    return float(out) if out.ndim == 0 else out


def price_from_u(spec: OptionSpec, tau: float, u):
    """Back transform V = e^(-r tau) u."""
    out = np.asarray(u, dtype=float) * math.exp(-spec.rate * tau)
    return float(out) if out.ndim == 0 else out


def u_bs(spec: OptionSpec, tau: float, x):
    """Transformed no-jump solution u(tau, x) = e^(r tau) V_bs(T - tau, K e^x).

    At tau = 0 the d1/d2 formulas have a removable singularity; the payoff
    limit is returned directly.
    """
    if tau < 0 or tau > spec.expiry:
        raise ValueError(f"tau must lie in [0, {spec.expiry}], got {tau}")
    x_arr = np.asarray(x, dtype=float)
    S = spec.strike * np.exp(x_arr)
    if tau == 0.0:
        return payoff(spec, S)
    out = u_from_price(spec, tau, bs_price(spec, S, spec.expiry - tau))
    return float(out) if np.ndim(out) == 0 else out
