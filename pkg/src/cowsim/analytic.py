"""Closed-form rates, error rates, information quantities and optimisation.

Everything in this module is a pure function of its inputs and implements
the linearised small-signal formulas (valid for ``mu * t << 1``) verbatim,
so that it can serve as the oracle against which Monte Carlo runs are
checked.  ``SystemParams.small_signal_ok`` reports whether a parameter set
is inside the validity domain; :func:`raw_rate` warns when it is not.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, asdict

from .params import (
    EveStrategy,
    ParameterError,
    SmallSignalWarning,
    StrategyInfeasibleError,
    SystemParams,
    channel_transmission,
)

__all__ = [
    "KeyRateReport",
    "MonitorRates",
    "QberUndefinedError",
    "bb84_reference",
    "binary_entropy",
    "channel_transmission",
    "data_qber",
    "eve_information",
    "eve_q_prime",
    "monitor_rates",
    "mutual_info_ab",
    "optimize_mu",
    "predicted_visibilities",
    "raw_rate",
    "secret_rate",
]


class QberUndefinedError(ArithmeticError):
    """Raised when the data-line QBER is requested but no clicks occur."""


@dataclass(frozen=True)
class KeyRateReport:
    """All quantities entering the secret-key-rate bound.

    ``secret_rate = i_ab - i_be`` may be negative; it is reported as-is and
    flagged through :attr:`secure`.  ``v_d`` and ``v_10`` are the predicted
    effective visibilities (intrinsic visibility times the coherence
    fraction Eve leaves intact).
    """

    r_b: float
    q: float
    q_prime: float
    r_b_prime: float
    i_ab: float
    i_be: float
    secret_rate: float
    v_d: float
    v_10: float

    @property
    def secure(self) -> bool:
        return self.secret_rate > 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["secure"] = self.secure
        return d


@dataclass(frozen=True)
class MonitorRates:
    """Per-frame detection rates on the monitoring line.

    ``r_x_m1``/``r_x_m2`` are the per-checked-slot click probabilities of
    the bright and null interferometer ports; ``r_d_*`` restrict them to
    decoy mid-frame slots (weight ``f`` per sent frame) and ``r_10_*`` to
    "1,0" bit-boundary slots (weight ``(1-f)/4`` per non-decoy frame).
    """

    r_x_m1_d: float
    r_x_m2_d: float
    r_x_m1_10: float
    r_x_m2_10: float
    r_d_1: float
    r_d_2: float
    r_10_1: float
    r_10_2: float

    def to_dict(self) -> dict:
        return asdict(self)


def binary_entropy(q: float) -> float:
    """Binary entropy ``H(q) = -q log2 q - (1-q) log2 (1-q)`` in bits.

    ``H(0) = H(1) = 0`` by continuity.
    """
    if not 0.0 <= q <= 1.0:
        raise ParameterError(f"binary_entropy argument must be in [0, 1], got {q}")
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def raw_rate(params: SystemParams) -> float:
    """Data-line detection rate per sent frame, decoys removed.

    ``R_B = [mu*T + (1 - mu*T) * p_d] * (1 - f)`` with ``T = t * t_b * eta``.
    Warns when the parameters are outside the small-signal validity domain.
    """
    if not params.small_signal_ok():
        warnings.warn(
            f"mu*t = {params.mu * params.t:.4g} exceeds the small-signal domain; "
            "linearised rates may deviate from the exact click statistics",
            SmallSignalWarning,
            stacklevel=2,
        )
    mu_t_data = params.mu * params.t_data
    return (mu_t_data + (1.0 - mu_t_data) * params.p_d) * (1.0 - params.f)


def data_qber(params: SystemParams) -> float:
    """Data-line QBER, driven solely by dark counts.

    ``Q = (1/2) * (1 - mu*T) * p_d * (1 - f) / R_B``.
    """
    r_b = raw_rate(params)
    if r_b <= 0.0:
        raise QberUndefinedError("R_B = 0: QBER undefined without any detections")
    mu_t_data = params.mu * params.t_data
    return 0.5 * (1.0 - mu_t_data) * params.p_d * (1.0 - params.f) / r_b


def mutual_info_ab(params: SystemParams) -> float:
    """Mutual information between the honest parties in bits per sent frame,
    ``I(A:B) = R_B * [1 - H(Q)]``."""
    r_b = raw_rate(params)
    if r_b == 0.0:
        return 0.0
    return r_b * (1.0 - binary_entropy(data_qber(params)))


def _port_rate(mu_t_mon: float, v_eff: float, p_d: float, sign: float) -> float:
    x = mu_t_mon * (1.0 + sign * v_eff) / 2.0
    return x + (1.0 - x) * p_d


def monitor_rates(params: SystemParams, v_d: float, v_10: float) -> MonitorRates:
    """Monitoring-line rates for given effective visibilities.

    ``v_d`` and ``v_10`` are the effective visibilities of the decoy and
    bit-boundary coherence checks (intrinsic visibility times the fraction
    of items Eve left coherent, see :func:`predicted_visibilities`).  The
    per-checked-slot rates are::

        R_x = mu*Tm*(1 +/- V_x)/2 + (1 - mu*Tm*(1 +/- V_x)/2) * p_d

    with ``Tm = t * (1 - t_b) * eta``; decoy rates carry an extra factor
    ``f`` (per sent frame) and "1,0" rates ``(1 - f)/4`` (per non-decoy
    frame).
    """
    for name, v in (("v_d", v_d), ("v_10", v_10)):
        if not 0.0 <= v <= 1.0:
            raise ParameterError(f"{name} must be in [0, 1], got {v}")
    mu_t_mon = params.mu * params.t_mon
    r_x_m1_d = _port_rate(mu_t_mon, v_d, params.p_d, +1.0)
    r_x_m2_d = _port_rate(mu_t_mon, v_d, params.p_d, -1.0)
    r_x_m1_10 = _port_rate(mu_t_mon, v_10, params.p_d, +1.0)
    r_x_m2_10 = _port_rate(mu_t_mon, v_10, params.p_d, -1.0)
    w10 = (1.0 - params.f) / 4.0
    return MonitorRates(
        r_x_m1_d=r_x_m1_d,
        r_x_m2_d=r_x_m2_d,
        r_x_m1_10=r_x_m1_10,
        r_x_m2_10=r_x_m2_10,
        r_d_1=r_x_m1_d * params.f,
        r_d_2=r_x_m2_d * params.f,
        r_10_1=r_x_m1_10 * w10,
        r_10_2=r_x_m2_10 * w10,
    )


def eve_q_prime(params: SystemParams) -> float:
    """Eve's conditional error rate on detected-and-resent items,

    ``Q' = (1/2) * (1 - t_b*eta) * p_d / (t_b*eta + (1 - t_b*eta) * p_d)``.
    """
    t_be = params.t_b * params.eta
    return 0.5 * (1.0 - t_be) * params.p_d / (t_be + (1.0 - t_be) * params.p_d)


def predicted_visibilities(
    params: SystemParams, strategy: EveStrategy
) -> tuple[float, float]:
    """Effective visibilities a monitoring measurement should find.

    The intercept-resend attack destroys the coherence checked by both
    statistics, the two-pulse coherent attack only the coherence inside
    decoy frames, so::

        V_d  = V * (1 - p_ir - p_2c)
        V_10 = V * (1 - p_ir)

    Misalignment of the hardware (intrinsic visibility < 1) multiplies both
    since the security accounting conservatively attributes it to Eve.
    """
    v = params.visibility
    return (
        v * (1.0 - strategy.p_ir - strategy.p_2c),
        v * (1.0 - strategy.p_ir),
    )


def eve_information(params: SystemParams, strategy: EveStrategy) -> float:
    """Mutual information between Eve and the receiver, in bits per frame.

    ``I(B:E) = mu*(1-t) * R_B * [1 - H(Q)]
             + (p_ir + p_2c) * R_B' * [1 - H(Q')]``

    with ``R_B' = R_B - (1 - mu*t) * p_d * (1 - f)``.  The first term is the
    lossless-line beam-splitting contribution and is dropped when
    ``strategy.beam_split`` is false (diagnostic mode).
    """
    strategy.validate_against(params)
    split_fraction = params.mu * (1.0 - params.t)
    if split_fraction > 1.0:
        raise StrategyInfeasibleError(
            f"mu*(1 - t) = {split_fraction:.6g} exceeds 1: the beam-splitting "
            "fraction saturates and the linearised accounting breaks down"
        )
    r_b = raw_rate(params)
    i_ab = mutual_info_ab(params)
    info = split_fraction * i_ab if strategy.beam_split else 0.0
    if strategy.attack_mass > 0.0:
        r_b_prime = r_b - (1.0 - params.mu * params.t) * params.p_d * (1.0 - params.f)
        info += strategy.attack_mass * r_b_prime * (
            1.0 - binary_entropy(eve_q_prime(params))
        )
    return info


def secret_rate(params: SystemParams, strategy: EveStrategy) -> KeyRateReport:
    """Full key-rate report, ``R = I(A:B) - I(B:E)``."""
    r_b = raw_rate(params)
    q = data_qber(params) if r_b > 0.0 else 0.0
    q_prime = eve_q_prime(params)
    r_b_prime = r_b - (1.0 - params.mu * params.t) * params.p_d * (1.0 - params.f)
    i_ab = mutual_info_ab(params)
    i_be = eve_information(params, strategy)
    v_d, v_10 = predicted_visibilities(params, strategy)
    return KeyRateReport(
        r_b=r_b,
        q=q,
        q_prime=q_prime,
        r_b_prime=r_b_prime,
        i_ab=i_ab,
        i_be=i_be,
        secret_rate=i_ab - i_be,
        v_d=v_d,
        v_10=v_10,
    )


def _zero_error_rate(mu: float, t: float, t_b: float, eta: float, f: float) -> float:
    # Secret rate with Q = 0 and dark counts neglected.
    return mu * t * t_b * eta * (1.0 - f) * (1.0 - mu * (1.0 - t))


def _golden_section_max(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Locate the maximum of a unimodal function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def optimize_mu(params: SystemParams) -> tuple[float, float]:
    """Optimal pulse intensity in the zero-error regime and its rate.

    Maximises ``R(mu) = mu * t * t_b * eta * (1-f) * (1 - mu*(1-t))`` (the
    secret rate with Q = 0 and dark counts neglected; ``params.mu`` is
    ignored).  Returns the closed forms::

        mu_opt = 1 / (2*(1 - t))
        R_opt  = t * t_b * eta * (1 - f) / (4*(1 - t))

    and cross-checks them against an internal golden-section maximiser on
    ``mu in (0, 10/(1-t)]``; disagreement beyond 1e-9 relative raises.
    """
    t = params.t
    if t >= 1.0:
        raise ParameterError(
            f"optimize_mu requires t < 1 (got t = {t}); the zero-error rate "
            "is unbounded on a lossless channel"
        )
    mu_opt = 1.0 / (2.0 * (1.0 - t))
    r_opt = t * params.t_b * params.eta * (1.0 - params.f) / (4.0 * (1.0 - t))

    hi = 10.0 / (1.0 - t)
    mu_num, r_num = _golden_section_max(
        lambda m: _zero_error_rate(m, t, params.t_b, params.eta, params.f),
        1e-12,
        hi,
        tol=1e-10 * hi,
    )
    if abs(r_num - r_opt) > 1e-9 * r_opt or abs(mu_num - mu_opt) > 1e-6 * max(
        1.0, mu_opt
    ):
        raise AssertionError(
            f"numeric maximiser (mu={mu_num}, R={r_num}) disagrees with the "
            f"closed form (mu={mu_opt}, R={r_opt})"
        )
    return mu_opt, r_opt


def bb84_reference(t: float, eta: float) -> tuple[float, float]:
    """Reference point for the standard four-state protocol under
    photon-number-splitting: ``mu = t`` and ``R = eta * t**2 / 4``."""
    if not 0.0 < t <= 1.0:
        raise ParameterError(f"t must be in (0, 1], got {t}")
    if not 0.0 < eta <= 1.0:
        raise ParameterError(f"eta must be in (0, 1], got {eta}")
    return t, 0.25 * eta * t * t
