"""Physical and adversarial parameter types shared by all other modules.

Conventions used throughout the package:

- ``mu`` is the mean photon number of a non-empty pulse at the source.
- A logical frame occupies two adjacent time slots.  A "bit 0" frame puts
  the pulse in the first slot, "bit 1" in the second, and a decoy frame
  fills both slots.  Decoy frames occur with probability ``f`` and carry
  no bit value.
- The fibre transmits a fraction ``t = 10**(-alpha*d/10)`` of the light.
- At the receiver a beam-splitter sends a fraction ``t_b`` of the light to
  the data detector and ``1 - t_b`` to the monitoring interferometer; all
  three detectors share quantum efficiency ``eta`` and per-gate dark-count
  probability ``p_d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ParameterError",
    "StrategyInfeasibleError",
    "SmallSignalWarning",
    "channel_transmission",
    "SystemParams",
    "EveStrategy",
]


class ParameterError(ValueError):
    """Raised when a physical or protocol parameter is out of range."""


class StrategyInfeasibleError(ValueError):
    """Raised when an attack mix exceeds the probability mass Eve has available."""


class SmallSignalWarning(UserWarning):
    """Emitted when linearised rate formulas are evaluated outside mu*t << 1."""


def channel_transmission(alpha_db_per_km: float, distance_km: float) -> float:
    """Fibre transmission ``t = 10**(-alpha*d/10)``.

    Parameters
    ----------
    alpha_db_per_km : float
        Attenuation coefficient in dB/km, >= 0.
    distance_km : float
        Fibre length in km, >= 0.

    Returns
    -------
    float
        Transmission in (0, 1]; 1.0 exactly at zero distance.
    """
    if alpha_db_per_km < 0.0:
        raise ParameterError(f"alpha_db_per_km must be >= 0, got {alpha_db_per_km}")
    if distance_km < 0.0:
        raise ParameterError(f"distance_km must be >= 0, got {distance_km}")
    return 10.0 ** (-alpha_db_per_km * distance_km / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """All physical and protocol parameters of the honest parties.

    Attributes
    ----------
    mu : float
        Mean photon number per non-empty pulse, >= 0.
    f : float
        Probability that a frame is a decoy, in [0, 1).
    t_b : float
        Receiver beam-splitter transmission to the data line, in (0, 1].
    eta : float
        Detector quantum efficiency, in (0, 1].
    p_d : float
        Dark-count probability per detector gate, in [0, 1).
    visibility : float
        Intrinsic interferometer visibility, in [0, 1].
    alpha_db_per_km : float
        Fibre attenuation in dB/km, >= 0.
    distance_km : float
        Channel length in km, >= 0.
    tau_ns : float
        Pulse period in ns (metadata only), > 0.
    phi : float
        Global source phase; only 0.0 is supported.
    """

    mu: float = 0.5
    f: float = 0.1
    t_b: float = 0.9
    eta: float = 0.1
    p_d: float = 1e-5
    visibility: float = 1.0
    alpha_db_per_km: float = 0.2
    distance_km: float = 25.0
    tau_ns: float = 1.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        if self.mu < 0.0:
            raise ParameterError(f"mu must be >= 0, got {self.mu}")
        if not 0.0 <= self.f < 1.0:
            raise ParameterError(f"f must be in [0, 1), got {self.f}")
        if not 0.0 < self.t_b <= 1.0:
            raise ParameterError(f"t_b must be in (0, 1], got {self.t_b}")
        if not 0.0 < self.eta <= 1.0:
            raise ParameterError(f"eta must be in (0, 1], got {self.eta}")
        if not 0.0 <= self.p_d < 1.0:
            raise ParameterError(f"p_d must be in [0, 1), got {self.p_d}")
        if not 0.0 <= self.visibility <= 1.0:
            raise ParameterError(f"visibility must be in [0, 1], got {self.visibility}")
        if self.alpha_db_per_km < 0.0:
            raise ParameterError(f"alpha_db_per_km must be >= 0, got {self.alpha_db_per_km}")
        if self.distance_km < 0.0:
            raise ParameterError(f"distance_km must be >= 0, got {self.distance_km}")
        if not self.tau_ns > 0.0:
            raise ParameterError(f"tau_ns must be > 0, got {self.tau_ns}")
        if self.phi != 0.0:
            raise ParameterError("only phi = 0 is supported")

    @property
    def t(self) -> float:
        """Channel transmission, in (0, 1]."""
        return channel_transmission(self.alpha_db_per_km, self.distance_km)

    @property
    def t_data(self) -> float:
        """End-to-end data-line efficiency ``t * t_b * eta``."""
        return self.t * self.t_b * self.eta

    @property
    def t_mon(self) -> float:
        """End-to-end monitoring-line efficiency ``t * (1 - t_b) * eta``."""
        return self.t * (1.0 - self.t_b) * self.eta

    def small_signal_ok(self, threshold: float = 0.1) -> bool:
        """True when ``mu * t <= threshold``, the validity domain of the
        linearised rate formulas."""
        return self.mu * self.t <= threshold


@dataclass(frozen=True)
class EveStrategy:
    """Adversary configuration.

    ``beam_split`` grants Eve the channel losses (she collects the 1 - t
    fraction of every pulse on a lossless replacement line); disabling it is
    a diagnostic mode that drops the corresponding information term from the
    accounting.  ``p_ir`` and ``p_2c`` are the per-frame probabilities of
    the intercept-resend attack and of the coherent two-pulse
    photon-number-counting attack across the bit boundary.
    """

    beam_split: bool = True
    p_ir: float = 0.0
    p_2c: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_ir <= 1.0:
            raise ParameterError(f"p_ir must be in [0, 1], got {self.p_ir}")
        if not 0.0 <= self.p_2c <= 1.0:
            raise ParameterError(f"p_2c must be in [0, 1], got {self.p_2c}")
        if self.p_ir + self.p_2c > 1.0:
            raise ParameterError(
                f"p_ir + p_2c must be <= 1, got {self.p_ir + self.p_2c}"
            )

    @property
    def attack_mass(self) -> float:
        return self.p_ir + self.p_2c

    def attack_budget(self, params: SystemParams) -> float:
        """Probability mass available for error-introducing attacks,
        ``1 - mu*(1 - t)``."""
        return 1.0 - params.mu * (1.0 - params.t)

    def validate_against(self, params: SystemParams) -> None:
        """Reject strategies whose attack mass exceeds the available budget.

        Violations are errors, never clamped.
        """
        budget = self.attack_budget(params)
        if self.attack_mass > budget + 1e-12:
            raise StrategyInfeasibleError(
                "attack mix infeasible: p_ir + p_2c = "
                f"{self.attack_mass:.6g} exceeds 1 - mu*(1 - t) = {budget:.6g}"
            )
