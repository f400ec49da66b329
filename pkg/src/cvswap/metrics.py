"""Coincidence rates, the Clauser-Horne ratio, and its closed-form limits.

The CH ratio of a beam pair is

    S = [R(ta, tb) - R(ta, tb') + R(ta', tb) + R(ta', tb')]
        / [R(ta', -) + R(-, tb)]

where R(ta, tb) is the photon coincidence rate between analyzer angle ta on
the first beam and tb on the second, and the denominator rates count both
polarizations on one side.  Local hidden-variable models require S <= 1; the
cross-polarized pair source reaches (1 + sqrt 2)/2 ~= 1.207 at analyzer
angles (pi/8, -pi/4, 3pi/8, 0).

Analyzer handedness: the two arms are measured with opposite angle sign,
E1(t) = cos(t) h + sin(t) v and E2(t) = cos(t) h - sin(t) v, which makes the
pair-source coincidence amplitude proportional to sin(ta - tb) and the angle
set above maximizing.  Measuring both arms with the same handedness flips the
amplitude to sin(ta + tb) and the same angle set would not maximize S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .circuit import PolarizedBeam, SwapCircuitOutput
from .modes import LinearField, vacuum_expectation

__all__ = [
    "NoCoincidencesError",
    "AnalyzerAngles",
    "CHResult",
    "AnalyticInputs",
    "OPTIMAL_ANGLES",
    "angle_family",
    "analyzer",
    "coincidence_rate",
    "singles_rate",
    "ch_s",
    "analytic_rate_teleported",
    "analytic_singles_teleported",
    "analytic_s_ad",
    "optimal_gain",
    "eta_threshold",
    "squeezing_to_chi",
    "gain_window",
    "maximize_s",
]

_IMAG_TOL = 1e-12
_RATE_FLOOR = -1e-12
_DENOMINATOR_FLOOR = 1e-30


class NoCoincidencesError(Exception):
    """The CH denominator underflowed: there is no coincidence signal."""


@dataclass(frozen=True)
class AnalyzerAngles:
    """The four analyzer settings (radians, interpreted modulo pi)."""

    theta_a: float
    theta_b: float
    theta_a_prime: float
    theta_b_prime: float


#: Angle set maximizing S for the cross-polarized pair source.
OPTIMAL_ANGLES = AnalyzerAngles(math.pi / 8, -math.pi / 4, 3 * math.pi / 8, 0.0)


def angle_family(theta: float) -> AnalyzerAngles:
    """One-parameter analyzer family theta_a = -theta_b/2 = theta_a'/3, theta_b' = 0.

    Scanning theta over [0, pi/2] traces the S-maximizing constraint surface;
    the pair source attains its maximum on this family at theta = pi/8.
    """
    return AnalyzerAngles(theta, -2.0 * theta, 3.0 * theta, 0.0)


@dataclass(frozen=True)
class CHResult:
    """Four coincidence rates, two singles rates, and the CH ratio."""

    r_ab: float
    r_ab_prime: float
    r_a_prime_b: float
    r_a_prime_b_prime: float
    r_singles_a: float
    r_singles_b: float
    s: float


def analyzer(beam: PolarizedBeam, theta: float, side: str) -> LinearField:
    """Field transmitted by a polarization analyzer at angle theta.

    side "a" (first arm):  cos(theta) h + sin(theta) v
    side "d" (second arm): cos(theta) h - sin(theta) v
    """
    if side == "a":
        return math.cos(theta) * beam.h + math.sin(theta) * beam.v
    if side == "d":
        return math.cos(theta) * beam.h - math.sin(theta) * beam.v
    raise ValueError(f"side must be 'a' or 'd', got {side!r}")


def coincidence_rate(e1: LinearField, e2: LinearField) -> float:
    """Photon coincidence rate <e2+ e1+ e1 e2> between two analyzer fields."""
    value = vacuum_expectation([e2.adjoint(), e1.adjoint(), e1, e2])
    if abs(value.imag) > _IMAG_TOL:
        raise ValueError(f"coincidence rate has imaginary part {value.imag:g}")
    return value.real


def singles_rate(e_other: LinearField, beam: PolarizedBeam) -> float:
    """Coincidence rate with polarization-insensitive detection of one beam."""
    return coincidence_rate(e_other, beam.h) + coincidence_rate(e_other, beam.v)


def _as_beam_pair(
    beams: SwapCircuitOutput | tuple[PolarizedBeam, PolarizedBeam],
) -> tuple[PolarizedBeam, PolarizedBeam]:
    if isinstance(beams, SwapCircuitOutput):
        return beams.beam_a, beams.beam_d_prime
    first, second = beams
    return first, second


def ch_s(beams: SwapCircuitOutput | tuple[PolarizedBeam, PolarizedBeam],
         angles: AnalyzerAngles) -> CHResult:
    """Evaluate all six rates and the CH ratio for a beam pair.

    Raises NoCoincidencesError when the singles denominator underflows
    (for example with the pump off).
    """
    beam_1, beam_2 = _as_beam_pair(beams)
    e_a = analyzer(beam_1, angles.theta_a, "a")
    e_a_prime = analyzer(beam_1, angles.theta_a_prime, "a")
    e_b = analyzer(beam_2, angles.theta_b, "d")
    e_b_prime = analyzer(beam_2, angles.theta_b_prime, "d")

    rates = {
        "r_ab": coincidence_rate(e_a, e_b),
        "r_ab_prime": coincidence_rate(e_a, e_b_prime),
        "r_a_prime_b": coincidence_rate(e_a_prime, e_b),
        "r_a_prime_b_prime": coincidence_rate(e_a_prime, e_b_prime),
        "r_singles_a": singles_rate(e_a_prime, beam_2),
        "r_singles_b": singles_rate(e_b, beam_1),
    }
    for name, value in rates.items():
        if value < _RATE_FLOOR:
            raise ValueError(f"{name} is negative beyond tolerance: {value:g}")

    denominator = rates["r_singles_a"] + rates["r_singles_b"]
    if denominator <= _DENOMINATOR_FLOOR:
        raise NoCoincidencesError(
            f"singles denominator {denominator:g} underflows; no signal")
    numerator = (rates["r_ab"] - rates["r_ab_prime"]
                 + rates["r_a_prime_b"] + rates["r_a_prime_b_prime"])
    return CHResult(s=numerator / denominator, **rates)


@dataclass(frozen=True)
class AnalyticInputs:
    """Inputs to the closed-form teleported-rate and teleported-S expressions."""

    s_ab: float
    chi2: float
    gain: float
    eta: float

    @property
    def n(self) -> float:
        """Amplitude of the teleporter's photon-creating term (recomputed)."""
        return math.sinh(self.chi2) - self.gain * math.sqrt(self.eta) * math.cosh(self.chi2)


def _noise_photons(inputs: AnalyticInputs) -> float:
    return inputs.n ** 2 + inputs.gain ** 2 * (1.0 - inputs.eta)


def analytic_rate_teleported(r_ab: float, inputs: AnalyticInputs,
                             rate_unit: float = 1.0) -> float:
    """Closed-form teleported coincidence rate.

    gain^2 eta r_ab + (n^2 + gain^2 (1-eta))/2 * rate_unit

    The offset is the accidental-coincidence floor per analyzer, expressed in
    normalized units where the pair source's singles denominator is 1.
    rate_unit rescales it to the caller's units: engine rates at pump chi1
    correspond to rate_unit = 2*chi1**2.
    """
    return inputs.gain ** 2 * inputs.eta * r_ab + 0.5 * _noise_photons(inputs) * rate_unit


def analytic_singles_teleported(r_singles: float, inputs: AnalyticInputs,
                                rate_unit: float = 1.0) -> float:
    """Closed-form teleported singles rate (offset doubled: both polarizations)."""
    return inputs.gain ** 2 * inputs.eta * r_singles + _noise_photons(inputs) * rate_unit


def analytic_s_ad(inputs: AnalyticInputs) -> float:
    """Closed-form CH ratio of the teleported pair in the weak-pump limit.

    (n^2/gain^2 + eta s_ab + 1 - eta) / (2 n^2/gain^2 + 2 - eta)
    """
    if inputs.gain == 0:
        raise ValueError("gain must be positive: zero gain transmits no signal")
    x = (inputs.n / inputs.gain) ** 2
    return (x + inputs.eta * inputs.s_ab + 1.0 - inputs.eta) / (2.0 * x + 2.0 - inputs.eta)


def optimal_gain(chi2: float, eta: float) -> float:
    """Feedforward gain cancelling the photon-creating term: tanh(chi2)/sqrt(eta)."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    return math.tanh(chi2) / math.sqrt(eta)


def eta_threshold(s_ab: float) -> float:
    """Detection efficiency below which no violation survives: 1/s_ab."""
    if s_ab <= 0:
        raise ValueError(f"s_ab must be positive, got {s_ab}")
    return 1.0 / s_ab


def squeezing_to_chi(squeezing: float) -> float:
    """Conversion efficiency for a squeezed-variance reduction s = 1 - exp(-2 chi)."""
    if not 0.0 <= squeezing < 1.0:
        raise ValueError(f"squeezing must lie in [0, 1), got {squeezing}")
    return -0.5 * math.log(1.0 - squeezing)


def gain_window(chi2: float, eta: float, s_ab: float) -> tuple[float, float] | None:
    """Gain interval where the teleporter's added-noise photon number stays
    below the violation headroom:

        (sinh chi2 - gain sqrt(eta) cosh chi2)^2 < eta s_ab - 1.

    Returns (low, high) clipped at gain 0, or None when no gain qualifies
    (eta at or below the 1/s_ab threshold).  The window degenerates to the
    single point tanh(chi2)/sqrt(eta) as eta approaches the threshold.  Note
    the noise photons are compared against the headroom per unit signal; the
    sweep-level S > 1 region additionally weights them by 1/gain^2.
    """
    if s_ab <= 1.0:
        return None
    headroom = eta * s_ab - 1.0
    if headroom <= 0.0:
        return None
    half = math.sqrt(headroom)
    scale = math.sqrt(eta) * math.cosh(chi2)
    low = max(0.0, (math.sinh(chi2) - half) / scale)
    high = (math.sinh(chi2) + half) / scale
    if high <= low:
        return None
    return low, high


def maximize_s(beams: SwapCircuitOutput | tuple[PolarizedBeam, PolarizedBeam],
               family: Callable[[float], AnalyzerAngles] = angle_family,
               steps: int = 721) -> tuple[float, float]:
    """Grid-scan the one-parameter analyzer family and return (theta*, S*).

    Scans theta over [0, pi/2] on a uniform inclusive grid; ties are broken
    by the smallest theta.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    best_theta = 0.0
    best_s = -math.inf
    span = math.pi / 2
    for k in range(steps):
        theta = span * k / (steps - 1)
        s = ch_s(beams, family(theta)).s
        if s > best_s:
            best_theta, best_s = theta, s
    return best_theta, best_s
