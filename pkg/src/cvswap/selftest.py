"""Deterministic invariant suite backing the CLI selftest command.

Each check returns None on success or a one-line failure detail.  The suite
covers the algebra/oracle equivalences and the physicality invariants of the
circuit; it is the first thing to run after any change to the feedforward
phase conventions or the component algebra.
"""

from __future__ import annotations

import math
import random
from typing import Callable, TextIO

from .circuit import (
    PolarizedBeam,
    SwapParams,
    build_swap_circuit,
    opo_type2,
    two_mode_squeezer,
)
from .metrics import OPTIMAL_ANGLES, analyzer, ch_s, coincidence_rate
from .modes import (
    LinearField,
    ModeRegistry,
    commutator,
    vacuum_expectation,
    vacuum_field,
    wick_matchings,
)
from .oracle import build_source_state, fock_coincidence_rate, normal_order_expectation

__all__ = ["run_selftest", "CHECKS"]

_TOL = 1e-12


def _beam_commutators(beam: PolarizedBeam) -> float:
    worst = abs(commutator(beam.h, beam.h.adjoint()) - 1)
    worst = max(worst, abs(commutator(beam.v, beam.v.adjoint()) - 1))
    worst = max(worst, abs(commutator(beam.h, beam.v.adjoint())))
    return worst


def check_canonical_commutators() -> str | None:
    """[F, F+] = 1 and cross-commutators 0 for every beam the circuit emits."""
    for chi in (0.0, 0.1, 0.34, 0.8, 2.3):
        reg = ModeRegistry()
        m1 = vacuum_field(reg.new_mode("m1"))
        m2 = vacuum_field(reg.new_mode("m2"))
        out1, out2 = two_mode_squeezer(m1, m2, chi)
        for f in (out1, out2):
            if abs(commutator(f, f.adjoint()) - 1) > _TOL:
                return f"squeezer output not canonical at chi={chi}"
    for chi2 in (0.0, 0.1, 0.34, 0.8, 2.3):
        for gain in (0.0, 0.3, math.tanh(chi2), 1.0, 2.0):
            for eta in (0.5, 0.83, 0.9, 1.0):
                out = build_swap_circuit(SwapParams(0.1, chi2, gain, eta))
                for beam in (out.beam_a, out.beam_d_prime):
                    worst = _beam_commutators(beam)
                    if worst > _TOL:
                        return (f"beam commutator off by {worst:.3e} at "
                                f"chi2={chi2}, gain={gain:.4f}, eta={eta}")
    return None


def check_homodyne_currents_commute() -> str | None:
    """The two photocurrent quadratures commute exactly for any efficiency."""
    from .circuit import homodyne_currents

    for eta in (0.0, 0.5, 0.83, 1.0):
        reg = ModeRegistry()
        _, b = opo_type2(reg, 0.3, label="src")
        c, _ = opo_type2(reg, 0.5, label="tele")
        x_plus, x_minus = homodyne_currents(b.h, c.h, eta, reg)
        value = abs(commutator(x_plus, x_minus))
        if value > _TOL:
            return f"[x+, x-] = {value:.3e} at eta={eta}"
    return None


def check_pairing_count() -> str | None:
    """The Wick enumerator visits exactly (2k-1)!! matchings."""
    double_factorial = 1
    for k in range(1, 5):
        double_factorial *= 2 * k - 1
        visited = sum(1 for _ in wick_matchings(2 * k))
        if visited != double_factorial:
            return f"{visited} matchings visited for 2k={2 * k}, expected {double_factorial}"
    return None


def check_dual_oracle_moments() -> str | None:
    """Wick pairing sum equals the normal-ordering rewriter on random products."""
    rng = random.Random(20260809)
    modes = list(range(6))
    worst = 0.0
    for _ in range(40):
        degree = rng.randint(2, 8)
        product = []
        for _ in range(degree):
            ann: dict[int, complex] = {}
            cre: dict[int, complex] = {}
            for _ in range(rng.randint(1, 3)):
                m = rng.choice(modes)
                c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                if rng.random() < 0.5:
                    ann[m] = ann.get(m, 0) + c
                else:
                    cre[m] = cre.get(m, 0) + c
            product.append(LinearField(ann, cre))
        deviation = abs(vacuum_expectation(product) - normal_order_expectation(product))
        worst = max(worst, deviation)
    if worst > _TOL:
        return f"max |Wick - rewriter| = {worst:.3e} exceeds {_TOL:g}"
    return None


def check_wick_vs_fock_rates() -> str | None:
    """Engine coincidence rates match the truncated number-basis simulator."""
    chi1 = 0.1
    reg = ModeRegistry()
    beam_a, beam_b = opo_type2(reg, chi1, label="src")
    state = build_source_state(chi1, 12, "exact_product")
    for theta_a, theta_b in ((math.pi / 8, -math.pi / 4), (0.0, 0.7),
                             (0.3, 0.0), (1.1, -1.3)):
        wick = coincidence_rate(analyzer(beam_a, theta_a, "a"),
                                analyzer(beam_b, theta_b, "d"))
        fock = fock_coincidence_rate(state, theta_a, theta_b)
        if wick > 0 and abs(wick - fock) / wick > 1e-6:
            return (f"relative deviation {abs(wick - fock) / wick:.3e} at "
                    f"angles ({theta_a:.4f}, {theta_b:.4f})")
    return None


def check_optimal_gain_attenuation() -> str | None:
    """At gain = tanh(chi2), eta = 1 the teleported beam is pure attenuation.

    Each output component must carry only the source-beam content (net
    amplitude tanh chi2) plus one fresh vacuum mode of weight sech chi2; the
    photon-creating coefficient must vanish.  A wrong feedforward quadrature
    phase feeds the measured beam in as creation operators and fails here
    even though all commutators stay canonical.
    """
    for chi2 in (0.1, 0.34657359, 0.8):
        gain = math.tanh(chi2)
        out = build_swap_circuit(SwapParams(0.1, chi2, gain, 1.0))
        reg = ModeRegistry()
        beam_a, beam_b = opo_type2(reg, 0.1, label="src")
        for pol, baseline in (("h", beam_b.h), ("v", beam_b.v)):
            component = getattr(out.beam_d_prime, pol)
            source_modes = baseline.modes()
            expected_fresh = 1.0 / math.cosh(chi2)
            fresh_weight = 0.0
            for m, c in component.ann.items():
                if m in source_modes:
                    target = gain * abs(baseline.ann.get(m, 0.0))
                    if abs(abs(c) - target) > _TOL:
                        return (f"{pol}: source amplitude {abs(c):.6f} != "
                                f"{target:.6f} at chi2={chi2}")
                else:
                    fresh_weight += abs(c) ** 2
            if abs(math.sqrt(fresh_weight) - expected_fresh) > 1e-9:
                return (f"{pol}: fresh-vacuum weight {math.sqrt(fresh_weight):.6f}"
                        f" != sech(chi2) = {expected_fresh:.6f} at chi2={chi2}")
            for m, c in component.cre.items():
                target = gain * abs(baseline.cre.get(m, 0.0))
                if abs(abs(c) - target) > _TOL:
                    return (f"{pol}: photon-creating coefficient {abs(c):.3e} "
                            f"survives at chi2={chi2}")
    return None


def check_teleporter_transparency() -> str | None:
    """S is unchanged by teleportation at the optimal gain (eta = 1)."""
    chi1 = 0.1
    reg = ModeRegistry()
    baseline = ch_s(opo_type2(reg, chi1, label="src"), OPTIMAL_ANGLES).s
    for chi2 in (0.05, 0.34657359, 0.8):
        out = build_swap_circuit(SwapParams(chi1, chi2, math.tanh(chi2), 1.0))
        teleported = ch_s(out, OPTIMAL_ANGLES).s
        if abs(teleported - baseline) > 1e-9:
            return (f"S changed by {teleported - baseline:.3e} "
                    f"at chi2={chi2}")
    return None


CHECKS: list[tuple[str, Callable[[], str | None]]] = [
    ("canonical-commutators", check_canonical_commutators),
    ("homodyne-currents-commute", check_homodyne_currents_commute),
    ("pairing-count", check_pairing_count),
    ("dual-oracle-moments", check_dual_oracle_moments),
    ("wick-vs-fock-rates", check_wick_vs_fock_rates),
    ("optimal-gain-attenuation", check_optimal_gain_attenuation),
    ("teleporter-transparency", check_teleporter_transparency),
]


def run_selftest(stream: TextIO) -> int:
    """Run every check, print one line per check, return 0 (pass) or 3."""
    failures = []
    for name, check in CHECKS:
        detail = check()
        if detail is None:
            stream.write(f"ok   {name}\n")
        else:
            failures.append((name, detail))
            stream.write(f"FAIL {name}: {detail}\n")
    if failures:
        stream.write(f"selftest: {len(failures)} of {len(CHECKS)} checks failed; "
                     f"first failure: {failures[0][0]}\n")
        return 3
    stream.write(f"selftest: all {len(CHECKS)} checks passed\n")
    return 0
