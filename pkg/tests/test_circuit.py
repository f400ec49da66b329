"""Optical components and the assembled swap circuit."""

import math

import pytest

from cvswap import (
    FeedforwardGains,
    ModeRegistry,
    SwapParams,
    beamsplitter_5050,
    build_swap_circuit,
    commutator,
    feedforward_displace,
    halfwave_swap,
    homodyne_currents,
    opo_type2,
    pair_contraction,
    quadrature_plus,
    single_mode_teleporter,
    two_mode_squeezer,
    vacuum_expectation,
    vacuum_field,
)
from cvswap.circuit import MINUS_GAIN_PHASE


def fresh_pair():
    registry = ModeRegistry()
    return (vacuum_field(registry.new_mode("m1")),
            vacuum_field(registry.new_mode("m2")), registry)


def mean_photons(f):
    return vacuum_expectation([f.adjoint(), f]).real


class TestTwoModeSqueezer:
    def test_zero_chi_is_identity(self):
        a, b, _ = fresh_pair()
        out1, out2 = two_mode_squeezer(a, b, 0.0)
        assert out1 == a and out2 == b

    def test_output_photon_number(self):
        a, b, _ = fresh_pair()
        out1, _ = two_mode_squeezer(a, b, 0.34)
        assert mean_photons(out1) == pytest.approx(math.sinh(0.34) ** 2, rel=1e-12)

    @pytest.mark.parametrize("chi", [0.0, 0.1, 0.8, 2.3])
    def test_outputs_canonical(self, chi):
        a, b, _ = fresh_pair()
        out1, out2 = two_mode_squeezer(a, b, chi)
        assert commutator(out1, out1.adjoint()) == pytest.approx(1, abs=1e-12)
        assert commutator(out2, out2.adjoint()) == pytest.approx(1, abs=1e-12)
        assert commutator(out1, out2.adjoint()) == pytest.approx(0, abs=1e-12)

    def test_rejects_non_canonical_input(self):
        a, b, _ = fresh_pair()
        with pytest.raises(ValueError):
            two_mode_squeezer(2 * a, b, 0.3)
        with pytest.raises(ValueError):
            two_mode_squeezer(a, a, 0.3)


class TestOpoType2:
    def test_zero_chi_gives_bare_vacuum_modes(self):
        registry = ModeRegistry()
        beam_a, beam_b = opo_type2(registry, 0.0)
        for f in (beam_a.h, beam_a.v, beam_b.h, beam_b.v):
            assert not f.cre and len(f.ann) == 1

    def test_cross_polarized_pair_correlations(self):
        registry = ModeRegistry()
        beam_a, beam_b = opo_type2(registry, 0.3)
        expected = math.cosh(0.3) * math.sinh(0.3)
        assert pair_contraction(beam_a.h, beam_b.v) == pytest.approx(expected)
        assert pair_contraction(beam_a.v, beam_b.h) == pytest.approx(expected)
        assert pair_contraction(beam_a.h, beam_b.h) == 0
        assert pair_contraction(beam_a.v, beam_b.v) == 0

    def test_beam_invariants(self):
        registry = ModeRegistry()
        beam_a, beam_b = opo_type2(registry, 0.8)
        for beam in (beam_a, beam_b):
            assert commutator(beam.h, beam.h.adjoint()) == pytest.approx(1, abs=1e-12)
            assert commutator(beam.v, beam.v.adjoint()) == pytest.approx(1, abs=1e-12)
            assert commutator(beam.h, beam.v.adjoint()) == 0


class TestBeamsplitter:
    def test_conserves_photon_number(self):
        a, b, registry = fresh_pair()
        sq1, _ = two_mode_squeezer(a, b, 0.5)
        c = vacuum_field(registry.new_mode("m3"))
        out1, out2 = beamsplitter_5050(sq1, c)
        total_in = mean_photons(sq1) + mean_photons(c)
        total_out = mean_photons(out1) + mean_photons(out2)
        assert total_out == pytest.approx(total_in, rel=1e-12)

    def test_splits_against_vacuum(self):
        a, b, _ = fresh_pair()
        out1, out2 = beamsplitter_5050(a, b)
        assert commutator(out1, out1.adjoint()) == pytest.approx(1, abs=1e-12)
        assert commutator(out2, out2.adjoint()) == pytest.approx(1, abs=1e-12)
        assert commutator(out1, out2.adjoint()) == pytest.approx(0, abs=1e-12)

    def test_twice_with_sign_flip_recovers_inputs(self):
        a, b, _ = fresh_pair()
        out1, out2 = beamsplitter_5050(a, b)
        back1, back2 = beamsplitter_5050(out1, out2)
        for recovered, original in ((back1, a), (back2, b)):
            diff = recovered - original
            assert all(abs(c) < 1e-12 for c in diff.ann.values())
            assert not diff.cre


class TestHomodyneCurrents:
    def setup_method(self):
        self.registry = ModeRegistry()
        _, self.beam_b = opo_type2(self.registry, 0.3, label="src")
        self.beam_c, _ = opo_type2(self.registry, 0.5, label="tele")

    def test_lossless_form(self):
        """At eta = 1 the currents are the bare port quadratures, no loss mode."""
        before = len(self.registry)
        x_plus, x_minus = homodyne_currents(self.beam_b.h, self.beam_c.h, 1.0,
                                            self.registry)
        assert len(self.registry) == before + 2  # loss modes allocated but unused
        port_plus, port_minus = beamsplitter_5050(self.beam_b.h, self.beam_c.h)
        assert x_plus == quadrature_plus(port_plus)
        loss_modes = x_minus.modes() - (self.beam_b.h.modes() | self.beam_c.h.modes())
        assert not loss_modes

    @pytest.mark.parametrize("eta", [0.0, 0.5, 0.83, 0.9, 1.0])
    def test_currents_commute(self, eta):
        x_plus, x_minus = homodyne_currents(self.beam_b.h, self.beam_c.h, eta,
                                            self.registry)
        assert x_plus.is_hermitian() and x_minus.is_hermitian()
        assert commutator(x_plus, x_minus) == pytest.approx(0, abs=1e-12)

    def test_total_loss_leaves_unit_variance(self):
        x_plus, x_minus = homodyne_currents(self.beam_b.h, self.beam_c.h, 0.0,
                                            self.registry)
        assert vacuum_expectation([x_plus, x_plus]) == pytest.approx(1.0)
        assert vacuum_expectation([x_minus, x_minus]) == pytest.approx(1.0)

    def test_rejects_bad_eta(self):
        with pytest.raises(ValueError):
            homodyne_currents(self.beam_b.h, self.beam_c.h, 1.2, self.registry)
        with pytest.raises(ValueError):
            homodyne_currents(self.beam_b.h, self.beam_c.h, -0.1, self.registry)


class TestFeedforward:
    def test_gain_constraint(self):
        gains = FeedforwardGains.from_gain(0.7)
        assert gains.lambda_plus == -0.7
        assert gains.lambda_minus == MINUS_GAIN_PHASE * 0.7

    def test_zero_gain_is_identity(self):
        registry = ModeRegistry()
        _, beam_b = opo_type2(registry, 0.3, label="src")
        beam_c, beam_d = opo_type2(registry, 0.5, label="tele")
        x_plus, x_minus = homodyne_currents(beam_b.h, beam_c.h, 1.0, registry)
        out = feedforward_displace(beam_d.v, x_plus, x_minus,
                                   FeedforwardGains.from_gain(0.0))
        assert out == beam_d.v

    def test_rejects_non_hermitian_currents(self):
        registry = ModeRegistry()
        a = vacuum_field(registry.new_mode("a"))
        d = vacuum_field(registry.new_mode("d"))
        with pytest.raises(ValueError):
            feedforward_displace(d, a, quadrature_plus(a),
                                 FeedforwardGains.from_gain(0.5))

    def test_displaced_output_stays_canonical(self):
        registry = ModeRegistry()
        _, beam_b = opo_type2(registry, 0.3, label="src")
        beam_c, beam_d = opo_type2(registry, 0.5, label="tele")
        x_plus, x_minus = homodyne_currents(beam_b.h, beam_c.h, 0.8, registry)
        out = feedforward_displace(beam_d.v, x_plus, x_minus,
                                   FeedforwardGains.from_gain(0.7))
        assert commutator(out, out.adjoint()) == pytest.approx(1, abs=1e-12)


def test_halfwave_swap_twice_is_identity():
    registry = ModeRegistry()
    _, beam = opo_type2(registry, 0.4)
    swapped = halfwave_swap(beam.h, beam.v)
    assert swapped.h == beam.v and swapped.v == beam.h
    back = halfwave_swap(swapped.h, swapped.v)
    assert back.h == beam.h and back.v == beam.v


class TestBuildSwapCircuit:
    def test_allocates_twelve_vacuum_inputs(self):
        out = build_swap_circuit(SwapParams(0.1, 0.5, 0.7, 0.8))
        assert len(out.registry) == 12
        assert len(set(out.registry.names.values())) == 12

    def test_beam_a_never_touches_teleporter_modes(self):
        out = build_swap_circuit(SwapParams(0.1, 0.5, 0.7, 0.8))
        a_modes = out.beam_a.h.modes() | out.beam_a.v.modes()
        # A lives on the source squeezer's four inputs only
        assert len(a_modes) == 4
        assert all(out.registry.names[m].startswith("opo1") for m in a_modes)
        d_modes = out.beam_d_prime.h.modes() | out.beam_d_prime.v.modes()
        kinds = {out.registry.names[m].split(".")[0] for m in d_modes}
        assert kinds == {"opo1", "opo2", "homodyne_h", "homodyne_v"}

    def test_zero_gain_returns_swapped_second_squeezer_beam(self):
        out = build_swap_circuit(SwapParams(0.1, 0.5, 0.0, 1.0))
        registry = ModeRegistry()
        opo_type2(registry, 0.1, label="opo1")
        _, beam_d = opo_type2(registry, 0.5, label="opo2")
        assert out.beam_d_prime.h == beam_d.v
        assert out.beam_d_prime.v == beam_d.h

    def test_optimal_gain_cancels_photon_creation(self):
        for chi2 in (0.1, 0.34657, 0.8):
            out = build_swap_circuit(SwapParams(0.1, chi2, math.tanh(chi2), 1.0))
            names = out.registry.names
            for component in (out.beam_d_prime.h, out.beam_d_prime.v):
                spurious = [abs(c) for m, c in component.cre.items()
                            if "opo2" in names[m]]
                assert max(spurious, default=0.0) < 1e-12

    def test_eta1_component_coefficients(self):
        """Each teleported component: gain*B + N*C0+ + M*D0 up to a global sign."""
        chi2, gain = 0.5, 0.7
        out = build_swap_circuit(SwapParams(0.1, chi2, gain, 1.0))
        names = out.registry.names
        n = math.sinh(chi2) - gain * math.cosh(chi2)
        m_coef = math.cosh(chi2) - gain * math.sinh(chi2)
        component = out.beam_d_prime.h  # fed by the h-polarized source content
        cre_mags = sorted(round(abs(c), 9) for m, c in component.cre.items()
                          if "opo2" in names[m])
        ann_mags = sorted(round(abs(c), 9) for m, c in component.ann.items()
                          if "opo2" in names[m])
        assert cre_mags == [round(abs(n), 9)]
        assert ann_mags == [round(abs(m_coef), 9)]

    def test_strong_squeezing_unity_gain_reproduces_source_beam(self):
        """At 99%+ squeezing and unity gain, D' carries B with tiny residue."""
        chi2 = 2.65
        out = build_swap_circuit(SwapParams(0.1, chi2, 1.0, 1.0))
        registry = ModeRegistry()
        _, beam_b = opo_type2(registry, 0.1, label="opo1")
        residual = 0.0
        target = {m: c for m, c in beam_b.h.ann.items()}
        for m, c in out.beam_d_prime.h.ann.items():
            residual = max(residual, abs(abs(c) - abs(target.get(m, 0)))
                           if m in target else abs(c))
        for m, c in out.beam_d_prime.h.cre.items():
            expected = abs(beam_b.h.cre.get(m, 0))
            if m in beam_b.h.cre or abs(c) > 0:
                residual = max(residual, abs(abs(c) - expected))
        assert residual < 0.08  # bounded by exp(-chi2)

    @pytest.mark.parametrize("eta", [0.5, 0.83, 0.9, 1.0])
    @pytest.mark.parametrize("chi2", [0.0, 0.1, 0.34, 0.8, 2.3])
    def test_commutators_on_parameter_grid(self, chi2, eta):
        for gain in (0.0, 0.3, math.tanh(chi2), 1.0, 2.0):
            out = build_swap_circuit(SwapParams(0.1, chi2, gain, eta))
            for beam in (out.beam_a, out.beam_d_prime):
                assert commutator(beam.h, beam.h.adjoint()) == pytest.approx(1, abs=1e-12)
                assert commutator(beam.v, beam.v.adjoint()) == pytest.approx(1, abs=1e-12)
                assert commutator(beam.h, beam.v.adjoint()) == pytest.approx(0, abs=1e-12)

    def test_matches_two_parallel_single_mode_teleporters(self):
        """The 2-polarization circuit at eta=1 is two copies of the 1-mode map."""
        chi2, gain = 0.5, 0.7
        out = build_swap_circuit(SwapParams(0.1, chi2, gain, 1.0))
        registry = ModeRegistry()
        _, beam_b = opo_type2(registry, 0.1, label="opo1")
        for pol in ("h", "v"):
            circuit_field = getattr(out.beam_d_prime, pol)
            reference = single_mode_teleporter(getattr(beam_b, pol), chi2, gain,
                                               registry)
            circuit_mags = sorted(round(abs(c), 9)
                                  for c in list(circuit_field.ann.values())
                                  + list(circuit_field.cre.values()))
            reference_mags = sorted(round(abs(c), 9)
                                    for c in list(reference.ann.values())
                                    + list(reference.cre.values()))
            assert circuit_mags == reference_mags


class TestSingleModeTeleporter:
    def test_optimal_gain_is_pure_attenuation(self):
        registry = ModeRegistry()
        a_in = vacuum_field(registry.new_mode("in"))
        chi = 0.6
        out = single_mode_teleporter(a_in, chi, math.tanh(chi), registry)
        assert not out.cre
        mags = sorted(abs(c) for c in out.ann.values())
        lam = math.tanh(chi)
        assert mags == pytest.approx(sorted([lam, math.sqrt(1 - lam * lam)]), abs=1e-12)

    @pytest.mark.parametrize("chi", [0.0, 0.3, 1.0, 2.0])
    @pytest.mark.parametrize("gain", [0.0, 0.4, 1.0, 1.7])
    def test_output_canonical(self, chi, gain):
        registry = ModeRegistry()
        a_in = vacuum_field(registry.new_mode("in"))
        out = single_mode_teleporter(a_in, chi, gain, registry)
        assert commutator(out, out.adjoint()) == pytest.approx(1, abs=1e-12)

    def test_strong_squeezing_unity_gain_passes_input_through(self):
        registry = ModeRegistry()
        a_in = vacuum_field(registry.new_mode("in"))
        chi = 6.0
        out = single_mode_teleporter(a_in, chi, 1.0, registry)
        assert abs(out.ann[next(iter(a_in.ann))] - 1.0) < 1e-12
        residue = math.exp(-chi)
        extras = [abs(c) for m, c in out.ann.items() if m not in a_in.ann]
        extras += [abs(c) for c in out.cre.values()]
        assert max(extras) == pytest.approx(residue, rel=1e-9)


def test_source_construction_is_reproducible():
    """Independently built source beams are the coefficient-for-coefficient
    baseline that bypassing the teleporter would give."""
    registry_1, registry_2 = ModeRegistry(), ModeRegistry()
    first = opo_type2(registry_1, 0.1, label="opo1")
    second = opo_type2(registry_2, 0.1, label="opo1")
    for beam_1, beam_2 in zip(first, second):
        assert beam_1.h == beam_2.h and beam_1.v == beam_2.v


def test_swap_params_validation():
    with pytest.raises(ValueError):
        SwapParams(-0.1, 0.5, 0.7, 0.8)
    with pytest.raises(ValueError):
        SwapParams(0.1, 0.5, 0.7, 1.2)
    with pytest.raises(ValueError):
        SwapParams(0.1, 0.5, -0.7, 0.8)
    with pytest.raises(ValueError):
        SwapParams(0.1, math.inf, 0.7, 0.8)
