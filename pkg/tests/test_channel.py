import math

import numpy as np
import pytest

from oracle_dense import dense_global_z, dense_pauli, oracle_ptm
from pauliconj.channel import (
    StructureError,
    avg_fidelity,
    channel_fidelity,
    check_density_matrix,
    dephasing_ptm,
    effective_logical_channel,
    logical_basis_states,
    noise_diag,
    rotation_ptm,
    syndrome_decomposition,
    twirled_channel,
    z_component_amplitude,
    z_rotation_diag,
    ToleranceError,
)
from pauliconj.codes import registry, registry_names
from pauliconj.pauli import PauliOp
from pauliconj.tailoring import default_twirl_set

ALL_CODES = registry_names()


def P(code, s):
    return PauliOp.from_string(s, code.n)


class TestZRotation:
    def test_theta_zero_is_identity(self):
        assert np.allclose(z_rotation_diag(5, 0.0), np.ones(32))

    def test_matches_dense(self):
        d = z_rotation_diag(3, 0.37)
        assert np.allclose(np.diag(d), dense_global_z(3, 0.37))

    def test_component_amplitude(self):
        # amplitude of Z on qubits (1,2) at theta=0.3 on 7 qubits
        theta, n = 0.3, 7
        diag = z_rotation_diag(n, theta)
        zz = dense_pauli("ZZIIIII")
        amp = np.trace(zz @ np.diag(diag)) / 2**n
        assert amp == pytest.approx(z_component_amplitude(theta, 2, n), abs=1e-14)

    @pytest.mark.parametrize("name", ALL_CODES)
    def test_half_pi_acts_as_logical_z(self, name):
        code = registry(name)
        ptm = effective_logical_channel(code, math.pi / 2)
        assert np.allclose(ptm, np.diag([1, -1, -1, 1]), atol=1e-12)

    def test_conjugation_flips_signs(self):
        d = z_rotation_diag(2, 0.4, flip_x_mask=0b01)
        left = np.diag(dense_pauli("XI") @ dense_global_z(2, 0.4) @ dense_pauli("XI"))
        assert np.allclose(d, left)


class TestEffectiveChannel:
    @pytest.mark.parametrize("name", ALL_CODES)
    def test_identity_limit(self, name):
        ptm = effective_logical_channel(registry(name), 0.0)
        assert np.allclose(ptm, np.eye(4), atol=1e-12)

    @pytest.mark.parametrize("name,theta", [("steane", 0.2), ("steane", 0.7), ("five_qubit", 0.2)])
    def test_matches_dense_oracle(self, name, theta):
        code = registry(name)
        assert np.allclose(
            effective_logical_channel(code, theta), oracle_ptm(code, theta), atol=1e-12
        )

    def test_matches_dense_oracle_with_conjugation(self):
        steane = registry("steane")
        w = P(steane, "X1")
        assert np.allclose(
            effective_logical_channel(steane, 0.3, w), oracle_ptm(steane, 0.3, w), atol=1e-12
        )

    def test_stabilizer_conjugation_trivial(self):
        steane = registry("steane")
        base = effective_logical_channel(steane, 0.3, None)
        s = steane.stabilizer_gens[0]
        assert np.allclose(effective_logical_channel(steane, 0.3, s), base, atol=1e-12)

    def test_conjugation_beats_identity_on_steane(self):
        steane = registry("steane")
        f0 = channel_fidelity(steane, 0.3, None)
        f1 = channel_fidelity(steane, 0.3, P(steane, "X1"))
        assert f1 > f0

    def test_logical_conjugation_keeps_fidelity(self):
        steane = registry("steane")
        f0 = channel_fidelity(steane, 0.3, None)
        fx = channel_fidelity(steane, 0.3, steane.logical_x)
        assert fx == pytest.approx(f0, abs=1e-12)

    @pytest.mark.parametrize("name", ALL_CODES)
    def test_point_symmetry_of_fidelity_curve(self, name):
        code = registry(name)
        for theta in np.linspace(0.03, 0.7, 9):
            left = channel_fidelity(code, math.pi / 2 - theta)
            right = 4.0 / 3.0 - channel_fidelity(code, theta)
            assert left == pytest.approx(right, abs=1e-9)


class TestFidelity:
    def test_identity(self):
        assert avg_fidelity(np.eye(4)) == pytest.approx(1.0)

    def test_quarter_rotation(self):
        assert avg_fidelity(rotation_ptm(math.pi / 2)) == pytest.approx(2.0 / 3.0)

    def test_dephasing(self):
        assert avg_fidelity(dephasing_ptm(0.1)) == pytest.approx(1 - 2 / 3 * 0.1)


class TestSyndromeDecomposition:
    def test_theta_zero(self):
        d = syndrome_decomposition(registry("steane"), 0.0)
        assert len(d.branches) == 1
        assert d.branches[0].probability == pytest.approx(1.0)
        assert d.branches[0].angle == pytest.approx(0.0)

    def test_quarter_pi_rotation_structure(self):
        # every branch is a quarter rotation; the reachable syndromes are
        # equiprobable (for the Steane code the nonzero-syndrome amplitudes
        # interfere away entirely at this angle, verified densely)
        d = syndrome_decomposition(registry("steane"), math.pi / 4)
        assert len(d.branches) == 1 and d.branches[0].syndrome == 0
        assert d.branches[0].probability == pytest.approx(1.0, abs=1e-12)
        assert abs(d.branches[0].angle) == pytest.approx(math.pi / 2, abs=1e-9)
        for name, count in (("five_qubit", 16), ("shor_z", 4), ("surface3", 16)):
            d = syndrome_decomposition(registry(name), math.pi / 4)
            assert len(d.branches) == count
            assert np.allclose(d.probabilities(), 1.0 / count, atol=1e-9)
            assert np.allclose(np.abs(d.angles()), math.pi / 2, atol=1e-9)

    @pytest.mark.parametrize("name", ALL_CODES)
    def test_reconstruction(self, name):
        code = registry(name)
        d = syndrome_decomposition(code, 0.2)
        assert np.allclose(d.ptm(), effective_logical_channel(code, 0.2), atol=1e-10)

    def test_sign_flips_with_theta(self):
        code = registry("steane")
        d_pos = syndrome_decomposition(code, 0.2)
        d_neg = syndrome_decomposition(code, -0.2)
        ang_pos = {b.syndrome: b.angle for b in d_pos.branches}
        ang_neg = {b.syndrome: b.angle for b in d_neg.branches}
        for s, a in ang_pos.items():
            assert ang_neg[s] == pytest.approx(-a, abs=1e-12)

    def test_probabilities_sum_to_one(self):
        d = syndrome_decomposition(registry("surface3"), 0.37)
        assert d.probabilities().sum() == pytest.approx(1.0, abs=1e-10)

    def test_structure_error_without_z_preferred_recovery(self):
        # with plain minimum-weight recoveries the five-qubit branches are
        # not rotations; the shipped decoder avoids this, so force the issue
        from pauliconj import channel as ch
        from pauliconj.codes import coset_table

        five = registry("five_qubit")
        sim = ch._CodeSim.__new__(ch._CodeSim)
        sim.__init__(five)
        reps = coset_table(five)
        import numpy as _np

        rows0 = _np.stack([ch.apply_pauli(reps[s], sim.zero).conj() for s in sim.syndromes])
        rows1 = _np.stack([ch.apply_pauli(reps[s], sim.one).conj() for s in sim.syndromes])
        sim.bra0, sim.bra1 = rows0, rows1
        kraus = sim.branch_kraus(noise_diag(five, 0.3))
        off = max(abs(k[0, 1]) + abs(k[1, 0]) for k in kraus)
        assert off > 1e-3  # the X-type recoveries produce logical flips


class TestTwirledChannel:
    def test_singleton_set_equals_plain(self):
        steane = registry("steane")
        got = twirled_channel(steane, 0.3, [PauliOp.identity(7)])
        assert np.allclose(got, effective_logical_channel(steane, 0.3), atol=1e-14)

    def test_steane_full_twirl_is_diagonal(self):
        from pauliconj.tailoring import full_twirl_channel

        steane = registry("steane")
        twirl = default_twirl_set(steane)
        assert len(twirl.members) == 8
        ptm = full_twirl_channel(steane, 0.3, twirl)
        off = ptm - np.diag(np.diag(ptm))
        assert np.max(np.abs(off)) < 1e-12

    def test_member_average_has_same_diagonal_and_fidelity(self):
        # gate-set average and raw-span average differ only by residual
        # logical coherence; diagonals and fidelity agree exactly
        from pauliconj.tailoring import full_twirl_channel

        steane = registry("steane")
        twirl = default_twirl_set(steane)
        via_members = twirled_channel(steane, 0.3, list(twirl.members))
        via_span = full_twirl_channel(steane, 0.3, twirl)
        assert np.allclose(np.diag(via_members), np.diag(via_span), atol=1e-12)
        assert avg_fidelity(via_members) == pytest.approx(avg_fidelity(via_span), abs=1e-12)

    def test_mean_between_extremes(self):
        steane = registry("steane")
        members = list(default_twirl_set(steane).members)
        fs = [avg_fidelity(effective_logical_channel(steane, 0.3, w)) for w in members]
        f_t = avg_fidelity(twirled_channel(steane, 0.3, members))
        assert min(fs) <= f_t <= max(fs)


class TestGuards:
    def test_density_matrix_guard(self):
        rho = np.diag([0.6, 0.4]).astype(complex)
        check_density_matrix(rho)
        with pytest.raises(ToleranceError):
            check_density_matrix(np.diag([1.2, -0.2]).astype(complex))

    def test_logical_states_normalized(self):
        for name in ALL_CODES:
            states = logical_basis_states(registry(name))
            for v in states.values():
                assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


class TestSerialization:
    def test_ptm_json_round_trips_at_full_precision(self):
        import json

        ptm = effective_logical_channel(registry("steane"), 0.3)
        data = json.loads(__import__("pauliconj.channel", fromlist=["ptm_to_json"]).ptm_to_json(ptm))
        assert data["basis"] == ["I", "X", "Y", "Z"]
        back = np.array([[float(x) for x in row] for row in data["rows"]])
        assert np.array_equal(back, ptm)

    def test_decomposition_json(self):
        import json

        from pauliconj.channel import decomposition_to_json

        d = syndrome_decomposition(registry("steane"), 0.2)
        data = json.loads(decomposition_to_json(d))
        assert data["code"] == "steane"
        assert len(data["branches"]) == len(d.branches)
        total = sum(float(b["probability"]) for b in data["branches"])
        assert total == pytest.approx(1.0, abs=1e-10)
