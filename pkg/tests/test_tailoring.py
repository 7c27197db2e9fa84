import numpy as np
import pytest

from pauliconj.channel import avg_fidelity, effective_logical_channel, twirled_channel
from pauliconj.codes import build_error_generators, registry, syndrome
from pauliconj.pauli import PauliOp, span_of, weight
from pauliconj.tailoring import (
    ConjugationPlan,
    ZNoiseSupport,
    build_twirl_set,
    default_classes,
    default_twirl_set,
    equivalence_classes,
    full_twirl_channel,
    multiround_reduce,
    plan_channel,
    reduce_generators,
    search_optimal,
    symmetry_group,
)


def names(ops):
    return [p.to_index_string() for p in ops]


class TestReduceGenerators:
    @pytest.mark.parametrize(
        "code_name,expected",
        [
            ("steane", ["X1", "X2", "X3"]),
            ("five_qubit", ["X1", "X2"]),
            ("shor_x", ["X1", "X7"]),
            ("shor_z", ["X1", "X3", "X4", "X6", "X7", "X9"]),
            ("surface3", ["X1", "X3", "X4", "X9"]),
        ],
    )
    def test_pure_z_noise(self, code_name, expected):
        code = registry(code_name)
        got = reduce_generators(code, ZNoiseSupport(code.n))
        assert names(got) == expected

    def test_pure_z_generators_dropped(self):
        code = registry("steane")
        got = reduce_generators(code, ZNoiseSupport(code.n))
        assert all(g.x_bits for g in got)


class TestTwirlSet:
    def test_steane(self):
        twirl = default_twirl_set(registry("steane"))
        assert names(twirl.members) == ["I", "X1", "X2", "X3", "X4", "X5", "X6", "X7"]

    def test_five_qubit(self):
        twirl = default_twirl_set(registry("five_qubit"))
        assert set(names(twirl.members)) == {"I", "X1", "X2", "Z4"}

    def test_shor_x(self):
        twirl = default_twirl_set(registry("shor_x"))
        assert set(names(twirl.members)) == {"I", "X1", "X4", "X7"}

    def test_surface3_weight_lists(self):
        twirl = default_twirl_set(registry("surface3"))
        by_weight = {}
        for m in twirl.members:
            by_weight.setdefault(weight(m), set()).add(m.to_index_string())
        assert by_weight[0] == {"I"}
        assert by_weight[1] == {"X1", "X2", "X3", "X5", "X7", "X8", "X9"}
        assert by_weight[2] == {"X2X7", "X1X7", "X1X8", "X1X9", "X2X9", "X3X9", "X3X8", "X2X8"}

    def test_shor_z_row_structure(self):
        # members carry at most one X per row of the 3x3 layout
        twirl = default_twirl_set(registry("shor_z"))
        assert len(twirl.members) == 64
        rows = [{1, 2, 3}, {4, 5, 6}, {7, 8, 9}]
        for m in twirl.members:
            support = set(m.support())
            assert all(len(support & row) <= 1 for row in rows)

    @pytest.mark.parametrize("name", ["steane", "five_qubit", "shor_z", "shor_x", "surface3"])
    def test_syndromes_distinct(self, name):
        code = registry(name)
        twirl = default_twirl_set(code)
        syndromes = [syndrome(code, m) for m in twirl.members]
        assert len(set(syndromes)) == len(twirl.members)
        assert len(twirl.members) == 1 << len(twirl.generators)

    def test_rejects_dependent_generators(self):
        code = registry("steane")
        g = reduce_generators(code, ZNoiseSupport(code.n))
        with pytest.raises(ValueError):
            build_twirl_set(code, g + [g[0]])


class TestEquivalenceClasses:
    def test_steane_two_classes(self):
        classes = default_classes(registry("steane"))
        assert [c.representative.to_index_string() for c in classes] == ["I", "X1"]
        assert [c.size for c in classes] == [1, 7]

    def test_five_qubit_merges_noise_trivial(self):
        classes = default_classes(registry("five_qubit"))
        got = {c.representative.to_index_string(): set(names(c.members)) for c in classes}
        assert got == {"I": {"I", "Z4"}, "X1": {"X1", "X2"}}

    def test_shor_z_four_classes(self):
        classes = default_classes(registry("shor_z"))
        reps = [c.representative.to_index_string() for c in classes]
        sizes = [c.size for c in classes]
        assert reps == ["I", "X1", "X1X4", "X1X4X7"]
        assert sizes == [1, 9, 27, 27]

    def test_surface3_classes(self):
        classes = default_classes(registry("surface3"))
        got = {c.representative.to_index_string(): set(names(c.members)) for c in classes}
        assert got == {
            "I": {"I"},
            "X1": {"X1", "X2", "X8", "X9"},
            "X3": {"X3", "X7"},
            "X5": {"X5"},
            "X1X7": {"X1X7", "X2X7", "X3X8", "X3X9"},
            "X1X8": {"X1X8", "X2X8", "X1X9", "X2X9"},
        }

    @pytest.mark.parametrize("name", ["steane", "five_qubit", "shor_z", "shor_x", "surface3"])
    def test_members_share_ptm(self, name):
        # direct check of the symmetry-equivalence relation at theta = 0.2
        code = registry(name)
        for cls in default_classes(code):
            ref = effective_logical_channel(code, 0.2, cls.representative)
            for m in cls.members:
                assert np.allclose(
                    effective_logical_channel(code, 0.2, m), ref, atol=1e-10
                ), f"{name}: {m.to_index_string()} differs from {cls.representative.to_index_string()}"

    def test_group_orders(self):
        assert len(symmetry_group(registry("five_qubit"))) == 5
        assert len(symmetry_group(registry("steane"))) == 168
        assert len(symmetry_group(registry("shor_z"))) == 1296
        assert len(symmetry_group(registry("surface3"))) == 8


class TestSearch:
    @pytest.mark.parametrize(
        "name,expected",
        [("steane", "X1"), ("shor_z", "X1X4X7"), ("surface3", "X1X8"), ("shor_x", "X1")],
    )
    def test_w_max(self, name, expected):
        code = registry(name)
        report = search_optimal(code, 0.3, default_classes(code))
        assert report.w_max == expected
        assert report.fidelity_max >= report.fidelity_twirled >= report.fidelity_original - 1e-12

    def test_five_qubit_all_equal(self):
        code = registry("five_qubit")
        report = search_optimal(code, 0.3, default_classes(code))
        assert report.all_equal
        assert report.w_max == "I"
        assert report.fidelity_max == pytest.approx(report.fidelity_original, abs=1e-12)

    def test_twirl_fidelity_matches_member_enumeration(self):
        code = registry("steane")
        report = search_optimal(code, 0.3, default_classes(code))
        members = list(default_twirl_set(code).members)
        f_enum = avg_fidelity(twirled_channel(code, 0.3, members))
        assert report.fidelity_twirled == pytest.approx(f_enum, abs=1e-12)

    def test_class_weighted_equals_full_member_average(self):
        code = registry("surface3")
        classes = default_classes(code)
        members = list(default_twirl_set(code).members)
        weighted = np.zeros((4, 4))
        for cls in classes:
            weighted += cls.size * effective_logical_channel(code, 0.2, cls.representative)
        weighted /= len(members)
        assert np.allclose(weighted, twirled_channel(code, 0.2, members), atol=1e-12)


class TestFullTwirl:
    def test_matches_brute_force_all_generators(self):
        # removing noise-trivial, stabilizer and logical generators must not
        # change the twirled channel; brute force is feasible on 5 qubits
        code = registry("five_qubit")
        gens = (
            list(code.stabilizer_gens)
            + [code.logical_x, code.logical_z]
            + build_error_generators(code)
        )
        span = span_of(code.n, gens)
        assert len(span) == 4**5
        acc = np.zeros((4, 4))
        for w in span:
            acc += effective_logical_channel(code, 0.3, w)
        acc /= len(span)
        reduced = full_twirl_channel(code, 0.3, default_twirl_set(code))
        assert np.allclose(acc, reduced, atol=1e-12)

    def test_diagonal_output(self):
        code = registry("surface3")
        ptm = full_twirl_channel(code, 0.25, default_twirl_set(code))
        assert np.allclose(ptm, np.diag(np.diag(ptm)), atol=1e-14)


class TestMultiroundReduce:
    def test_k1_matches_class_representatives(self):
        code = registry("steane")
        plans = multiround_reduce(code, ZNoiseSupport(code.n), 1, sample_budget=100)
        reps = {c.representative for c in default_classes(code)}
        assert {p.gates[0] for p in plans} == reps

    def test_zero_budget(self):
        code = registry("steane")
        assert multiround_reduce(code, ZNoiseSupport(code.n), 2, sample_budget=0) == []

    def test_k2_dedup_is_sound(self):
        # merged plans must have identical channels: compare every canonical
        # class against a brute-force channel evaluation of all its plans
        code = registry("steane")
        noise = ZNoiseSupport(code.n)
        plans = multiround_reduce(code, noise, 2, sample_budget=10**6)
        outer = default_twirl_set(code).members
        from pauliconj.tailoring import _inner_round_set

        inner = _inner_round_set(code, noise)
        assert len(inner) == 128
        total = len(outer) * len(inner)
        assert len(plans) < total  # symmetry actually deduplicates
        # spot-check: every surviving plan's channel is distinct from at most
        # a few others; merged ones agree with their representative
        from itertools import product as iproduct

        from pauliconj.tailoring import _plan_canonical_key, _stab_x_span

        group = symmetry_group(code)
        xspan = _stab_x_span(code)
        rep_ptm = {}
        for plan in plans:
            key = _plan_canonical_key(code, plan.gates, group, xspan)
            rep_ptm[key] = plan_channel(code, 0.17, plan)
        checked = 0
        for combo in iproduct(outer, inner):
            key = _plan_canonical_key(code, combo, group, xspan)
            assert key in rep_ptm
            if checked < 160:
                ptm = plan_channel(code, 0.17, ConjugationPlan(gates=tuple(combo)))
                assert np.allclose(ptm, rep_ptm[key], atol=1e-10)
                checked += 1

    def test_sampling_is_seeded(self):
        code = registry("steane")
        noise = ZNoiseSupport(code.n)
        a = multiround_reduce(code, noise, 2, sample_budget=10, seed=3)
        b = multiround_reduce(code, noise, 2, sample_budget=10, seed=3)
        c = multiround_reduce(code, noise, 2, sample_budget=10, seed=4)
        assert a == b
        assert len(a) == 10
        assert a != c

    def test_plan_channel_identity_closure(self):
        # a plan of identity gates is just K noise slices then correction
        code = registry("steane")
        plan = ConjugationPlan(gates=(PauliOp.identity(7), PauliOp.identity(7)))
        ptm = plan_channel(code, 0.15, plan)
        ref = effective_logical_channel(code, 0.30)
        assert np.allclose(ptm, ref, atol=1e-12)
