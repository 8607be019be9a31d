"""Exact engine: closed forms vs brute force, order invariance, audits."""

import random
from fractions import Fraction

import pytest

from nlbox.engine import (ResourceLimitError, derive_seed, error_profile,
                          exec_exact, exec_exact_ordered_sweep, exec_sample,
                          nonsignaling_audit, ot_received_distribution,
                          privacy_audit_and, privacy_audit_ot)
from nlbox.compilers import ordered_to_ot, synth_rank
from nlbox.library import disj_rand_parallel, ip_protocol
from nlbox.protocols import (AndProtocol, GeneralNlbProtocol, OtProtocol,
                             ProtocolMixture)
from nlbox.truthtable import TruthTable, and_table, ip_table
from util import (oracle_parallel_dist, random_ordered, random_table,
                  random_tree, xor_as_ordered, xor_as_parallel)

RNG = random.Random(777)

HALF = Fraction(1, 2)


def test_chsh_box_distribution():
    p = ip_protocol(1)
    for x in (0, 1):
        for y in (0, 1):
            dist = exec_exact(p, x, y)
            # outcomes are unbiased and the parity equals x AND y surely
            assert dist.marginal_a() == {0: HALF, 1: HALF}
            assert dist.marginal_b() == {0: HALF, 1: HALF}
            assert dist.parity_prob(x & y) == 1


def test_parallel_exec_matches_bruteforce_oracle():
    for _ in range(30):
        base = synth_rank(random_table(2, 2, RNG))
        p = xor_as_parallel(base)
        for x in range(4):
            for y in range(4):
                assert exec_exact(p, x, y).probs == oracle_parallel_dist(p, x, y)


def test_xor_closed_form_matches_general_parallel_path():
    for _ in range(30):
        base = synth_rank(random_table(2, 2, RNG))
        emb = xor_as_parallel(base)
        for x in range(4):
            for y in range(4):
                assert exec_exact(base, x, y).probs == exec_exact(emb, x, y).probs


def test_ordered_sweep_order_invariance():
    for _ in range(20):
        p = random_ordered(2, 2, RNG.randrange(1, 4), RNG)
        for x in range(4):
            for y in range(4):
                ref = exec_exact(p, x, y)
                assert exec_exact_ordered_sweep(p, x, y, bob_first=False).probs \
                    == ref.probs
                assert exec_exact_ordered_sweep(p, x, y, bob_first=True).probs \
                    == ref.probs


def test_general_with_identity_schedules_equals_ordered():
    for _ in range(20):
        p = random_ordered(2, 2, RNG.randrange(1, 4), RNG)
        ident = tuple(range(p.t))
        g = GeneralNlbProtocol(p.nx, p.ny, p.t, ident, p.step_a, ident,
                               p.step_b, p.out_a, p.out_b)
        for x in range(4):
            for y in range(4):
                assert exec_exact(g, x, y).probs == exec_exact(p, x, y).probs


def test_general_schedule_permutation_invariance_for_parallel_boxes():
    # when step tables ignore observed outcomes, any schedule pair gives
    # the same joint law as the parallel execution
    for _ in range(15):
        base = synth_rank(random_table(2, 2, RNG))
        if base.t == 0:
            continue
        emb = xor_as_ordered(base)
        sched_a = list(range(base.t))
        sched_b = list(range(base.t))
        RNG.shuffle(sched_a)
        RNG.shuffle(sched_b)
        # constant-in-prefix step tables, reindexed by touch position
        step_a = tuple(tuple(tuple(base.pbox[sched_a[pos]][x]
                                   for _ in range(1 << pos))
                             for x in range(1 << base.nx))
                       for pos in range(base.t))
        step_b = tuple(tuple(tuple(base.qbox[sched_b[pos]][y]
                                   for _ in range(1 << pos))
                             for y in range(1 << base.ny))
                       for pos in range(base.t))
        g = GeneralNlbProtocol(base.nx, base.ny, base.t, tuple(sched_a), step_a,
                               tuple(sched_b), step_b,
                               emb.out_a, emb.out_b)
        for x in range(4):
            for y in range(4):
                assert exec_exact(g, x, y).probs == exec_exact(base, x, y).probs


def test_mixture_is_weighted_average():
    p = disj_rand_parallel(2, Fraction(1, 3))
    for x in range(4):
        for y in range(4):
            acc = {}
            for w, comp in p.components:
                for ab, q in exec_exact(comp, x, y).probs.items():
                    acc[ab] = acc.get(ab, Fraction(0)) + w * q
            assert exec_exact(p, x, y).probs == acc


def test_deterministic_protocol_kinds_are_point_masses():
    tree = random_tree(2, 2, 3, RNG)
    for x in range(4):
        for y in range(4):
            dist = exec_exact(tree, x, y)
            assert list(dist.probs.values()) == [Fraction(1)]
            assert next(iter(dist.probs)) == tree.evaluate(x, y)


def test_ot_distribution_and_received_bits():
    ot = ordered_to_ot(xor_as_ordered(ip_protocol(2)))
    for x in range(4):
        for y in range(4):
            rec = ot_received_distribution(ot, x, y)
            assert sum(rec.values()) == 1
            assert len(rec) == 1 << ot.t
    assert privacy_audit_ot(ot) is None


def test_error_profile_fast_path_matches_generic():
    f = random_table(2, 2, RNG)
    p = synth_rank(f)
    fast = error_profile(p, f)
    slow = error_profile(xor_as_parallel(p), f)
    assert fast.table == slow.table
    assert fast.exact and slow.exact


def test_error_profile_reports_worst_input():
    # protocol that always outputs parity 0, measured against AND
    p = synth_rank(TruthTable(1, 1, (0, 0)))
    prof = error_profile(p, and_table())
    assert prof.table[(1, 1)] == 1
    assert prof.worst == 1
    assert not prof.exact


def test_sampling_is_seed_deterministic_and_consistent():
    p = ip_protocol(2)
    a0, b0, tr0 = exec_sample(p, 3, 3, 42)
    a1, b1, tr1 = exec_sample(p, 3, 3, 42)
    assert (a0, b0, tr0) == (a1, b1, tr1)
    # every sampled branch obeys the box constraint and the output rule
    for i, ev in enumerate(tr0):
        pa, qb = ev["in"]
        oa, ob = ev["out"]
        assert oa ^ ob == (pa & qb)


def test_sampling_frequencies_near_exact():
    p = ip_protocol(1)
    counts = {}
    for i in range(2000):
        a, b, _ = exec_sample(p, 1, 1, derive_seed(7, i))
        counts[(a, b)] = counts.get((a, b), 0) + 1
    dist = exec_exact(p, 1, 1)
    assert set(counts) == set(dist.probs)
    for ab, n in counts.items():
        assert abs(n / 2000 - float(dist.probs[ab])) < 0.05


def test_sampling_covers_every_protocol_kind():
    kinds = [
        disj_rand_parallel(2, Fraction(1, 3)),
        random_tree(2, 2, 2, RNG),
        ordered_to_ot(xor_as_ordered(ip_protocol(1))),
        random_ordered(1, 1, 2, RNG),
    ]
    for p in kinds:
        a, b, _tr = exec_sample(p, 0, 0, 5)
        assert a in (0, 1) and b in (0, 1)


def test_resource_limit(monkeypatch):
    monkeypatch.setenv("NLBOX_LIMIT_T", "2")
    p = xor_as_parallel(ip_protocol(3))
    with pytest.raises(ResourceLimitError):
        exec_exact(p, 0, 0)


def test_nonsignaling_passes_for_box_protocols():
    samples = [
        ip_protocol(2),
        xor_as_parallel(ip_protocol(2)),
        random_ordered(2, 2, 3, RNG),
        disj_rand_parallel(2, Fraction(1, 3)),
    ]
    for p in samples:
        assert nonsignaling_audit(p) is None


def test_privacy_audit_and_detects_leak():
    # both gates always raised by Alice, Bob inputs y into both: the gate
    # vector reveals y even when f(x, y) is constant in y
    leaky = AndProtocol(1, 1, 2, ((1, 1), (1, 1)), ((0, 1), (0, 1)),
                        ((0, 0, 0, 0), (0, 0, 0, 1)))
    bad = privacy_audit_and(leaky, and_table())
    assert bad is not None
    assert bad.check == "and-privacy"


def test_privacy_audit_and_detects_wrong_output():
    wrong = AndProtocol(1, 1, 1, ((0, 1),), ((0, 1),),
                        ((0, 0), (1, 0)))  # out_a[1][1] should be 1 for AND
    bad = privacy_audit_and(wrong, and_table())
    assert bad is not None
    assert bad.check == "and-correctness"


def test_privacy_audit_ot_detects_bias():
    # constant (0, 0) pairs: Bob always receives 0, far from uniform
    biased = OtProtocol(
        1, 1, 1, (HALF, HALF),
        ((((0, 0), (0, 0)), ((0, 0), (0, 0))),),
        (((0,), (1,)),),
        ((0, 0), (0, 0)), ((0, 0), (0, 0)))
    bad = privacy_audit_ot(biased)
    assert bad is not None
    assert bad.check == "ot-privacy"


def test_mixture_audit_and_views():
    mix = ProtocolMixture(((HALF, ip_protocol(1)), (HALF, ip_protocol(1))))
    assert nonsignaling_audit(mix) is None
    d = exec_exact(mix, 1, 1)
    assert d.parity_prob(1) == 1
