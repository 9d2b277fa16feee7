import random
from fractions import Fraction

import pytest

from dnadecide.compiler import compile_problem
from dnadecide.decision import Payoff, build_matrix, role_chance
from dnadecide.strands import EXTENDED_BLUNT_CUTTERS, Strand
from dnadecide.wetlab import (
    CycleCountError,
    UnknownEnzymeError,
    apply_thresholds,
    assemble,
    audit_json,
    construct_key,
    digest,
    mix,
    pcr,
    purify,
    run_protocol,
    split_tubes,
)
from tests.conftest import make_ball_game

F = Fraction


@pytest.fixture(scope="module")
def ball_setup():
    matrix = make_ball_game()
    plan, protocol = compile_problem(matrix, seed=0)
    return matrix, plan, protocol


def test_mix_doses(ball_setup):
    _, plan, _ = ball_setup
    pool = mix(plan)
    assert pool.concentration("choice") == 1
    assert pool.concentration("chance:option-2:white") == 1
    assert pool.concentration("thresh:red") == F(5, 9)
    assert pool.concentration("thresh:black") == F(2, 3)
    assert pool.concentration("thresh:white") == F(7, 9)
    assert "primer:left" not in pool.species
    assert len(pool.species) == 32


def test_thresholds_displace_chance_strands(ball_setup):
    _, plan, _ = ball_setup
    tube = apply_thresholds(mix(plan))
    for opt in plan.matrix.options:
        assert tube.concentration(role_chance(opt.label, "red")) == F(4, 9)
        assert tube.concentration(role_chance(opt.label, "black")) == F(1, 3)
        assert tube.concentration(role_chance(opt.label, "white")) == F(2, 9)
    assert tube.concentration("waste:thresh:red+chance:option-1:red") == F(5, 9)
    assert tube.concentration("thresh:red") == 0


def test_threshold_conservation_per_chance_species(ball_setup):
    _, plan, _ = ball_setup
    before = mix(plan)
    after = apply_thresholds(before)
    for opt in plan.matrix.options:
        for out in plan.matrix.outcomes:
            key = role_chance(opt.label, out.label)
            waste = after.concentration(f"waste:thresh:{out.label}+{key}")
            assert after.concentration(key) + waste == before.concentration(key)


def test_assemble_yields_probability_weighted_constructs(ball_setup):
    _, plan, _ = ball_setup
    tube = assemble(apply_thresholds(mix(plan)))
    expected = {"red": F(4, 9), "black": F(1, 3), "white": F(2, 9)}
    for opt in plan.matrix.options:
        for out in plan.matrix.outcomes:
            assert tube.concentration(construct_key(opt.label, out.label)) == expected[out.label]


def test_split_gives_one_tube_per_option(ball_setup):
    _, plan, _ = ball_setup
    pool = assemble(apply_thresholds(mix(plan)))
    tubes = split_tubes(pool)
    assert [t.label for t in tubes] == ["tube-1", "tube-2", "tube-3"]
    for t in tubes:
        assert t.concentration(construct_key("option-1", "red")) == F(4, 9)


def tube_states(plan, protocol, cycles=5):
    pool = assemble(apply_thresholds(mix(plan)))
    return split_tubes(pool), protocol


def test_digest_leaves_only_favorable_constructs(ball_setup):
    _, plan, protocol = ball_setup
    tubes, _ = tube_states(plan, protocol)
    survivors_by_tube = []
    for tube, enzymes in zip(tubes, protocol.tube_enzymes):
        digested = digest(tube, enzymes)
        survivors = {
            k for k in digested.species if k.startswith("construct:")
        }
        survivors_by_tube.append(survivors)
    assert survivors_by_tube[0] == {
        construct_key("option-1", "red"),
        construct_key("option-1", "black"),
    }
    assert survivors_by_tube[1] == {
        construct_key("option-2", "red"),
        construct_key("option-2", "white"),
    }
    assert survivors_by_tube[2] == {
        construct_key("option-3", "black"),
        construct_key("option-3", "white"),
    }


def test_digest_fragment_lengths_conserve_parent(ball_setup):
    _, plan, protocol = ball_setup
    tubes, _ = tube_states(plan, protocol)
    digested = digest(tubes[0], protocol.tube_enzymes[0])
    cut_record = digested.log[-1]["fragments"]
    assert cut_record  # seven of the nine constructs were cut
    for parent_key, lengths in cut_record.items():
        if parent_key.startswith("construct:"):
            out_label = parent_key.split(":")[-1]
            assert sum(lengths) == plan.construct_length(out_label)
    # fragment concentration equals parent concentration
    frag = next(k for k in digested.species if k.startswith("fragment:construct:"))
    parent = frag[len("fragment:") :].rsplit(":", 1)[0]
    out_label = parent.split(":")[-1]
    assert digested.species[frag].concentration == tubes[0].concentration(parent)


def test_digest_unknown_enzyme(ball_setup):
    _, plan, protocol = ball_setup
    tubes, _ = tube_states(plan, protocol)
    with pytest.raises(UnknownEnzymeError):
        digest(tubes[0], ["BamHI"])


def test_pcr_doubles_per_cycle(ball_setup):
    _, plan, protocol = ball_setup
    tubes, _ = tube_states(plan, protocol)
    digested = digest(tubes[0], protocol.tube_enzymes[0])
    amplified = pcr(digested, 5)
    assert amplified.concentration(construct_key("option-1", "red")) == F(128, 9)
    assert amplified.concentration(construct_key("option-1", "black")) == F(96, 9)
    # fragments carry no primer ends, so they are untouched
    for key, sp in amplified.species.items():
        if key.startswith("fragment:"):
            assert not sp.amplified
            assert sp.concentration == digested.species[key].concentration


def test_pcr_zero_cycles_still_marks_amplifiable(ball_setup):
    _, plan, protocol = ball_setup
    tubes, _ = tube_states(plan, protocol)
    digested = digest(tubes[0], protocol.tube_enzymes[0])
    amplified = pcr(digested, 0)
    sp = amplified.species[construct_key("option-1", "red")]
    assert sp.amplified and sp.concentration == F(4, 9)


def test_pcr_negative_cycles_rejected(ball_setup):
    _, plan, protocol = ball_setup
    tubes, _ = tube_states(plan, protocol)
    with pytest.raises(CycleCountError):
        pcr(tubes[0], -1)


def test_pcr_with_foreign_primers_amplifies_nothing(ball_setup):
    _, plan, protocol = ball_setup
    tubes, _ = tube_states(plan, protocol)
    digested = digest(tubes[0], protocol.tube_enzymes[0])
    foreign = (Strand("ACGTACGTAC", "p1"), Strand("TGCATGCATG", "p2"))
    amplified = pcr(digested, 5, primers=foreign)
    assert all(not sp.amplified for sp in amplified.species.values())


def test_purify_keeps_amplified_only_and_is_idempotent(ball_setup):
    _, plan, protocol = ball_setup
    tubes, _ = tube_states(plan, protocol)
    done = purify(pcr(digest(tubes[0], protocol.tube_enzymes[0]), 5))
    assert set(done.species) == {
        construct_key("option-1", "red"),
        construct_key("option-1", "black"),
    }
    again = purify(done)
    assert again.species == done.species


def test_run_protocol_reproduces_band_concentrations(ball_setup):
    _, plan, protocol = ball_setup
    tubes = run_protocol(plan, protocol, cycles=5)
    final = [
        sorted((sp.length, sp.concentration) for sp in t.species.values())
        for t in tubes
    ]
    assert final == [
        [(147, F(128, 9)), (156, F(96, 9))],
        [(147, F(128, 9)), (174, F(64, 9))],
        [(156, F(96, 9)), (174, F(64, 9))],
    ]
    totals = [sum(c for _, c in lane) for lane in final]
    assert totals == [F(224, 9), F(192, 9), F(160, 9)]
    # per-tube totals stand in the same proportion as the expected utilities
    assert [t / totals[0] for t in totals] == [F(1), F(6, 7), F(5, 7)]


def test_single_option_certain_outcome():
    m = build_matrix(outcomes=[("only", F(1))], options=[("go", ["only"])])
    plan, protocol = compile_problem(m, seed=1)
    tubes = run_protocol(plan, protocol)
    assert len(tubes) == 1
    (sp,) = tubes[0].species.values()
    assert sp.length == 147
    assert sp.concentration == 32


def test_audit_log_is_deterministic(ball_setup):
    _, plan, protocol = ball_setup
    a = run_protocol(plan, protocol)
    b = run_protocol(plan, protocol)
    for ta, tb in zip(a, b):
        assert audit_json(ta) == audit_json(tb)
    ops = [r["op"] for r in a[0].log]
    assert ops == ["mix", "thresholds", "assemble", "split", "digest", "pcr", "purify"]


def test_random_matrices_survivors_match_favorability():
    rng = random.Random(42)
    for trial in range(15):
        n_out = rng.randint(2, 4)
        n_opt = rng.randint(2, 4)
        weights = [rng.randint(1, 9) for _ in range(n_out)]
        total = sum(weights)
        outcomes = [(f"o{j}", F(weights[j], total)) for j in range(n_out)]
        options = []
        for i in range(n_opt):
            fav = [f"o{j}" for j in range(n_out) if rng.random() < 0.5]
            options.append((f"a{i}", fav))
        m = build_matrix(outcomes, options)
        plan, protocol = compile_problem(m, seed=trial, library=EXTENDED_BLUNT_CUTTERS)
        tubes = run_protocol(plan, protocol, cycles=3)
        for tube, opt in zip(tubes, m.options):
            want = {
                construct_key(opt.label, out.label): out.probability * 8
                for out, pay in zip(m.outcomes, opt.payoffs)
                if pay is Payoff.FAVORABLE and out.probability > 0
            }
            have = {k: sp.concentration for k, sp in tube.species.items()}
            assert have == want, f"trial {trial}, {opt.label}"
