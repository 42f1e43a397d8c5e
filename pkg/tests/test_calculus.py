import random

import pytest
from hypothesis import given, settings, strategies as st

from genimm.calculus import (
    CalculusError,
    EventKind,
    ImmersionContext,
    InconsistentStateError,
    InvariantState,
    ScriptError,
    StrataEvent,
    Target,
    admissible_J_indices,
    apply_event,
    check_state,
    connected_sum,
    count_events,
    defined_invariants,
    event_alphabet,
    initial_state,
    loop_check,
    reflect_target,
    residues,
    reverse_source_orientation,
    run_script,
    shortest_event_path,
)

from helpers import random_context, random_events, random_state

MP = StrataEvent.multiple_point
ST = StrataEvent.tangency
GENERAL = Target.GENERAL


def ctx_strategy():
    return st.builds(
        ImmersionContext,
        n=st.integers(2, 6), m=st.integers(2, 9),
        target=st.sampled_from(list(Target)),
        source_oriented=st.booleans(), cond_lambda=st.booleans(),
        cond_l=st.booleans(), tor_condition=st.booleans(),
    )


@st.composite
def ctx_state_events(draw, max_len=20):
    ctx = draw(ctx_strategy())
    seed = draw(st.integers(0, 2 ** 32))
    rng = random.Random(seed)
    state = random_state(rng, ctx)
    events = draw(st.lists(st.sampled_from(event_alphabet(ctx)), max_size=max_len))
    return ctx, state, events


class TestDefinedness:
    @pytest.mark.parametrize("n, m, expected", [
        (3, 5, {3, 5}), (2, 4, set()), (3, 2, {2}), (5, 6, {2, 4, 6}),
    ])
    def test_admissible(self, n, m, expected):
        assert admissible_J_indices(ImmersionContext(n, m)) == expected

    def test_s3_r5(self):
        d = defined_invariants(ImmersionContext(2, 2))
        assert d.l_value and d.j_count and not d.j_indices

    def test_general_target_only_j(self):
        d = defined_invariants(ImmersionContext(3, 3, target=GENERAL))
        assert d.j_indices == {3}
        assert not (d.j_count or d.lambda_ or d.l_value)

    def test_lambda_without_jumps(self):
        d = defined_invariants(ImmersionContext(2, 3, cond_lambda=True))
        assert d.lambda_ and not d.lambda_jumps

    @pytest.mark.parametrize("kw", [
        dict(source_oriented=False), dict(cond_l=False), dict(target=GENERAL),
    ])
    def test_l_needs_everything(self, kw):
        assert not defined_invariants(ImmersionContext(2, 2, **kw)).l_value

    def test_l_needs_even_n(self):
        assert not defined_invariants(ImmersionContext(3, 2)).l_value

    def test_bad_dimensions(self):
        with pytest.raises(CalculusError):
            ImmersionContext(1, 3)
        with pytest.raises(CalculusError):
            ImmersionContext(2, 1)


class TestState:
    def test_initial_state_keys(self):
        ctx = ImmersionContext(3, 5)
        s = initial_state(ctx, J_3=4)
        assert s.j_values == {3: 4, 5: 0}
        assert s.lambda_ == 0 and s.l_value is None and s.j_count is None
        check_state(ctx, s)

    def test_initial_state_rejects_undefined(self):
        with pytest.raises(InconsistentStateError):
            initial_state(ImmersionContext(3, 5), L=1)

    def test_check_missing(self):
        with pytest.raises(InconsistentStateError):
            check_state(ImmersionContext(2, 2), InvariantState(j_count=0, lambda_=0))

    def test_check_extra_j(self):
        with pytest.raises(InconsistentStateError):
            check_state(ImmersionContext(2, 2),
                        InvariantState({2: 0}, j_count=0, lambda_=0, l_value=0))

    def test_parity_coupling(self):
        ctx = ImmersionContext(2, 2)
        with pytest.raises(InconsistentStateError):
            check_state(ctx, InvariantState(j_count=0, lambda_=0, l_value=3))
        check_state(ImmersionContext(2, 2, tor_condition=False),
                    InvariantState(j_count=0, lambda_=0, l_value=3))

    def test_flat_roundtrip(self):
        s = InvariantState({3: 4, 5: -2}, j_count=None, lambda_=1, l_value=None)
        assert InvariantState.from_flat(s.as_flat()) == s

    def test_from_flat_rejects_unknown(self):
        with pytest.raises(CalculusError):
            InvariantState.from_flat({"K": 1})


class TestApplyEvent:
    def test_multiple_point_l(self):
        ctx = ImmersionContext(2, 2)
        s = apply_event(ctx, initial_state(ctx), MP(1))
        assert s.l_value == 3

    def test_tangency_j3(self):
        ctx = ImmersionContext(3, 3)
        s = apply_event(ctx, initial_state(ctx, J_3=4), ST(3, 1))
        assert s.j_values[3] == 6

    def test_lambda_m_odd(self):
        ctx = ImmersionContext(2, 3, tor_condition=False)
        s0 = initial_state(ctx)
        assert apply_event(ctx, s0, MP(1)).lambda_ == 0

    def test_lambda_m_even_flips(self):
        ctx = ImmersionContext(3, 2)
        assert apply_event(ctx, initial_state(ctx), MP(-1)).lambda_ == 1

    def test_j_count_negative_crossing(self):
        ctx = ImmersionContext(2, 2)
        s = apply_event(ctx, initial_state(ctx, J=1), ST(2, -1))
        assert s.j_count == 0

    def test_j_count_only_at_depth_m(self):
        ctx = ImmersionContext(2, 4)
        s0 = initial_state(ctx, J=3)
        assert apply_event(ctx, s0, ST(2, 1)) == s0
        assert apply_event(ctx, s0, ST(3, 1)) == s0
        assert apply_event(ctx, s0, ST(4, 1)).j_count == 4

    def test_other_j_untouched(self):
        ctx = ImmersionContext(3, 5)
        s = apply_event(ctx, initial_state(ctx, J_3=1, J_5=7), ST(3, -1))
        assert s.j_values == {3: -1, 5: 7}

    def test_inadmissible_depth_noop(self):
        ctx = ImmersionContext(3, 5)
        s0 = initial_state(ctx)
        assert apply_event(ctx, s0, ST(4, 1)) == s0

    def test_depth_out_of_range(self):
        ctx = ImmersionContext(3, 3)
        with pytest.raises(CalculusError):
            apply_event(ctx, initial_state(ctx), ST(4, 1))

    @pytest.mark.parametrize("kw", [
        dict(kind=EventKind.SELF_TANGENCY, sign=1, depth=1),
        dict(kind=EventKind.SELF_TANGENCY, sign=1),
        dict(kind=EventKind.MULTIPLE_POINT, sign=1, depth=3),
        dict(kind=EventKind.MULTIPLE_POINT, sign=0),
    ])
    def test_bad_events(self, kw):
        with pytest.raises(CalculusError):
            StrataEvent(**kw)

    @settings(max_examples=200)
    @given(ctx_state_events(max_len=1))
    def test_state_stays_consistent(self, data):
        ctx, state, events = data
        check_state(ctx, state)
        for ev in events:
            check_state(ctx, apply_event(ctx, state, ev))


class TestRunScript:
    def test_empty(self):
        ctx = ImmersionContext(2, 2)
        s0 = initial_state(ctx)
        assert run_script(ctx, s0, []) == [s0]

    def test_cancel(self):
        ctx = ImmersionContext(2, 2)
        s0 = initial_state(ctx)
        assert run_script(ctx, s0, [MP(1), MP(-1)])[-1] == s0

    def test_five_crossings(self):
        ctx = ImmersionContext(2, 2, tor_condition=False)
        trace = run_script(ctx, initial_state(ctx), [MP(1)] * 5)
        assert len(trace) == 6
        assert trace[-1].l_value == 15

    def test_error_index(self):
        ctx = ImmersionContext(3, 3)
        with pytest.raises(ScriptError) as exc:
            run_script(ctx, initial_state(ctx), [ST(2, 1), ST(3, 1), ST(9, 1)])
        assert exc.value.index == 2

    @settings(max_examples=200)
    @given(ctx_state_events())
    def test_residues_constant(self, data):
        ctx, state, events = data
        base = residues(ctx, state)
        for s in run_script(ctx, state, events):
            assert residues(ctx, s) == base

    @settings(max_examples=200)
    @given(ctx_state_events(max_len=2))
    def test_commutativity(self, data):
        ctx, state, events = data
        if len(events) < 2:
            return
        e1, e2 = events
        a = apply_event(ctx, apply_event(ctx, state, e1), e2)
        b = apply_event(ctx, apply_event(ctx, state, e2), e1)
        assert a == b

    @given(ctx_state_events(max_len=1))
    def test_inverse(self, data):
        ctx, state, events = data
        for ev in events:
            assert apply_event(ctx, apply_event(ctx, state, ev), ev.inverse()) == state


class TestConnectedSum:
    def test_l(self):
        ctx = ImmersionContext(2, 34)
        _, s = connected_sum(ctx, initial_state(ctx, L=35, Lambda=1), ctx,
                             initial_state(ctx, L=-35, Lambda=1))
        assert s.l_value == 0 and s.lambda_ == 0

    def test_j(self):
        ctx = ImmersionContext(3, 3)
        _, s = connected_sum(ctx, initial_state(ctx, J_3=2), ctx, initial_state(ctx, J_3=4))
        assert s.j_values == {3: 6}

    def test_flags_and(self):
        a = ImmersionContext(2, 2)
        b = ImmersionContext(2, 2, cond_l=False)
        ctx, s = connected_sum(a, initial_state(a, L=3, Lambda=1), b, initial_state(b))
        assert not ctx.cond_l and s.l_value is None and s.lambda_ == 1

    def test_dimension_mismatch(self):
        a, b = ImmersionContext(2, 2), ImmersionContext(2, 4)
        with pytest.raises(CalculusError):
            connected_sum(a, initial_state(a), b, initial_state(b))

    def test_general_target(self):
        a = ImmersionContext(3, 3, target=GENERAL)
        with pytest.raises(CalculusError):
            connected_sum(a, initial_state(a), a, initial_state(a))

    @settings(max_examples=200)
    @given(ctx_strategy(), st.integers(0, 2 ** 32))
    def test_l_residue_homomorphism(self, ctx, seed):
        rng = random.Random(seed)
        if not ctx.euclidean:
            return
        a, b = random_state(rng, ctx), random_state(rng, ctx)
        _, s = connected_sum(ctx, a, ctx, b)
        ra, rb, rs = residues(ctx, a), residues(ctx, b), residues(ctx, s)
        if rs.l_residue is not None:
            assert rs.l_residue == (ra.l_residue + rb.l_residue) % (ctx.m + 1)


class TestOrientation:
    def test_reverse_source(self):
        assert reverse_source_orientation(ImmersionContext(2, 2),
                                          InvariantState(j_count=0, lambda_=0, l_value=6)).l_value == -6
        assert reverse_source_orientation(ImmersionContext(2, 3),
                                          InvariantState(j_count=0, lambda_=0, l_value=6)).l_value == 6

    def test_reverse_without_l(self):
        ctx = ImmersionContext(2, 2, cond_l=False)
        s = initial_state(ctx, J=4)
        assert reverse_source_orientation(ctx, s) == s

    def test_reverse_unoriented(self):
        ctx = ImmersionContext(2, 2, source_oriented=False)
        with pytest.raises(CalculusError):
            reverse_source_orientation(ctx, initial_state(ctx))

    def test_reflect(self):
        s = InvariantState(j_count=0, lambda_=0, l_value=6)
        assert reflect_target(ImmersionContext(2, 2), s).l_value == 6
        assert reflect_target(ImmersionContext(2, 3), s).l_value == -6
        s = InvariantState(j_count=0, lambda_=1)
        assert reflect_target(ImmersionContext(2, 3, cond_l=False), s).lambda_ == 1

    def test_reflect_general(self):
        ctx = ImmersionContext(3, 3, target=GENERAL)
        with pytest.raises(CalculusError):
            reflect_target(ctx, initial_state(ctx))


class TestResidues:
    def test_l(self):
        r = residues(ImmersionContext(2, 2, tor_condition=False),
                     InvariantState(j_count=0, lambda_=0, l_value=7))
        assert r.l_residue == 1

    def test_lambda_m_odd(self):
        r = residues(ImmersionContext(3, 3), InvariantState({3: 6}, lambda_=1))
        assert r.lambda_residue == 1
        assert r.j_residues == {3: 0}

    def test_lambda_m_even_absent(self):
        r = residues(ImmersionContext(3, 2), InvariantState({2: 1}, lambda_=1))
        assert r.lambda_residue is None

    def test_record_roundtrip(self):
        r = residues(ImmersionContext(3, 5), InvariantState({3: 1, 5: 2}, lambda_=1))
        assert type(r).from_record(r.to_record()) == r


class TestLoops:
    def test_commuting_square(self):
        ctx = ImmersionContext(2, 2)
        s0 = initial_state(ctx, J=1)
        assert loop_check(ctx, s0, [ST(2, 1), MP(1), ST(2, -1), MP(-1)])

    def test_cusp(self):
        ctx = ImmersionContext(2, 2)
        assert loop_check(ctx, initial_state(ctx, J=1), [ST(2, 1), ST(2, -1)])

    def test_open_path(self):
        ctx = ImmersionContext(2, 2)
        assert not loop_check(ctx, initial_state(ctx), [MP(1)])


class TestSearch:
    def test_h_plus_to_h_minus(self):
        ctx = ImmersionContext(2, 2)
        h_plus = initial_state(ctx, L=3, Lambda=1)
        h_minus = initial_state(ctx, L=-3, Lambda=1)
        assert shortest_event_path(ctx, h_plus, h_minus, 1) is None
        path = shortest_event_path(ctx, h_plus, h_minus, 4)
        assert path == [MP(-1), MP(-1)]
        assert count_events(path)[EventKind.MULTIPLE_POINT] == 2

    def test_trivial(self):
        ctx = ImmersionContext(3, 3)
        s = initial_state(ctx)
        assert shortest_event_path(ctx, s, s, 0) == []


def test_random_helpers_consistent():
    rng = random.Random(5)
    for _ in range(200):
        ctx = random_context(rng)
        s = random_state(rng, ctx)
        check_state(ctx, s)
        trace = run_script(ctx, s, random_events(rng, ctx, 10))
        for t in trace:
            check_state(ctx, t)
