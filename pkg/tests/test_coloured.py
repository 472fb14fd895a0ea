import random

import pytest

from chipfire.coloured import ColouredCfg, from_classical
from chipfire.engine import Cfg
from chipfire.fixtures import funnel_game, relay_chain_game, shared_gate_game, split_track_game
from chipfire.lattice import is_isomorphic
from chipfire.multigraph import ColouredMultigraph
from chipfire.transforms import simplify

from helpers import random_coloured_game


def v(game, name):
    return game.graph.vertex(name)


def chips_of(game, state, name, colour):
    return state.chips[game.colours.index(colour)][v(game, name)]


def test_guard_rejects_closed_cycle_colour():
    graph = ColouredMultigraph(("a", "b"), {1: {(0, 1): 1, (1, 0): 1}})
    with pytest.raises(ValueError):
        ColouredCfg(graph, {1: (1, 0)})


def test_openable_initial_shared_gate():
    game = shared_gate_game()
    state = game.initial_state()
    assert game.openable(state) == {v(game, "a"), v(game, "b")}


def test_openable_mid_state_gate():
    game = shared_gate_game()
    state = game.initial_state()
    state = game.open_vertex(state, v(game, "a"))
    state = game.open_vertex(state, v(game, "b"))
    assert game.openable(state) == {v(game, "c")}


def test_openable_all_open_empty():
    game = shared_gate_game()
    state = game.initial_state()
    for name in ("a", "b", "c"):
        state = game.open_vertex(state, v(game, name))
    assert game.openable(state) == frozenset()


def test_open_vertex_moves_chips_to_closed_vertices():
    game = shared_gate_game()
    state = game.open_vertex(game.initial_state(), v(game, "a"))
    # colour-1 chip lands on the still-closed gate, colour-3 chip on the sink
    assert chips_of(game, state, "c", 1) == 1
    assert chips_of(game, state, "bot", 3) == 1
    assert chips_of(game, state, "a", 1) == 0
    assert chips_of(game, state, "a", 3) == 0


def test_open_isolated_chip_goes_to_sink():
    graph = ColouredMultigraph(("x", "s"), {1: {(0, 1): 1}})
    game = ColouredCfg(graph, {1: (1, 0)})
    state = game.open_vertex(game.initial_state(), 0)
    assert state.chips[0] == (0, 1)


def test_reopen_errors():
    game = shared_gate_game()
    state = game.open_vertex(game.initial_state(), v(game, "a"))
    with pytest.raises(ValueError):
        game.open_vertex(state, v(game, "a"))


def test_open_non_openable_errors():
    game = shared_gate_game()
    with pytest.raises(ValueError):
        game.open_vertex(game.initial_state(), v(game, "c"))


def test_enumerate_shared_gate_space():
    space = shared_gate_game().enumerate_space()
    assert len(space) == 7
    lat = space.lattice()
    assert lat.is_uld and not lat.is_distributive
    assert is_isomorphic(lat, funnel_game().enumerate_space().lattice())


def test_enumerate_split_track_space():
    space = split_track_game().enumerate_space()
    assert len(space) == 9
    assert space.lattice().is_distributive


def test_enumerate_empty_game():
    graph = ColouredMultigraph(("x", "s"), {1: {(0, 1): 1}})
    game = ColouredCfg(graph, {1: (0, 0)})
    assert len(game.enumerate_space()) == 1


def test_opening_order_independence():
    rng = random.Random(13)
    for _ in range(25):
        game = random_coloured_game(rng)
        finals = set()
        shot_sets = set()
        for seed in range(4):
            order_rng = random.Random(seed)
            state = game.initial_state()
            while True:
                options = sorted(game.openable(state))
                if not options:
                    break
                state = game.open_vertex(state, order_rng.choice(options))
            finals.add(state.chips)
            shot_sets.add(state.opened)
        assert len(finals) == 1
        assert len(shot_sets) == 1


def test_openable_monotone():
    rng = random.Random(37)
    for _ in range(25):
        game = random_coloured_game(rng)
        state = game.initial_state()
        while True:
            options = game.openable(state)
            if not options:
                break
            w = min(options)
            nxt = game.open_vertex(state, w)
            for other in options - {w}:
                assert other in game.openable(nxt)
            state = nxt


def test_union_closed_shot_sets():
    rng = random.Random(59)
    for _ in range(25):
        game = random_coloured_game(rng)
        space = game.enumerate_space()
        shots = {space.shot_set(i) for i in range(len(space))}
        for x in shots:
            for y in shots:
                assert x | y in shots


def test_space_is_uld_both_detectors():
    rng = random.Random(71)
    for _ in range(25):
        lat = random_coloured_game(rng).enumerate_space().lattice()
        assert lat.uld_detectors == (True, True)
        assert lat.is_uld


def test_from_classical_funnel():
    game = from_classical(funnel_game())
    assert game.colours == (1,)
    space = game.enumerate_space()
    assert is_isomorphic(space.lattice(), funnel_game().enumerate_space().lattice())


def test_from_classical_zero_chips():
    base = Cfg(funnel_game().graph, (0, 0, 0, 0))
    assert len(from_classical(base).enumerate_space()) == 1


def test_from_classical_rejects_non_simple():
    with pytest.raises(ValueError):
        from_classical(relay_chain_game())


def test_from_classical_after_simplify():
    simple, _ = simplify(relay_chain_game())
    game = from_classical(simple)
    assert is_isomorphic(
        game.enumerate_space().lattice(),
        relay_chain_game().enumerate_space().lattice(),
    )
