"""Independent reference implementations used as test oracles."""

from __future__ import annotations

import itertools

from paramsynth import term as T
from paramsynth.spec import ConcreteSpec


def explicit_winning_region(cspec: ConcreteSpec, state_box: dict, input_box: dict) -> set:
    """Winning states of a concrete spec by explicit set iteration.

    States and inputs range over the given finite boxes (var -> values);
    successors outside the box count as losing.  Assumptions may mention
    inputs: an input satisfying the assumption must make progress, any other
    input may keep the play in the current set.
    """
    xs = list(cspec.states)
    ins = list(cspec.inputs)
    states = [dict(zip(xs, vals)) for vals in itertools.product(*(state_box[v] for v in xs))]
    inputs = [dict(zip(ins, vals)) for vals in itertools.product(*(input_box[v] for v in ins))]
    key = lambda s: tuple(s[v] for v in xs)
    universe = {key(s): s for s in states}

    def moves(s, i):
        env = {**s, **i}
        out = []
        for k in range(len(cspec.actions)):
            if T.evaluate(cspec.guard(k), env):
                out.append(tuple(T.evaluate(cspec.update(k)[v], env) for v in xs))
        return out

    table = {}
    for sk, s in universe.items():
        rows = []
        for i in inputs:
            env = {**s, **i}
            if not T.evaluate(cspec.env_trans, env):
                continue
            rows.append((env, moves(s, i)))
        table[sk] = rows

    def holds(t, env):
        return bool(T.evaluate(t, env))

    def cpre(good_progress, good_stay=None, avoid=None):
        """States where every admissible input allows a move into
        good_progress, or (if the assumption ``avoid`` is false for that
        input) into good_stay."""
        out = set()
        for sk, rows in table.items():
            ok = True
            for env, succ in rows:
                if any(n in good_progress for n in succ):
                    continue
                if good_stay is not None and not holds(avoid, env) and \
                        any(n in good_stay for n in succ):
                    continue
                ok = False
                break
            if ok:
                out.add(sk)
        return out

    goals = [{sk for sk, s in universe.items() if holds(g, s)} for g in cspec.guarantees]
    assumptions = list(cspec.assumptions)
    z = set(universe)
    while True:
        z_old = z
        for j in range(len(goals)):
            cz = goals[j] & cpre(z)
            y = set()
            while True:
                y_old = y
                start = cz | cpre(y)
                if not assumptions:
                    y = start
                else:
                    acc = set()
                    for e in assumptions:
                        x = set(z)
                        while True:
                            x_new = start | (cpre(y, x, e))
                            if x_new == x:
                                break
                            x = x_new
                        acc |= x
                    y = acc
                if y == y_old:
                    break
            z = y
        if z == z_old:
            return z
