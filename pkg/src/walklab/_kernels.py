"""Compiled inner loops for the event-driven walk simulators.

Each kernel consumes pre-drawn arrays of exponential(1) waiting times,
uniform generator selectors, and fair-coin uniforms, so that the random
stream consumption order is fixed and replicas are reproducible.  Kernels
return how much of the draw arrays they used; the drivers top up the arrays
from the same stream when a chunk runs out before the horizon.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def finite_walk(nxt, cum, x, t, ev, T, clock, exps, us, coins, refresh, occ):
    """Walk on a finite state table until T or until the draws run out.

    Returns (x, t, ev, used, finished).  `occ` accumulates sojourn time per
    state (pass a length-0 array to skip tracking).
    """
    n = exps.shape[0]
    track = occ.shape[0] > 0
    for i in range(n):
        dt = exps[i] / clock
        if t + dt >= T:
            if track:
                occ[x] += T - t
            return x, T, ev, i + 1, True
        if track:
            occ[x] += dt
        t += dt
        ev += 1
        g = np.searchsorted(cum, us[i], side="right")
        if refresh:
            if coins[i] < 0.5:
                x = nxt[x, g]
        else:
            x = nxt[x, g]
    return x, t, ev, n, False


@njit(cache=True)
def free_product_walk(
    mult, fdist, gen_fac, gen_el, cum, syl_f, syl_e, depth, word_dist,
    t, ev, T, clock, exps, us, coins, refresh,
):
    """Walk on a free product in syllable normal form.

    `mult` is (F, m, m) padded factor multiplication tables, `fdist` (F, m)
    factor word lengths.  Returns (depth, word_dist, t, ev, used, finished).
    """
    n = exps.shape[0]
    for i in range(n):
        dt = exps[i] / clock
        if t + dt >= T:
            return depth, word_dist, T, ev, i + 1, True
        t += dt
        ev += 1
        g = np.searchsorted(cum, us[i], side="right")
        if refresh and coins[i] >= 0.5:
            continue
        f = gen_fac[g]
        e = gen_el[g]
        if depth > 0 and syl_f[depth - 1] == f:
            old = syl_e[depth - 1]
            new = mult[f, old, e]
            word_dist += fdist[f, new] - fdist[f, old]
            if new == 0:
                depth -= 1
            else:
                syl_e[depth - 1] = new
        else:
            syl_f[depth] = f
            syl_e[depth] = e
            depth += 1
            word_dist += fdist[f, e]
    return depth, word_dist, t, ev, n, False


@njit(cache=True)
def ray_walk(rates, x, t, ev, T, exps, us, coins, refresh, occ):
    """Walk on {0..len(rates)} with rates[i] on edge (i, i+1).

    The clock rate depends on the position, so each step consumes one
    exponential scaled by the local total rate.  Returns
    (x, t, ev, used, finished); finished is also set when the walker is
    stuck (both adjacent rates zero).
    """
    n = exps.shape[0]
    m = rates.shape[0]
    track = occ.shape[0] > 0
    for i in range(n):
        left = rates[x - 1] if x > 0 else 0.0
        right = rates[x] if x < m else 0.0
        total = left + right
        if refresh:
            total *= 2.0
        if total == 0.0:
            if track:
                occ[x] += T - t
            return x, T, ev, i, True
        dt = exps[i] / total
        if t + dt >= T:
            if track:
                occ[x] += T - t
            return x, T, ev, i + 1, True
        if track:
            occ[x] += dt
        t += dt
        ev += 1
        go_right = us[i] * (left + right) >= left
        if refresh and coins[i] >= 0.5:
            continue
        if go_right:
            x += 1
        else:
            x -= 1
    return x, t, ev, n, False
