"""Shared oracles: step-level simulation and batched Monte Carlo."""

import numpy as np

from cdlab import (
    apply_coordinate_step,
    closed_form_C,
    coordinate_gradient,
    init_state,
)


def simulate_epoch(model, x, order):
    """One epoch through the public step API; returns the new iterate.

    Independent of the run() hot loop, so the two paths cross-check
    each other.
    """
    state = init_state(model, x)
    for i in order:
        g = coordinate_gradient(model, state, i)
        apply_coordinate_step(model, state, i, g)
    return state.x


def permutation_matrices(n):
    """All n! permutation matrices."""
    import itertools

    mats = []
    for perm in itertools.permutations(range(n)):
        P = np.zeros((n, n))
        P[list(perm), range(n)] = 1.0
        mats.append(P)
    return mats


def batch_rpcd_objectives(n, delta, ell, n_samples, seed, x0=None):
    """Objectives after ell random-permutation epochs, vectorized.

    Each replicate draws its own permutation per epoch; x0 is either a
    fixed vector (replicated) or fresh standard normal per replicate.
    """
    rng = np.random.default_rng(seed)
    C = closed_form_C(n, delta)
    if x0 is None:
        X = rng.standard_normal((n_samples, n))
    else:
        X = np.tile(np.asarray(x0, dtype=float), (n_samples, 1))
    base = np.broadcast_to(np.arange(n), (n_samples, n))
    for _ in range(ell):
        perms = rng.permuted(base, axis=1)
        Y = np.take_along_axis(X, perms, axis=1)
        np.put_along_axis(X, perms, Y @ C.T, axis=1)
    s = X.sum(axis=1)
    return 0.5 * delta * np.einsum("ij,ij->i", X, X) + 0.5 * (1.0 - delta) * s * s
