"""Polyak-Lojasiewicz certificates for composed objectives f(x) = g(Ex).

For g strongly convex with modulus sigma, f satisfies

    ||grad f(x)||^2 >= 2*mu*(f(x) - f*)   with   mu = sigma * smin_nz^2 / 4,

where smin_nz is the minimum nonzero singular value of E (via Hoffman's
error bound on the solution set {x : Ex = t*}).  check_pl certifies the
inequality numerically on sampled points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["ComposedObjective", "PLCertificate", "pl_constant", "check_pl", "gradient_check"]

_PL_SLACK = 1e-10


@dataclass(frozen=True)
class ComposedObjective:
    """f(x) = g(Ex) with g strongly convex of modulus sigma.

    f_star is the optimal value of f; it defaults to 0.0, the value for
    the quadratic family g = 0.5*||t - tbar||^2 with tbar in the range
    of E (and in particular for tbar = 0).  Supply it explicitly
    otherwise.
    """

    E: np.ndarray
    sigma: float
    g_eval: Callable[[np.ndarray], float]
    g_grad: Callable[[np.ndarray], np.ndarray]
    f_star: float = 0.0

    def __post_init__(self):
        E = np.asarray(self.E, dtype=float)
        if E.ndim != 2:
            raise ValueError(f"E must be a matrix, got ndim={E.ndim}")
        if not np.all(np.isfinite(E)):
            raise ValueError("E must have finite entries")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        object.__setattr__(self, "E", E)

    @property
    def n(self) -> int:
        return self.E.shape[1]

    def f(self, x: np.ndarray) -> float:
        return float(self.g_eval(self.E @ x))

    def grad(self, x: np.ndarray) -> np.ndarray:
        return self.E.T @ np.asarray(self.g_grad(self.E @ x), dtype=float)


@dataclass(frozen=True)
class PLCertificate:
    """Outcome of a sampled Polyak-Lojasiewicz check.

    worst_slack is the minimum over samples of
    ||grad f||^2 - 2*mu*(f - f*); the certificate passes when it stays
    above -1e-10.  On failure, `witness` holds a violating point.
    """

    mu: float
    sigma_min_nz: float
    samples_checked: int
    worst_slack: float
    passed: bool
    witness: np.ndarray | None = field(default=None, repr=False)


def _sigma_min_nz(E: np.ndarray) -> float:
    s = np.linalg.svd(E, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0.0
    nz = s[s > 1e-10 * s[0]]
    return float(nz.min()) if nz.size else 0.0


def pl_constant(obj: ComposedObjective) -> float:
    """PL constant mu = sigma * smin_nz^2 / 4 for f(x) = g(Ex).

    When E = 0 every point is optimal and the inequality is vacuous;
    the returned constant is then 0.0, under which any point certifies.
    """
    smin = _sigma_min_nz(obj.E)
    return obj.sigma * smin**2 / 4.0


def check_pl(
    obj: ComposedObjective,
    mu: float,
    n_samples: int = 100,
    radius: float = 10.0,
    seed=None,
) -> PLCertificate:
    """Certify ||grad f(x)||^2 >= 2*mu*(f(x) - f*) on sampled points.

    Points are drawn uniformly from the ball of the given radius.  The
    check allows slack -1e-10 for rounding.  A violation yields a failed
    certificate carrying the violating point rather than an exception.
    """
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    n = obj.n
    worst = np.inf
    witness = None
    for _ in range(n_samples):
        direction = rng.standard_normal(n)
        norm = np.linalg.norm(direction)
        if norm == 0.0:
            continue
        x = direction / norm * radius * rng.uniform() ** (1.0 / n)
        g = obj.grad(x)
        slack = float(g @ g) - 2.0 * mu * (obj.f(x) - obj.f_star)
        if slack < worst:
            worst = slack
            if slack < -_PL_SLACK:
                witness = x
    return PLCertificate(
        mu=mu,
        sigma_min_nz=_sigma_min_nz(obj.E),
        samples_checked=n_samples,
        worst_slack=worst,
        passed=worst >= -_PL_SLACK,
        witness=witness,
    )


def gradient_check(obj: ComposedObjective, n_points: int = 10, seed=0, rel_tol: float = 1e-5) -> bool:
    """Finite-difference consistency of g_grad against g_eval.

    Central differences at random points and directions; returns True
    when every directional derivative matches within rel_tol relatively.
    """
    rng = np.random.default_rng(seed)
    m = obj.E.shape[0]
    h = 1e-6
    for _ in range(n_points):
        t = rng.standard_normal(m)
        d = rng.standard_normal(m)
        d /= np.linalg.norm(d)
        numeric = (obj.g_eval(t + h * d) - obj.g_eval(t - h * d)) / (2.0 * h)
        analytic = float(np.asarray(obj.g_grad(t)) @ d)
        if abs(numeric - analytic) > rel_tol * max(1.0, abs(analytic)):
            return False
    return True
