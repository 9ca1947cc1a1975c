"""Polyak-Lojasiewicz certificates for composed objectives g(Ex).

For strongly convex g the composition satisfies
||grad f||^2 >= 2*mu*(f - f*) with mu = sigma * smin_nz^2 / 4, even when
E is rank deficient.  The checker samples the inequality and reports the
worst slack; an inflated constant is caught with a witness point.
"""

import numpy as np

from cdlab import ComposedObjective, check_pl, pl_constant

rng = np.random.default_rng(6)
E = rng.standard_normal((8, 5))
E[:, 4] = E[:, 0] + E[:, 1]  # make the factor rank deficient
tbar = rng.standard_normal(8)

x_hat = np.linalg.lstsq(E, tbar, rcond=None)[0]
obj = ComposedObjective(
    E=E,
    sigma=1.0,
    g_eval=lambda t: 0.5 * float((t - tbar) @ (t - tbar)),
    g_grad=lambda t: t - tbar,
    f_star=0.5 * float(np.sum((E @ x_hat - tbar) ** 2)),
)

mu = pl_constant(obj)
cert = check_pl(obj, mu, n_samples=500, radius=10.0, seed=1)
print(f"f(x) = ||Ex - t||^2 / 2 with a rank-deficient 8x5 factor")
print(f"  smallest nonzero singular value: {cert.sigma_min_nz:.4f}")
print(f"  certified constant mu = sigma * smin_nz^2 / 4 = {mu:.4f}")
print(f"  {cert.samples_checked} sampled points, worst slack {cert.worst_slack:.4f} -> "
      f"{'PASS' if cert.passed else 'FAIL'}")

L = float(np.linalg.eigvalsh(E.T @ E).max())
bad = check_pl(obj, 10 * L, n_samples=500, radius=10.0, seed=2)
print(f"\ninflating the constant to 10*L = {10 * L:.1f} is rejected: "
      f"passed = {bad.passed}, worst slack {bad.worst_slack:.1f}")
print(f"witness point found with f = {obj.f(bad.witness):.3f}, "
      f"||grad||^2 = {float(obj.grad(bad.witness) @ obj.grad(bad.witness)):.3f}")
