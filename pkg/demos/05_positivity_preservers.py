"""Positivity experiments: closure, preservers, and counterexamples.

Convolution preserves the PSD cone.  The functional transforms preserve
it exactly for absolutely monotone functions; fractional powers behave
like the entrywise theory (clean at n=2 for alpha >= 0, breakable below
n-2 otherwise), and the step-size transform can leave the cone at large
steps even for a square.
"""

from juryconv import (
    FunctionSpec,
    Interval,
    fractional_power_study,
    horn_witness,
    jury_closure_test,
    preserver_test,
    schoenberg_h_counterexample,
)

print("-- PSD closure under convolution ----------------------------")
for n in (2, 4, 6):
    rep = jury_closure_test(n, trials=100, rng_seed=1)
    print(f"  n={n}: {rep.trials} sampled pairs, {len(rep.violations)} violations, "
          f"worst min-eig {rep.min_observed_eig:.2e}")

print("\n-- exp transform preserves the cone --------------------------")
for n in (2, 3, 5):
    rep = preserver_test(FunctionSpec.exp(), n, Interval(1.0),
                         mode="smooth", trials=100, rng_seed=2)
    print(f"  n={n}: {len(rep.violations)} violations")

print("\n-- the diagonal-plus-ones witness ----------------------------")
w = horn_witness(3, FunctionSpec.power(0.5), x=1.0, eps=0.01)
print("  sqrt transform diagonal:", [f"{d:.4f}" for d in w.diagonal])
print(f"  min eigenvalue {w.verdict.min_eigenvalue:.4f} -> left the cone")

print("\n-- large-step counterexample for x^2 -------------------------")
cx = schoenberg_h_counterexample()
print("  stepped transform at h=2 on the all-ones matrix:")
print(cx.stepped)
print(f"  determinant = {cx.determinant} (exact), PSD: {cx.verdict.is_psd}")
print(f"  strictly definite contrast at h={cx.contrast_small_h}: "
      f"PSD {cx.contrast_small_verdict.is_psd}; at h={cx.contrast_large_h}: "
      f"PSD {cx.contrast_large_verdict.is_psd}")

print("\n-- fractional powers -----------------------------------------")
study = fractional_power_study(2, [0.3, 1.7, 2.5, -0.5], Interval(1.0),
                               trials=200, rng_seed=3)
for row in study.rows:
    print(f"  n=2 alpha={row['alpha']:+.1f}: violations={row['violations']}, "
          f"expected={row['expected_violation']}")
study3 = fractional_power_study(3, [0.5], Interval(1.0), trials=50, rng_seed=3)
row = study3.rows[0]
print(f"  n=3 alpha=+0.5: witness min-eig "
      f"{row['horn_witness']['min_eig']:.4f} "
      f"(certified: {row['horn_witness']['certified_violation']})")
