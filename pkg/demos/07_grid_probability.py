"""Sums of grid-valued random variables via padded convolution.

The mass matrix of a sum of independent variables on the nonnegative
integer grid is the padded convolution of the summands' mass matrices;
positive semidefiniteness of the mass matrices survives summation.  The
padded product also exhibits the two semi-infinite phenomena that the
fixed-shape ring truncates away.
"""

from fractions import Fraction

from juryconv import (
    ConvMatrix,
    GridDistribution,
    brute_force_sum_law,
    padded_power,
    psd_chain_check,
    semiinfinite_checks,
    sum_distribution,
)

half = Fraction(1, 2)
diag = GridDistribution.from_rows([[half, 0], [0, half]])

print("-- summing two copies of a diagonal coin ---------------------")
total = sum_distribution([diag, diag])
print(total.matrix)
print("mass:", sum(sum(row) for row in total.matrix.to_lists()))
print("matches outcome enumeration:",
      total.matrix == brute_force_sum_law([diag, diag]).matrix)

print("\n-- PSD chains persist under summation -------------------------")
rep = psd_chain_check(total, k_max=4)
for k, verdict in rep.verdicts:
    print(f"  leading {k}x{k} block: PSD={verdict.is_psd} "
          f"(min eig {verdict.min_eigenvalue:.3f})")

print("\n-- the diagonal unit walks under padded powers -----------------")
unit = ConvMatrix.rational([[0, 0], [0, 1]])
for n in (1, 2, 3, 4):
    p = padded_power(unit, n)
    spot = next((i, j) for (i, j) in p.indices() if p[i, j] != 0)
    print(f"  power {n}: window {p.shape}, unit at {spot}")

print("\n-- full semi-infinite report -----------------------------------")
report = semiinfinite_checks(cap=6)
print("  diagonal walk rows ok:", all(r["ok"] for r in report.diagonal_walk))
print("  non-annihilation rows ok:", all(r["ok"] for r in report.non_annihilation))
print("  all ok:", report.all_ok)
