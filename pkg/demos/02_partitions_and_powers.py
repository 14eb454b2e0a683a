"""Index-multiset partitions and the entrywise power formula.

Entry (i, j) of the kappa-th convolution power expands as a multinomial
sum over multisets of kappa grid indices with vector sum (i, j).  The
punctured variant (origin excluded) carries the coefficients of the
functional calculus.
"""

from juryconv import (
    ConvMatrix,
    IndexGrid,
    conv_power_naive,
    conv_power_partition,
    elementary_sum,
    enumerate_partitions,
)

grid = IndexGrid(3, 3)

print("-- multisets of 3 indices summing to (2, 2), full grid -----")
for part in enumerate_partitions(grid, 3, (2, 2), exclude_origin=False):
    print(f"  {part}   weight 1/prod(c!) = {part.weight}")

print("\n-- punctured grid: every element moves the target ---------")
for ell in range(1, 5):
    parts = enumerate_partitions(grid, ell, (2, 2), exclude_origin=True)
    print(f"  ell={ell}: {len(parts)} multisets")

A = ConvMatrix.rational([[1, 2, 1], [3, 1, 0], [2, 0, 1]])
print("\n-- elementary sums E_ell(A, i, j) --------------------------")
print("A =")
print(A)
for ell in range(1, 5):
    print(f"  E_{ell}(A, 2, 2) = {elementary_sum(A, ell, (2, 2))}")
print("  (E_ell vanishes once ell exceeds i+j: "
      f"E_5 = {elementary_sum(A, 5, (2, 2)) if 5 <= 4 else 0})")

print("\n-- power formula against the repeated product --------------")
for kappa in range(1, 6):
    match = conv_power_partition(A, kappa) == conv_power_naive(A, kappa)
    print(f"  kappa={kappa}: partition formula == naive product: {match}")
