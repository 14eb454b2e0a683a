"""Bruhat order read off convolution rank matrices.

Convolving a permutation matrix with the all-ones matrix counts ones in
leading blocks.  Entrywise comparison of those counts -- direction
reversed -- is exactly the Bruhat order, checked here against an
independent transposition-cover oracle.
"""

import itertools

from juryconv import (
    Permutation,
    bruhat_leq_conv,
    bruhat_leq_oracle,
    rank_matrix,
    verify_equivalences,
)

ident = Permutation.identity(3)
rev = Permutation.reversal(3)

print("rank matrix of the identity:")
for row in rank_matrix(ident).to_lists():
    print(" ", row)
print("rank matrix of the reversal (longest element):")
for row in rank_matrix(rev).to_lists():
    print(" ", row)
print("identity <= reversal:", bruhat_leq_conv(ident, rev))
print("reversal <= identity:", bruhat_leq_conv(rev, ident))

print("\n-- an incomparable pair -------------------------------------")
a, b = Permutation.of([1, 3, 2]), Permutation.of([2, 1, 3])
print(f"  {a} vs {b}: "
      f"leq={bruhat_leq_conv(a, b)}, geq={bruhat_leq_conv(b, a)}")

print("\n-- criterion vs cover-digraph oracle, all of S_4 -------------")
perms = [Permutation.of(p) for p in itertools.permutations(range(1, 5))]
disagreements = sum(
    bruhat_leq_conv(s, t) != bruhat_leq_oracle(s, t)
    for s in perms for t in perms
)
print(f"  {len(perms) ** 2} ordered pairs, {disagreements} disagreements")

print("\n-- four equivalent formulations -------------------------------")
rep = verify_equivalences(Permutation.of([2, 1, 4, 3]), Permutation.of([3, 1, 4, 2]))
for row in rep.rows:
    print(f"  {row['row']:16s} oracle={row['oracle']} criterion={row['rank_criterion']}")
print("  counting identities hold:", rep.identities_ok)
print("  all consistent:", rep.all_consistent)
