"""Tour of the convolution ring: the product, identity, and inverses.

Fixed-shape matrices form a commutative unital ring under entrywise
addition and truncated 2-D convolution.  This script walks the basic
algebra on a 2x2 example, exactly, over rationals.
"""

from fractions import Fraction

from juryconv import (
    ConvMatrix,
    conv,
    conv_identity,
    conv_inverse_ch,
    conv_inverse_recursive,
    conv_power_naive,
    scale,
    transpose,
)

A = ConvMatrix.rational([[1, 2], [3, 4]])
B = ConvMatrix.rational([[5, 6], [7, 8]])

print("A =")
print(A)
print("\nB =")
print(B)

print("\n-- the product ------------------------------------------")
print("A <> B  (entry (i,j) sums a[l,k] b[i-l,j-k] over l<=i, k<=j):")
print(conv(A, B))
print("\ncommutes:", conv(A, B) == conv(B, A))

I = conv_identity(2, 2)
print("\nidentity element (unit at the origin):")
print(I)
print("I <> A == A:", conv(I, A) == A)

print("\n-- powers ------------------------------------------------")
print("A^<>2:")
print(conv_power_naive(A, 2))

print("\n-- inverses ----------------------------------------------")
inv_rec = conv_inverse_recursive(A)
inv_ch = conv_inverse_ch(A)
print("back-substitution route:")
print(inv_rec)
print("closed-form route (from the degree-3 annihilator):")
print(inv_ch)
print("routes agree exactly:", inv_rec == inv_ch)
print("A <> A^-1 == I:", conv(A, inv_rec) == I)

print("\nproduct rule (A <> B)^-1 == A^-1 <> B^-1:",
      conv_inverse_recursive(conv(A, B)) == conv(inv_rec, conv_inverse_recursive(B)))

print("\n-- compatibilities ---------------------------------------")
alpha = Fraction(3, 7)
print("scalar:", scale(alpha, conv(A, B)) == conv(scale(alpha, A), B))
print("transpose:", transpose(conv(A, B)) == conv(transpose(A), transpose(B)))
