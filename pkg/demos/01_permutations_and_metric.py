"""Permutations and the normalized Hamming metric.

Everything downstream is measured with this metric, so this demo shows the
conventions once: word form, right-to-left composition, and exact rational
distances.
"""
from fractions import Fraction

from soficwreath import Permutation, compose, hamming, random_permutation

# A permutation is its image word: image[i] says where point i goes.
three_cycle = Permutation((1, 2, 0))
swap = Permutation((1, 0, 2))
print("three-cycle:", three_cycle.image, " swap:", swap.image)

# Composition applies the right factor first: (s * t)(i) = s(t(i)).
print("three_cycle * swap:", (three_cycle * swap).image)
print("swap * three_cycle:", (swap * three_cycle).image)
print("a three-cycle applied twice:", compose(three_cycle, three_cycle).image)

# Distances are exact fractions of disagreeing points.
identity = Permutation.identity(3)
print("d(swap, id) =", hamming(swap, identity))          # 2/3: two points move
print("d(three_cycle, id) =", hamming(three_cycle, identity))  # 1: no fixed point
print("d(three_cycle, inverse) =", hamming(three_cycle, three_cycle.inverse()))

# The metric is bi-invariant: translating both arguments changes nothing.
u = random_permutation(3, seed=5)
lhs = hamming(u * three_cycle, u * swap)
rhs = hamming(three_cycle * u, swap * u)
print("bi-invariance:", lhs, "==", hamming(three_cycle, swap), "==", rhs)

# Exactness matters: these checks are =, not approximately-equal.
assert lhs == hamming(three_cycle, swap) == rhs == Fraction(2, 3)
print("all exact")
