"""Permutations of {0, ..., n-1} and the normalized Hamming metric.

A permutation is stored in word form: ``image[i]`` is where point ``i`` goes.
Composition is right-to-left throughout the library: ``(s * t)(i) = s(t(i))``,
i.e. the right factor acts first.  Every distance is an exact ``Fraction``
(number of differing points over the carrier size); floating point views are
derived from those, never the other way around.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0, ..., n-1} in word form.

    >>> Permutation((1, 2, 0)) * Permutation((1, 2, 0))
    Permutation(image=(2, 0, 1))
    """

    image: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.image, tuple):
            object.__setattr__(self, "image", tuple(self.image))
        n = len(self.image)
        if n == 0:
            raise ValueError("empty carrier")
        seen = [False] * n
        for x in self.image:
            if not isinstance(x, int) or not 0 <= x < n or seen[x]:
                raise ValueError(f"not a bijection of range({n}): {self.image}")
            seen[x] = True

    @property
    def degree(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, x in enumerate(self.image):
            inv[x] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.image))

    def fixed_points(self) -> int:
        return sum(1 for i, x in enumerate(self.image) if x == i)

    def distance(self, other: "Permutation") -> Fraction:
        return hamming(self, other)

    def agreement(self, other: "Permutation") -> Fraction:
        return agreement_fraction(self, other)

    def to_json(self) -> dict:
        return {"degree": self.degree, "image": list(self.image)}

    @classmethod
    def from_json(cls, data: dict) -> "Permutation":
        p = cls(tuple(data["image"]))
        if p.degree != data["degree"]:
            raise ValueError(f"degree field {data['degree']} does not match image of length {p.degree}")
        return p


def _check_degrees(s: Permutation, t: Permutation):
    if s.degree != t.degree:
        raise ValueError(f"carrier mismatch: degree {s.degree} vs {t.degree}")


def compose(s: Permutation, t: Permutation) -> Permutation:
    """Compose two permutations, right factor first: (s*t)(i) = s(t(i))."""
    _check_degrees(s, t)
    si = s.image
    return Permutation(tuple(si[x] for x in t.image))


def hamming(s: Permutation, t: Permutation) -> Fraction:
    """Fraction of points where s and t disagree.

    >>> hamming(Permutation((1, 0, 2)), Permutation.identity(3))
    Fraction(2, 3)
    """
    _check_degrees(s, t)
    differ = sum(1 for a, b in zip(s.image, t.image) if a != b)
    return Fraction(differ, s.degree)


def agreement_fraction(s: Permutation, t: Permutation) -> Fraction:
    """1 - hamming(s, t): the fraction of points where s and t agree."""
    _check_degrees(s, t)
    same = sum(1 for a, b in zip(s.image, t.image) if a == b)
    return Fraction(same, s.degree)


def random_permutation(degree: int, seed: int) -> Permutation:
    """Uniformly random permutation, deterministic for a fixed seed.

    Fisher-Yates shuffle driven by ``random.Random(seed)`` (Mersenne
    Twister), so the output is reproducible across runs.
    """
    return draw_permutation(degree, random.Random(seed))


def draw_permutation(degree: int, rng: random.Random) -> Permutation:
    """Like random_permutation but drawing from a caller-owned stream."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    points = list(range(degree))
    rng.shuffle(points)
    return Permutation(tuple(points))


def transposition(n: int, i: int, j: int) -> Permutation:
    if not (0 <= i < n and 0 <= j < n and i != j):
        raise ValueError(f"bad transposition ({i} {j}) on {n} points")
    img = list(range(n))
    img[i], img[j] = img[j], img[i]
    return Permutation(tuple(img))
