"""Sofic approximations: windowed rules group -> Sym(carrier) and their checkers.

A ``SoficApprox`` maps each element of an explicit finite window to a
permutation of a common carrier.  Evaluating outside the window is an error,
never a silent identity; the one place the theory extends by the identity is
the lamp action in ``construct`` and it does so explicitly.

The three checkers measure, with exact rationals, how far a rule is from a
free action by a homomorphism on a given window:

* multiplicative: max over pairs of d(rule(g) rule(h), rule(gh)) < eps;
* free: min over non-identity g of d(rule(g), id) > 1 - eps;
* sofic: both of the above plus rule(1) = id.

All inequalities are strict and compared as exact ``Fraction`` values.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .groups import Group, FreeGroup, group_from_descriptor
from .jsonutil import frac_to_json
from .perm import Permutation, draw_permutation, transposition


class WindowViolationError(ValueError):
    """An evaluation or check needed an element outside the declared window."""


class CertificateError(RuntimeError):
    """An approximation failed a certificate it was required to hold."""

    def __init__(self, message: str, report: "DefectReport | None" = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class SoficApprox:
    group: Group
    carrier_size: int
    window: frozenset
    rule: Mapping[Any, Permutation]

    def __post_init__(self):
        if set(self.rule) != set(self.window):
            raise ValueError("rule must be defined exactly on the window")
        for g, p in self.rule.items():
            if p.degree != self.carrier_size:
                raise ValueError(f"carrier mismatch: rule({g!r}) has degree {p.degree}, expected {self.carrier_size}")
        ident = self.group.identity()
        if ident in self.window and not self.rule[ident].is_identity():
            raise ValueError("rule(identity) must be the identity permutation")

    def evaluate(self, g) -> Permutation:
        if g not in self.window:
            raise WindowViolationError(f"element {g!r} outside the declared window")
        return self.rule[g]

    def sorted_window(self) -> tuple:
        return self.group.sort(self.window)

    def to_json(self) -> dict:
        window = self.sorted_window()
        return {
            "group": self.group.descriptor(),
            "carrier_size": self.carrier_size,
            "window": [self.group.encode(g) for g in window],
            "rule": [[self.group.encode(g), self.evaluate(g).to_json()] for g in window],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SoficApprox":
        group = group_from_descriptor(data["group"])
        rule = {group.decode(k): Permutation.from_json(p) for k, p in data["rule"]}
        window = frozenset(group.decode(k) for k in data["window"])
        return cls(group, data["carrier_size"], window, rule)


@dataclass(frozen=True)
class DefectReport:
    """Exact evidence for (window, eps) checks, with witnesses.

    Fields for a condition that was not checked stay ``None``.  The
    multiplicative defect is the worst pair distance, the freeness margin the
    smallest distance to the identity over non-identity elements.
    """

    eps: Fraction
    window: tuple
    mult_defect: Fraction | None = None
    mult_witness: tuple | None = None
    mult_pass: bool | None = None
    free_margin: Fraction | None = None
    free_witness: Any = None
    free_pass: bool | None = None
    identity_pass: bool | None = None

    @property
    def passed(self) -> bool:
        flags = [self.mult_pass, self.free_pass, self.identity_pass]
        return all(f for f in flags if f is not None)

    def to_json(self, group: Group) -> dict:
        def opt_frac(x):
            return frac_to_json(x) if x is not None else None

        return {
            "kind": "defect-report",
            "eps": frac_to_json(self.eps),
            "window": [group.encode(g) for g in self.window],
            "mult": None
            if self.mult_pass is None
            else {
                "defect": opt_frac(self.mult_defect),
                "witness": [group.encode(g) for g in self.mult_witness] if self.mult_witness else None,
                "pass": self.mult_pass,
            },
            "free": None
            if self.free_pass is None
            else {
                "margin": opt_frac(self.free_margin),
                "witness": group.encode(self.free_witness) if self.free_witness is not None else None,
                "pass": self.free_pass,
            },
            "identity_pass": self.identity_pass,
            "pass": self.passed,
        }


def _require_window(s: SoficApprox, needed, what: str):
    missing = [g for g in needed if g not in s.window]
    if missing:
        raise WindowViolationError(f"{what} needs elements outside the window: {missing[:5]!r}")


def is_multiplicative(s: SoficApprox, window, eps: Fraction) -> DefectReport:
    """Worst defect d(rule(g) rule(h), rule(gh)) over the window; pass iff < eps."""
    eps = Fraction(eps)
    els = s.group.sort(window)
    _require_window(s, els, "multiplicativity check")
    products = [(g, h, s.group.mul(g, h)) for g in els for h in els]
    _require_window(s, (gh for _, _, gh in products), "multiplicativity check (products)")
    worst, witness = Fraction(0), None
    for g, h, gh in products:
        d = (s.evaluate(g) * s.evaluate(h)).distance(s.evaluate(gh))
        if witness is None or d > worst:
            worst, witness = d, (g, h)
    return DefectReport(
        eps=eps,
        window=els,
        mult_defect=worst,
        mult_witness=witness,
        mult_pass=worst < eps,
    )


def is_free(s: SoficApprox, window, eps: Fraction) -> DefectReport:
    """Smallest distance to the identity over non-identity window elements.

    An empty range (window contains at most the identity) passes vacuously.
    """
    eps = Fraction(eps)
    els = s.group.sort(window)
    _require_window(s, els, "freeness check")
    ident = Permutation.identity(s.carrier_size)
    margin, witness = None, None
    for g in els:
        if s.group.is_identity(g):
            continue
        d = s.evaluate(g).distance(ident)
        if margin is None or d < margin:
            margin, witness = d, g
    ok = True if margin is None else margin > 1 - eps
    return DefectReport(eps=eps, window=els, free_margin=margin, free_witness=witness, free_pass=ok)


def is_sofic_approx(s: SoficApprox, window, eps: Fraction) -> DefectReport:
    """Conjunction: multiplicative, free, and rule(1) = id."""
    eps = Fraction(eps)
    ident = s.group.identity()
    if ident not in s.window:
        raise WindowViolationError("sofic check needs the identity inside the window")
    mult = is_multiplicative(s, window, eps)
    freeness = is_free(s, window, eps)
    return DefectReport(
        eps=eps,
        window=mult.window,
        mult_defect=mult.mult_defect,
        mult_witness=mult.mult_witness,
        mult_pass=mult.mult_pass,
        free_margin=freeness.free_margin,
        free_witness=freeness.free_witness,
        free_pass=freeness.free_pass,
        identity_pass=s.evaluate(ident).is_identity(),
    )


def require_sofic(s: SoficApprox, window, eps: Fraction, label: str) -> DefectReport:
    report = is_sofic_approx(s, window, eps)
    if not report.passed:
        parts = []
        if report.mult_pass is False:
            parts.append(f"multiplicative defect {report.mult_defect} at pair {report.mult_witness!r}")
        if report.free_pass is False:
            parts.append(f"freeness margin {report.free_margin} at {report.free_witness!r}")
        if report.identity_pass is False:
            parts.append("rule(identity) is not the identity")
        raise CertificateError(f"{label} fails its ({len(report.window)}-element window, {eps}) certificate: " + "; ".join(parts), report)
    return report


# ---------------------------------------------------------------------------
# generators


def regular_rep(group: Group) -> SoficApprox:
    """Left multiplication of a finite group on itself, in key order."""
    els = group.sort(group.elements())
    index = {g: i for i, g in enumerate(els)}
    rule = {g: Permutation(tuple(index[group.mul(g, x)] for x in els)) for g in els}
    return SoficApprox(group, len(els), frozenset(els), rule)


def cyclic_quotient(n: int, window=None) -> SoficApprox:
    """The integers acting on n points by k -> shift by k mod n."""
    if n < 1:
        raise ValueError("carrier size must be >= 1")
    if window is None:
        window = range(-(n - 1), n)
    window = frozenset(window)
    rule = {k: Permutation(tuple((i + k) % n for i in range(n))) for k in window}
    from .groups import integers

    return SoficApprox(integers(), n, window, rule)


def quotient_by_images(group: FreeGroup, images, window) -> SoficApprox:
    """Evaluate reduced words in one assigned permutation per generator."""
    images = list(images)
    if len(images) != group.rank:
        raise ValueError(f"need {group.rank} images, got {len(images)}")
    degree = images[0].degree
    for p in images:
        if p.degree != degree:
            raise ValueError("carrier mismatch: images must share a degree")
    inverses = [p.inverse() for p in images]

    def value(word):
        out = Permutation.identity(degree)
        for letter in word:
            out = out * (images[letter - 1] if letter > 0 else inverses[-letter - 1])
        return out

    window = frozenset(group.decode(list(w)) for w in window)
    return SoficApprox(group, degree, window, {w: value(w) for w in window})


def perturb(s: SoficApprox, rate, seed: int) -> SoficApprox:
    """Post-compose each non-identity rule value, with probability ``rate``,
    with one random transposition.

    Each hit moves that value by exactly 2/carrier in the metric.  The value
    at the group identity is never touched, preserving rule(1) = id.
    """
    rate = Fraction(rate)
    if not 0 <= rate <= 1:
        raise ValueError("rate must lie in [0, 1]")
    rng = random.Random(seed)
    rule = {}
    for g in s.sorted_window():
        p = s.evaluate(g)
        if not s.group.is_identity(g) and s.carrier_size >= 2 and rng.random() < rate:
            i, j = rng.sample(range(s.carrier_size), 2)
            p = transposition(s.carrier_size, i, j) * p
        rule[g] = p
    return SoficApprox(s.group, s.carrier_size, s.window, rule)


def random_rule(group: Group, window, degree: int, seed: int) -> SoficApprox:
    """Independent uniform permutation per window element (identity stays id)."""
    rng = random.Random(seed)
    rule = {}
    for g in group.sort(window):
        rule[g] = (
            Permutation.identity(degree) if group.is_identity(g) else draw_permutation(degree, rng)
        )
    return SoficApprox(group, degree, frozenset(window), rule)
