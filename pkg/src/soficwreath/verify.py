"""Executable certificates for the wreath construction.

Three layers of checks, all exact:

* ``check_almost_homomorphism``: a rule on the wreath product is close to
  multiplicative on a window whenever its two restrictions are close to
  multiplicative, mixed values split, and the base conjugation intertwines
  with the index shift.  The checker measures the four hypotheses (at eps/6)
  and the conclusion (at eps) independently and reports both.
* ``check_good_block_bound``: a certified base approximation loses at most a
  ``block_tolerance`` fraction of blocks: |good| >= (1 - tol) |B| whenever
  input_tolerance < block_tolerance / (4 w^2).
* ``verify_construction`` / ``detailed_reports``: the assembled rule is a
  sofic approximation on its target window, with per-pair defects, per
  element freeness margins, and the budget decomposition behind them.

Checks accept rule values that are either ``Permutation`` or ``CoordAction``;
both compose with ``*`` and measure with ``.distance``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .construct import Budget, GoodBlock, WreathApprox, compute_good_blocks
from .groups import WreathElement, WreathProduct
from .jsonutil import frac_to_json, frac_from_json
from .perm import Permutation
from .sofic import DefectReport, SoficApprox, require_sofic


def _worst(pairs):
    """Max of (defect, witness) with a deterministic witness; empty -> (0, None)."""
    worst, witness = Fraction(0), None
    for d, w in pairs:
        if d > worst or witness is None:
            worst, witness = d, w
    return worst, witness


@dataclass(frozen=True)
class BulletReport:
    defect: Fraction
    witness: Any
    threshold: Fraction

    @property
    def passed(self) -> bool:
        return self.defect < self.threshold

    def to_json(self, encode) -> dict:
        return {
            "defect": frac_to_json(self.defect),
            "witness": encode(self.witness) if self.witness is not None else None,
            "threshold": frac_to_json(self.threshold),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class AlmostHomReport:
    eps: Fraction
    lamp_mult: BulletReport
    base_mult: BulletReport
    split: BulletReport
    intertwine: BulletReport
    conclusion: BulletReport

    @property
    def hypotheses_pass(self) -> bool:
        return all(b.passed for b in (self.lamp_mult, self.base_mult, self.split, self.intertwine))

    def to_json(self, wreath: WreathProduct) -> dict:
        def enc_pair(w):
            return [wreath.encode(u) for u in w]

        def enc_lamp_pair(w):
            return [wreath.lamps.encode(f) for f in w]

        def enc_base_pair(w):
            return [wreath.base.encode(h) for h in w]

        def enc_mixed(w):
            return [wreath.lamps.encode(w[0]), wreath.base.encode(w[1])]

        return {
            "eps": frac_to_json(self.eps),
            "lamp_mult": self.lamp_mult.to_json(enc_lamp_pair),
            "base_mult": self.base_mult.to_json(enc_base_pair),
            "split": self.split.to_json(enc_mixed),
            "intertwine": self.intertwine.to_json(enc_mixed),
            "hypotheses_pass": self.hypotheses_pass,
            "conclusion": self.conclusion.to_json(enc_pair),
        }


def check_almost_homomorphism(
    rule: Callable[[WreathElement], Any],
    wreath: WreathProduct,
    closure,
    lamp_window,
    mover_window,
    eps,
) -> AlmostHomReport:
    """Measure the four splitting hypotheses and, independently, the
    multiplicativity of the rule on the closure window."""
    eps = Fraction(eps)
    lamps, base = wreath.lamps, wreath.base
    lamp_els = tuple(sorted(set(lamp_window), key=lamps.key))
    mover_els = base.sort(set(mover_window))
    closure_els = wreath.sort(set(closure))

    def lamp_only(f):
        return rule(WreathElement(f, base.identity()))

    def base_only(h):
        return rule(WreathElement(lamps.identity(), h))

    lamp_mult = _worst(
        (
            (lamp_only(f) * lamp_only(g)).distance(lamp_only(lamps.mul(f, g))),
            (f, g),
        )
        for f in lamp_els
        for g in lamp_els
    )
    base_mult = _worst(
        (
            (base_only(h) * base_only(k)).distance(base_only(base.mul(h, k))),
            (h, k),
        )
        for h in mover_els
        for k in mover_els
    )
    split = _worst(
        (rule(WreathElement(f, h)).distance(lamp_only(f) * base_only(h)), (f, h))
        for f in lamp_els
        for h in mover_els
    )
    intertwine = _worst(
        (
            (base_only(h) * lamp_only(f)).distance(lamp_only(lamps.shift(h, f)) * base_only(h)),
            (f, h),
        )
        for f in lamp_els
        for h in mover_els
    )
    conclusion = _worst(
        ((rule(u) * rule(v)).distance(rule(wreath.mul(u, v))), (u, v))
        for u in closure_els
        for v in closure_els
    )

    sixth = eps / 6
    return AlmostHomReport(
        eps=eps,
        lamp_mult=BulletReport(*lamp_mult, threshold=sixth),
        base_mult=BulletReport(*base_mult, threshold=sixth),
        split=BulletReport(*split, threshold=sixth),
        intertwine=BulletReport(*intertwine, threshold=sixth),
        conclusion=BulletReport(*conclusion, threshold=eps),
    )


@dataclass(frozen=True)
class GoodBlockReport:
    carrier_size: int
    block_tolerance: Fraction
    input_tolerance: Fraction
    block: GoodBlock
    certificate: DefectReport

    @property
    def bound_pass(self) -> bool:
        return len(self.block.good) >= (1 - self.block_tolerance) * self.carrier_size

    def to_json(self) -> dict:
        return {
            "carrier_size": self.carrier_size,
            "block_tolerance": frac_to_json(self.block_tolerance),
            "input_tolerance": frac_to_json(self.input_tolerance),
            "injective": len(self.block.injective),
            "compatible": len(self.block.compatible),
            "good": len(self.block.good),
            "bound_pass": self.bound_pass,
        }


def check_good_block_bound(
    sigma_B: SoficApprox, positions, block_tolerance, input_tolerance
) -> GoodBlockReport:
    """Certify sigma_B on the derived base window, then check the good-block
    count against (1 - block_tolerance) |B|."""
    block_tolerance = Fraction(block_tolerance)
    input_tolerance = Fraction(input_tolerance)
    base = sigma_B.group
    positions = base.sort(set(positions))
    w2 = len(positions) ** 2
    if not input_tolerance < block_tolerance / (4 * w2):
        raise ValueError(
            f"input tolerance {input_tolerance} not < block tolerance/(4 w^2) = {block_tolerance / (4 * w2)}"
        )
    base_window = set(positions)
    base_window |= {base.inv(h) for h in positions}
    base_window |= {base.mul(base.inv(h1), h2) for h1 in positions for h2 in positions}
    certificate = require_sofic(sigma_B, base_window, input_tolerance, "base approximation")
    block = compute_good_blocks(sigma_B, positions)
    return GoodBlockReport(
        carrier_size=sigma_B.carrier_size,
        block_tolerance=block_tolerance,
        input_tolerance=input_tolerance,
        block=block,
        certificate=certificate,
    )


# ---------------------------------------------------------------------------
# certificates for the assembled construction


@dataclass(frozen=True)
class FreenessEntry:
    element: WreathElement
    margin: Fraction  # distance of the rule value from the identity
    base_margin: Fraction | None  # d(sigma_B(h), id) when the base part moves
    anchor_position: Any  # chosen support position when only lamps act
    fixed_fraction: Fraction | None
    bound: Fraction | None  # block_tolerance + input_tolerance

    @property
    def base_dominated(self) -> bool | None:
        if self.base_margin is None:
            return None
        return self.margin >= self.base_margin

    @property
    def within_bound(self) -> bool | None:
        if self.fixed_fraction is None:
            return None
        return self.fixed_fraction <= self.bound

    def to_json(self, wreath: WreathProduct) -> dict:
        return {
            "element": wreath.encode(self.element),
            "margin": frac_to_json(self.margin),
            "base_margin": frac_to_json(self.base_margin) if self.base_margin is not None else None,
            "anchor_position": wreath.base.encode(self.anchor_position)
            if self.anchor_position is not None
            else None,
            "fixed_fraction": frac_to_json(self.fixed_fraction)
            if self.fixed_fraction is not None
            else None,
            "bound": frac_to_json(self.bound) if self.bound is not None else None,
            "base_dominated": self.base_dominated,
            "within_bound": self.within_bound,
        }


@dataclass(frozen=True)
class MultiplicativityReport:
    almost_hom: AlmostHomReport
    lamp_bound: Fraction  # block_tolerance + window_size * input_tolerance
    base_bound: Fraction  # input_tolerance
    split_bound: Fraction  # exactly zero by construction
    intertwine_bound: Fraction  # 2 * block_tolerance

    @property
    def within_bounds(self) -> bool:
        a = self.almost_hom
        return (
            a.lamp_mult.defect <= self.lamp_bound
            and a.base_mult.defect <= self.base_bound
            and a.split.defect == self.split_bound == 0
            and a.intertwine.defect <= self.intertwine_bound
        )

    def to_json(self, wreath: WreathProduct) -> dict:
        return {
            "almost_hom": self.almost_hom.to_json(wreath),
            "bounds": {
                "lamp": frac_to_json(self.lamp_bound),
                "base": frac_to_json(self.base_bound),
                "split": frac_to_json(self.split_bound),
                "intertwine": frac_to_json(self.intertwine_bound),
            },
            "within_bounds": self.within_bounds,
        }


@dataclass(frozen=True)
class DetailedReport:
    multiplicativity: MultiplicativityReport
    freeness: tuple[FreenessEntry, ...]

    def to_json(self, wreath: WreathProduct) -> dict:
        return {
            "multiplicativity": self.multiplicativity.to_json(wreath),
            "freeness": [e.to_json(wreath) for e in self.freeness],
        }


@dataclass(frozen=True)
class Certificate:
    eps: Fraction
    window: tuple[WreathElement, ...]
    identity_pass: bool
    mult_defects: tuple[tuple[WreathElement, WreathElement, Fraction], ...]
    free_margins: tuple[tuple[WreathElement, Fraction], ...]
    budget: Budget
    details: DetailedReport
    seed: int | None = None

    @property
    def worst_defect(self) -> tuple[Fraction, Any]:
        return _worst((d, (u, v)) for u, v, d in self.mult_defects)

    @property
    def min_margin(self) -> tuple[Fraction | None, Any]:
        margin, witness = None, None
        for u, m in self.free_margins:
            if margin is None or m < margin:
                margin, witness = m, u
        return margin, witness

    @property
    def mult_pass(self) -> bool:
        return self.worst_defect[0] < self.eps

    @property
    def free_pass(self) -> bool:
        margin, _ = self.min_margin
        return margin is None or margin > 1 - self.eps

    @property
    def passed(self) -> bool:
        return self.identity_pass and self.mult_pass and self.free_pass

    def violations(self, wreath: WreathProduct) -> list[str]:
        out = []
        if not self.identity_pass:
            out.append("rule(identity) is not the identity")
        for u, v, d in self.mult_defects:
            if d >= self.eps:
                out.append(f"multiplicative defect {d} at pair ({wreath.encode(u)}, {wreath.encode(v)})")
        for u, m in self.free_margins:
            if m <= 1 - self.eps:
                out.append(f"freeness margin {m} at {wreath.encode(u)}")
        return out

    def to_json(self, wreath: WreathProduct) -> dict:
        return {
            "kind": "sofic-certificate",
            "format": 1,
            "group": wreath.descriptor(),
            "window": [wreath.encode(u) for u in self.window],
            "eps": frac_to_json(self.eps),
            "identity_pass": self.identity_pass,
            "mult_defects": [
                {"pair": [wreath.encode(u), wreath.encode(v)], "defect": frac_to_json(d)}
                for u, v, d in self.mult_defects
            ],
            "free_margins": [
                {"element": wreath.encode(u), "margin": frac_to_json(m)}
                for u, m in self.free_margins
            ],
            "budget": self.budget.to_json(),
            "details": self.details.to_json(wreath),
            "pass": self.passed,
            "seed": self.seed,
        }


def detailed_reports(approx: WreathApprox, targets=None, eps=None) -> DetailedReport:
    """Budget decomposition: the four splitting defects with their structural
    bounds, and per-element freeness decompositions."""
    wreath = approx.wreath
    windows = approx.windows
    budget = approx.budget
    targets = windows.targets if targets is None else wreath.sort(set(targets))
    eps = budget.eps if eps is None else Fraction(eps)

    almost = check_almost_homomorphism(
        approx.rule, wreath, windows.closure, windows.lamp_window, windows.mover_window, eps
    )
    mult = MultiplicativityReport(
        almost_hom=almost,
        lamp_bound=budget.block_tolerance + len(windows.positions) * budget.input_tolerance,
        base_bound=budget.input_tolerance,
        split_bound=Fraction(0),
        intertwine_bound=2 * budget.block_tolerance,
    )

    ident = approx.identity_value()
    entries = []
    for u in targets:
        if u == wreath.identity():
            continue
        margin = approx.rule(u).distance(ident)
        if not wreath.base.is_identity(u.right):
            base_margin = approx.sigma_B.evaluate(u.right).distance(
                Permutation.identity(approx.b_size)
            )
            entries.append(FreenessEntry(u, margin, base_margin, None, None, None))
        else:
            support = u.left.support()
            anchor = min(support, key=wreath.base.key) if support else None
            entries.append(
                FreenessEntry(
                    u,
                    margin,
                    None,
                    anchor,
                    approx.rule(u).fixed_fraction(),
                    budget.block_tolerance + budget.input_tolerance,
                )
            )
    return DetailedReport(multiplicativity=mult, freeness=tuple(entries))


def verify_construction(approx: WreathApprox, targets=None, eps=None) -> Certificate:
    """Exhaustive exact certificate of the assembled rule on its targets."""
    wreath = approx.wreath
    targets = approx.windows.targets if targets is None else wreath.sort(set(targets))
    eps = approx.budget.eps if eps is None else Fraction(eps)

    identity_pass = approx.rule(wreath.identity()) == approx.identity_value()
    mult_defects = tuple(
        (u, v, (approx.rule(u) * approx.rule(v)).distance(approx.rule(wreath.mul(u, v))))
        for u in targets
        for v in targets
    )
    ident = approx.identity_value()
    free_margins = tuple(
        (u, approx.rule(u).distance(ident)) for u in targets if u != wreath.identity()
    )
    return Certificate(
        eps=eps,
        window=targets,
        identity_pass=identity_pass,
        mult_defects=mult_defects,
        free_margins=free_margins,
        budget=approx.budget,
        details=detailed_reports(approx, targets, eps),
    )


def certificate_from_json(data: dict) -> dict:
    """Light validation for stored certificates (used by the report command)."""
    if data.get("kind") != "sofic-certificate" or data.get("format") != 1:
        raise ValueError("not a sofic certificate")
    frac_from_json(data["eps"])  # validates shape
    return data
