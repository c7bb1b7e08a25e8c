"""Assemble a wreath-product approximation from lamp and base approximations.

Given approximations sigma_A of the lamp group on carrier A and sigma_B of
the base group on carrier B, the combined rule acts on A^B x B:

* the base element moves the block: (a, b) -> (a, sigma_B(h) b);
* a lamp configuration f acts at each good block b by rewriting, for every
  position x in its support, the coordinate sigma_B(x)^{-1} b with
  sigma_A(f(x)).

Anchoring coordinates at the *inverse* image sigma_B(x)^{-1} b is what makes
the construction compatible with the index-shift action: moving the block by
h carries the anchor of position x at b to the anchor of position h x at
sigma_B(h) b, exactly where the shifted configuration writes its value.  The
good-block conditions below are stated for the same inverse maps so that, on
a good block, the anchors of distinct positions never collide and anchors
compose with the base rule.

Everything is driven by window sets derived from the finite target set:
the closure adds the identity and inverses; the lamp/mover windows collect
projections and their shifts; the positions window collects every support a
shifted lamp configuration can occupy; the lamp-value and base windows are
what the two input approximations must certify.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bigperm import CoordAction, coord_action, identity_action
from .groups import FinSuppMap, WreathElement, WreathProduct, group_from_descriptor
from .jsonutil import frac_to_json, frac_from_json
from .sofic import (
    CertificateError,
    DefectReport,
    SoficApprox,
    WindowViolationError,
    require_sofic,
)


@dataclass(frozen=True)
class WindowSets:
    """The finite windows derived from a target set of wreath elements.

    All fields are tuples sorted by the relevant group key, so enumeration
    order (in particular the order of the positions window, which fixes the
    factor order of lamp products) is deterministic.
    """

    targets: tuple[WreathElement, ...]
    closure: tuple[WreathElement, ...]  # targets + identity + inverses
    lamp_window: tuple[FinSuppMap, ...]  # shifted lamp projections
    mover_window: tuple  # base projections of the closure
    positions: tuple  # base elements whose blocks lamps may touch
    lamp_values: tuple  # lamp-group window sigma_A must certify
    base_window: tuple  # base-group window sigma_B must certify


def derive_windows(wreath: WreathProduct, targets) -> WindowSets:
    """Compute every window the construction and its certificates need."""
    targets = wreath.sort(set(targets))
    if not targets:
        raise ValueError("target set must be nonempty")
    base, lamps = wreath.base, wreath.lamps

    closure = set(targets) | {wreath.identity()} | {wreath.inv(u) for u in targets}
    mover = {u.right for u in closure}
    lamp_proj = {u.left for u in closure}
    lamp_window = {lamps.shift(h, f) for h in mover | {base.identity()} for f in lamp_proj}

    positions = set(mover)
    for f in lamp_window:
        for h in mover:
            positions.update(base.mul(h, x) for x in f.support())

    lamp_values = {g for f in lamp_window for _, g in f.entries}
    lamp_values.add(wreath.lamp.identity())  # freeness bookkeeping needs rule(1) = id certified

    base_window = {base.mul(base.inv(h1), h2) for h1 in positions for h2 in positions}
    base_window |= positions | {base.inv(h) for h in positions}

    windows = WindowSets(
        targets=targets,
        closure=wreath.sort(closure),
        lamp_window=tuple(sorted(lamp_window, key=lamps.key)),
        mover_window=base.sort(mover),
        positions=base.sort(positions),
        lamp_values=wreath.lamp.sort(lamp_values),
        base_window=base.sort(base_window),
    )
    _check_window_invariants(wreath, windows)
    return windows


def _check_window_invariants(wreath: WreathProduct, w: WindowSets):
    base = wreath.base
    positions = set(w.positions)
    if base.identity() not in positions:
        raise AssertionError("positions window must contain the identity")
    base_window = set(w.base_window)
    inverses = {base.inv(h) for h in positions}
    quotients = {base.mul(base.inv(h1), h2) for h1 in positions for h2 in positions}
    if not positions | inverses | quotients <= base_window:
        raise AssertionError("base window must contain positions, inverses, and quotients")
    for f in w.lamp_window:
        for h in w.mover_window:
            if not {base.mul(h, x) for x in f.support()} <= positions:
                raise AssertionError("positions window must cover every shifted support")


@dataclass(frozen=True)
class Budget:
    """Tolerances: the target eps, the good-block loss, and the input grade.

    The invariants keep each derived tolerance strictly inside its allowed
    range: block_tolerance < eps/12, input_tolerance < eps/(48 w^2) and
    < block_tolerance/(4 w^2), where w is the positions-window size.
    """

    eps: Fraction
    block_tolerance: Fraction
    input_tolerance: Fraction
    window_size: int

    def __post_init__(self):
        w2 = Fraction(self.window_size**2)
        if not (self.eps > 0 and self.block_tolerance > 0 and self.input_tolerance > 0):
            raise ValueError("tolerances must be positive")
        if not self.block_tolerance < self.eps / 12:
            raise ValueError(f"block tolerance {self.block_tolerance} not < eps/12")
        if not self.input_tolerance < self.eps / (48 * w2):
            raise ValueError(f"input tolerance {self.input_tolerance} not < eps/(48 w^2)")
        if not self.input_tolerance < self.block_tolerance / (4 * w2):
            raise ValueError(f"input tolerance {self.input_tolerance} not < block/(4 w^2)")

    def to_json(self) -> dict:
        return {
            "eps": frac_to_json(self.eps),
            "block_tolerance": frac_to_json(self.block_tolerance),
            "input_tolerance": frac_to_json(self.input_tolerance),
            "window_size": self.window_size,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Budget":
        return cls(
            frac_from_json(data["eps"]),
            frac_from_json(data["block_tolerance"]),
            frac_from_json(data["input_tolerance"]),
            data["window_size"],
        )


def make_budget(eps, window_size: int) -> Budget:
    """Concrete tolerances strictly inside the open bounds.

    block = eps/13 (< eps/12) and input = eps/(96 w^2), which is below both
    eps/(48 w^2) and (eps/13)/(4 w^2) = eps/(52 w^2).
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if window_size < 1:
        raise ValueError("window size must be >= 1")
    return Budget(eps, eps / 13, eps / (96 * window_size**2), window_size)


@dataclass(frozen=True)
class GoodBlock:
    """Blocks where the base rule is injective and compatible across positions.

    With Q(x) = sigma_B(x)^{-1}:
      injective:  Q(h1) b != Q(h2) b for all distinct h1, h2 in the window;
      compatible: Q(h1 h2) b = Q(h2) Q(h1) b for all h1, h2 in the window;
      good = injective & compatible.
    On good blocks distinct positions anchor distinct coordinates, and the
    anchors transform correctly under the base rule.
    """

    injective: frozenset[int]
    compatible: frozenset[int]
    good: frozenset[int]

    def to_json(self) -> dict:
        return {
            "injective": sorted(self.injective),
            "compatible": sorted(self.compatible),
            "good": sorted(self.good),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GoodBlock":
        return cls(
            frozenset(data["injective"]), frozenset(data["compatible"]), frozenset(data["good"])
        )


def compute_good_blocks(sigma_B: SoficApprox, positions) -> GoodBlock:
    base = sigma_B.group
    positions = base.sort(set(positions))
    products = {base.mul(h1, h2): (h1, h2) for h1 in positions for h2 in positions}
    needed = set(positions) | set(products)
    missing = [h for h in needed if h not in sigma_B.window]
    if missing:
        raise WindowViolationError(f"good-block computation needs {missing[:5]!r} in the base window")

    inv = {h: sigma_B.evaluate(h).inverse().image for h in positions}
    inv_prod = {h: sigma_B.evaluate(h).inverse().image for h in products}
    n = sigma_B.carrier_size

    injective = set(range(n))
    for i, h1 in enumerate(positions):
        for h2 in positions[i + 1 :]:
            q1, q2 = inv[h1], inv[h2]
            injective -= {b for b in injective if q1[b] == q2[b]}

    compatible = set(range(n))
    for h1 in positions:
        q1 = inv[h1]
        for h2 in positions:
            q2 = inv[h2]
            qp = inv_prod[base.mul(h1, h2)]
            compatible -= {b for b in compatible if qp[b] != q2[q1[b]]}

    return GoodBlock(
        injective=frozenset(injective),
        compatible=frozenset(compatible),
        good=frozenset(injective & compatible),
    )


# ---------------------------------------------------------------------------
# the coordinate actions


def _anchor(sigma_B: SoficApprox, x, b: int) -> int:
    return sigma_B.evaluate(x).inverse()(b)


def lamp_factor(sigma_A: SoficApprox, sigma_B: SoficApprox, g, x, b: int) -> CoordAction:
    """One lamp write: at block b, coordinate sigma_B(x)^{-1} b gets sigma_A(g)."""
    coordinate = _anchor(sigma_B, x, b)
    return coord_action(
        sigma_A.carrier_size,
        sigma_B.carrier_size,
        tau={b: {coordinate: sigma_A.evaluate(g)}},
    )


def block_lamp_action(
    sigma_A: SoficApprox,
    sigma_B: SoficApprox,
    positions,
    block: GoodBlock,
    f: FinSuppMap,
    b: int,
) -> CoordAction:
    """Product of the lamp factors of f at one good block.

    On a good block the factors touch pairwise distinct coordinates, so the
    factor order (the canonical positions order) does not matter; it is fixed
    anyway for reproducibility.
    """
    if b not in block.good:
        raise ValueError(f"block {b} is not good")
    if not set(f.support()) <= set(positions):
        raise ValueError(f"support {f.support()!r} escapes the positions window")
    out = identity_action(sigma_A.carrier_size, sigma_B.carrier_size)
    for x in positions:
        g = f.get(x)
        if g is not None:
            out = out * lamp_factor(sigma_A, sigma_B, g, x, b)
    return out


def lamp_action(
    sigma_A: SoficApprox,
    sigma_B: SoficApprox,
    positions,
    block: GoodBlock,
    f: FinSuppMap,
) -> CoordAction:
    """The full lamp-side action: block_lamp_action at every good block.

    Total: configurations supported outside the positions window act as the
    identity.
    """
    if not set(f.support()) <= set(positions):
        return identity_action(sigma_A.carrier_size, sigma_B.carrier_size)
    writes = [(sigma_B.evaluate(x).inverse().image, sigma_A.evaluate(g)) for x, g in f.entries]
    tau = {}
    for b in block.good:
        entries = {q[b]: p for q, p in writes}
        if entries:
            tau[b] = entries
    return coord_action(sigma_A.carrier_size, sigma_B.carrier_size, tau=tau)


def base_action(sigma_B: SoficApprox, h, a_size: int) -> CoordAction:
    """The base-side action: move the block by sigma_B(h), touch no lamps."""
    return coord_action(a_size, sigma_B.carrier_size, beta=sigma_B.evaluate(h))


@dataclass(frozen=True)
class WreathApprox:
    """The assembled approximation of the wreath product.

    ``rule`` composes the lamp action after the base action; values are
    cached per element.  The rule is evaluable on the closure window and all
    its pairwise products.
    """

    wreath: WreathProduct
    sigma_A: SoficApprox
    sigma_B: SoficApprox
    windows: WindowSets
    block: GoodBlock
    budget: Budget
    lamp_certificate: DefectReport = field(compare=False, repr=False)
    base_certificate: DefectReport = field(compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def a_size(self) -> int:
        return self.sigma_A.carrier_size

    @property
    def b_size(self) -> int:
        return self.sigma_B.carrier_size

    def carrier_size(self) -> int:
        return self.a_size**self.b_size * self.b_size

    def lamp(self, f: FinSuppMap) -> CoordAction:
        return lamp_action(self.sigma_A, self.sigma_B, self.windows.positions, self.block, f)

    def base(self, h) -> CoordAction:
        return base_action(self.sigma_B, h, self.a_size)

    def rule(self, u: WreathElement) -> CoordAction:
        if u not in self._cache:
            self._cache[u] = self.lamp(u.left) * self.base(u.right)
        return self._cache[u]

    def identity_value(self) -> CoordAction:
        return identity_action(self.a_size, self.b_size)

    def to_json(self) -> dict:
        wreath = self.wreath
        return {
            "format": 1,
            "kind": "wreath-approx",
            "group": wreath.descriptor(),
            "lamp_approx": self.sigma_A.to_json(),
            "base_approx": self.sigma_B.to_json(),
            "targets": [wreath.encode(u) for u in self.windows.targets],
            "eps": frac_to_json(self.budget.eps),
            "derived": {
                "windows": {
                    "closure": [wreath.encode(u) for u in self.windows.closure],
                    "lamp_window": [wreath.lamps.encode(f) for f in self.windows.lamp_window],
                    "mover_window": [wreath.base.encode(h) for h in self.windows.mover_window],
                    "positions": [wreath.base.encode(h) for h in self.windows.positions],
                    "lamp_values": [wreath.lamp.encode(g) for g in self.windows.lamp_values],
                    "base_window": [wreath.base.encode(h) for h in self.windows.base_window],
                },
                "block": self.block.to_json(),
                "budget": self.budget.to_json(),
            },
        }


def build(sigma_A: SoficApprox, sigma_B: SoficApprox, targets, eps) -> WreathApprox:
    """Derive windows, certify the inputs, and assemble the approximation.

    The input approximations must hold their certificates at the derived
    input tolerance; a failed certificate is an error, not a warning.
    """
    wreath = WreathProduct(sigma_A.group, sigma_B.group)
    windows = derive_windows(wreath, targets)
    budget = make_budget(eps, len(windows.positions))

    lamp_cert = require_sofic(sigma_A, windows.lamp_values, budget.input_tolerance, "lamp approximation")
    base_cert = require_sofic(sigma_B, windows.base_window, budget.input_tolerance, "base approximation")
    block = compute_good_blocks(sigma_B, windows.positions)
    # certified inputs force this bound; a violation would be a library bug
    if len(block.good) < (1 - budget.block_tolerance) * sigma_B.carrier_size:
        raise AssertionError("good-block bound violated despite certified inputs")

    return WreathApprox(
        wreath=wreath,
        sigma_A=sigma_A,
        sigma_B=sigma_B,
        windows=windows,
        block=block,
        budget=budget,
        lamp_certificate=lamp_cert,
        base_certificate=base_cert,
    )


def wreath_approx_from_json(data: dict) -> WreathApprox:
    """Rebuild from a stored bundle, re-deriving everything derivable.

    The stored derived sections are cross-checked against the fresh
    derivation; a mismatch means the artifact was edited and is reported as
    a certificate failure.
    """
    if data.get("kind") != "wreath-approx" or data.get("format") != 1:
        raise ValueError("not a wreath-approx artifact")
    wreath = group_from_descriptor(data["group"])
    if not isinstance(wreath, WreathProduct):
        raise ValueError("artifact group is not a wreath product")
    sigma_A = SoficApprox.from_json(data["lamp_approx"])
    sigma_B = SoficApprox.from_json(data["base_approx"])
    targets = [wreath.decode(u) for u in data["targets"]]
    eps = frac_from_json(data["eps"])
    approx = build(sigma_A, sigma_B, targets, eps)
    stored = data.get("derived")
    if stored is not None and stored != approx.to_json()["derived"]:
        raise CertificateError("artifact derived data does not match a fresh derivation")
    return approx
