"""Command-line surface: build artifacts, verify them, render reports.

Exit codes: 0 success, 1 usage or malformed input, 2 certificate failure,
3 oracle unavailable (carrier too large to expand).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bigperm import EXPANSION_CAP, expand_explicit
from .construct import WreathApprox, build, wreath_approx_from_json
from .groups import Group, FreeGroup, IntegerGroup, group_from_descriptor
from .jsonutil import parse_fraction
from .perm import Permutation, draw_permutation
from .sofic import (
    CertificateError,
    SoficApprox,
    cyclic_quotient,
    perturb,
    quotient_by_images,
    regular_rep,
)
from .verify import certificate_from_json, verify_construction

OK, USAGE, CERTIFICATE, ORACLE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _approx_from_descriptor(desc: dict, group: Group, seed: int) -> SoficApprox:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigError(f"bad approximation descriptor: {desc!r}")
    kind = desc["kind"]
    if kind == "regular":
        return regular_rep(group)
    if kind == "cyclic-quotient":
        if not isinstance(group, IntegerGroup):
            raise ConfigError("cyclic-quotient needs the integers as its group")
        radius = desc.get("radius")
        window = None if radius is None else range(-radius, radius + 1)
        return cyclic_quotient(desc["size"], window)
    if kind == "free-quotient":
        if not isinstance(group, FreeGroup):
            raise ConfigError("free-quotient needs a free group")
        degree = desc["degree"]
        images = desc["images"]
        if isinstance(images, dict):
            import random

            rng = random.Random(images.get("seed", seed))
            images = [draw_permutation(degree, rng) for _ in range(group.rank)]
        else:
            images = [Permutation(tuple(img)) for img in images]
        return quotient_by_images(group, images, group.ball(desc["radius"]))
    if kind == "perturb":
        inner = _approx_from_descriptor(desc["base"], group, seed)
        return perturb(inner, parse_fraction(desc["rate"]), desc.get("seed", seed))
    if kind == "file":
        with open(desc["path"]) as fh:
            loaded = SoficApprox.from_json(json.load(fh))
        if loaded.group != group:
            raise ConfigError(f"approximation file {desc['path']} is for a different group")
        return loaded
    raise ConfigError(f"unknown approximation kind {kind!r}")


def _load_config(path: str) -> dict:
    with open(path) as fh:
        config = json.load(fh)
    if not isinstance(config, dict) or config.get("format") != 1:
        raise ConfigError('config must be an object with "format": 1')
    for key in ("groups", "approximations", "F", "eps"):
        if key not in config:
            raise ConfigError(f"config is missing the {key!r} key")
    return config


def _cmd_build(args) -> int:
    config = _load_config(args.config)
    seed = config.get("seed", 0)
    lamp_group = group_from_descriptor(config["groups"]["lamp"])
    base_group = group_from_descriptor(config["groups"]["base"])
    sigma_A = _approx_from_descriptor(config["approximations"]["lamp"], lamp_group, seed)
    sigma_B = _approx_from_descriptor(config["approximations"]["base"], base_group, seed)

    eps = parse_fraction(config["eps"])
    if eps <= 0:
        raise ConfigError(f"eps must be positive, got {eps}")

    from .groups import WreathProduct

    wreath = WreathProduct(lamp_group, base_group)
    targets_cfg = config["F"]
    if targets_cfg == "all":
        targets = list(wreath.elements())
    else:
        targets = [wreath.decode(u) for u in targets_cfg]

    approx = build(sigma_A, sigma_B, targets, eps)

    artifact = approx.to_json()
    artifact["expansion_cap"] = config.get("expansion_cap", EXPANSION_CAP)
    with open(args.out, "w") as fh:
        json.dump(artifact, fh, indent=1)

    w = approx.windows
    print(f"targets: {len(w.targets)}  closure: {len(w.closure)}")
    print(
        f"windows: lamp {len(w.lamp_window)}, mover {len(w.mover_window)}, "
        f"positions {len(w.positions)}, lamp values {len(w.lamp_values)}, base {len(w.base_window)}"
    )
    print(f"good blocks: {len(approx.block.good)}/{approx.b_size}")
    b = approx.budget
    print(f"budget: eps = {b.eps}, block tolerance = {b.block_tolerance}, input tolerance = {b.input_tolerance}")
    print(f"wrote {args.out}")
    return OK


def _load_artifact(path: str) -> tuple[WreathApprox, int]:
    with open(path) as fh:
        data = json.load(fh)
    cap = data.get("expansion_cap", EXPANSION_CAP)
    return wreath_approx_from_json(data), cap


def _oracle_check(approx: WreathApprox, cap: int) -> list[str]:
    """Cross-check every certificate distance against explicit expansion."""
    wreath = approx.wreath
    targets = approx.windows.targets
    ident_explicit = Permutation.identity(approx.carrier_size())
    explicit = {u: expand_explicit(approx.rule(u), cap) for u in approx.windows.closure}
    mismatches = []
    for u in targets:
        d_fact = approx.rule(u).distance(approx.identity_value())
        d_expl = explicit[u].distance(ident_explicit)
        if d_fact != d_expl:
            mismatches.append(f"freeness distance mismatch at {wreath.encode(u)}: {d_fact} vs {d_expl}")
    for u in targets:
        for v in targets:
            value = approx.rule(u) * approx.rule(v)
            product = explicit[u] * explicit[v]
            if expand_explicit(value, cap) != product:
                mismatches.append(
                    f"composition mismatch at pair ({wreath.encode(u)}, {wreath.encode(v)})"
                )
                continue
            d_fact = value.distance(approx.rule(wreath.mul(u, v)))
            d_expl = product.distance(explicit[wreath.mul(u, v)])
            if d_fact != d_expl:
                mismatches.append(
                    f"distance mismatch at pair ({wreath.encode(u)}, {wreath.encode(v)}): {d_fact} vs {d_expl}"
                )
    return mismatches


def _cmd_verify(args) -> int:
    approx, cap = _load_artifact(args.approx)
    certificate = verify_construction(approx)
    print(json.dumps(certificate.to_json(approx.wreath), indent=1))
    if args.oracle:
        if approx.carrier_size() > cap:
            print(
                f"oracle unavailable: carrier {approx.carrier_size()} exceeds cap {cap}",
                file=sys.stderr,
            )
            return ORACLE
        mismatches = _oracle_check(approx, cap)
        if mismatches:
            for line in mismatches:
                print(f"oracle mismatch: {line}", file=sys.stderr)
            return CERTIFICATE
        print(f"oracle: all distances confirmed on {approx.carrier_size()} points", file=sys.stderr)
    if not certificate.passed:
        for line in certificate.violations(approx.wreath):
            print(f"certificate failure: {line}", file=sys.stderr)
        return CERTIFICATE
    return OK


def _frac_str(data) -> str:
    return str(Fraction(data["num"], data["den"]))


def _render_text(cert: dict) -> str:
    lines = []
    lines.append(f"sofic certificate: {'PASS' if cert['pass'] else 'FAIL'}")
    lines.append(f"window: {len(cert['window'])} elements, eps = {_frac_str(cert['eps'])}")
    lines.append(f"identity value is identity: {'yes' if cert['identity_pass'] else 'NO'}")

    worst = max(cert["mult_defects"], key=lambda e: Fraction(e["defect"]["num"], e["defect"]["den"]), default=None)
    if worst is not None:
        lines.append(
            f"multiplicativity: {len(cert['mult_defects'])} pairs, worst defect {_frac_str(worst['defect'])}"
        )
    margins = cert["free_margins"]
    if margins:
        least = min(margins, key=lambda e: Fraction(e["margin"]["num"], e["margin"]["den"]))
        lines.append(f"freeness: {len(margins)} elements, least margin {_frac_str(least['margin'])}")
    else:
        lines.append("freeness: vacuous (no non-identity targets)")

    details = cert["details"]
    mult = details["multiplicativity"]
    hom = mult["almost_hom"]
    lines.append("multiplicativity report (hypothesis threshold eps/6):")
    for name, bound_key in (
        ("lamp_mult", "lamp"),
        ("base_mult", "base"),
        ("split", "split"),
        ("intertwine", "intertwine"),
    ):
        bullet = hom[name]
        lines.append(
            f"  {name:10s} defect {_frac_str(bullet['defect']):>8s}"
            f"  bound {_frac_str(mult['bounds'][bound_key]):>8s}"
            f"  threshold {_frac_str(bullet['threshold'])}"
        )
    lines.append(
        f"  conclusion defect {_frac_str(hom['conclusion']['defect'])} (eps {_frac_str(cert['eps'])})"
    )
    lines.append("freeness report:")
    if not details["freeness"]:
        lines.append("  (empty)")
    for entry in details["freeness"]:
        if entry["base_margin"] is not None:
            lines.append(
                f"  base moves: margin {_frac_str(entry['margin'])}"
                f" >= base margin {_frac_str(entry['base_margin'])}"
            )
        else:
            lines.append(
                f"  lamps only: margin {_frac_str(entry['margin'])},"
                f" fixed fraction {_frac_str(entry['fixed_fraction'])}"
                f" <= bound {_frac_str(entry['bound'])}"
            )
    return "\n".join(lines)


def _cmd_report(args) -> int:
    with open(args.certificate) as fh:
        cert = certificate_from_json(json.load(fh))
    if args.format == "json":
        print(json.dumps(cert, indent=1, sort_keys=True))
    else:
        print(_render_text(cert))
    return OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="soficwreath",
        description="Build and certify sofic approximations of wreath products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build an approximation from a config file")
    p_build.add_argument("--config", required=True)
    p_build.add_argument("--out", required=True)

    p_verify = sub.add_parser("verify", help="verify an artifact and print its certificate")
    p_verify.add_argument("--approx", required=True)
    p_verify.add_argument("--oracle", action="store_true", help="cross-check against explicit expansion")

    p_report = sub.add_parser("report", help="render a certificate")
    p_report.add_argument("--certificate", required=True)
    p_report.add_argument("--format", choices=("text", "json"), default="text")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK

    try:
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_report(args)
    except CertificateError as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return CERTIFICATE
    except (ConfigError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
