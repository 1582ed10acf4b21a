"""Command-line front end.

Subcommands: spec-r, localize, tensor, tor, kunneth, six-term, doubling,
remark-failure, verify.  Human-readable reports go to stdout; --json writes
a canonical machine report whose results section is byte-deterministic for
identical inputs (timing is reported on stdout only).  Exit codes: 0 all
requested checks passed, 1 a verification check failed, 2 malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from typing import Any

from . import io as kio
from . import __version__
from .catalog import ATOMS, MUTATED_KINVARIANTS, broken_pt_sixterm, FIXTURES
from .kinv import (
    connecting_maps_localized_zero,
    localize_equivariant,
    localize_kinvariant,
    six_term_verify,
    validate_kinvariant,
)
from .kunneth import (
    doubling_check,
    kunneth_local,
    naive_failure_demo,
    p2_quotient_diagnostic,
    side_for,
    support_g_vanishing,
)
from .rep_ring import (
    IdealKind,
    Mode,
    PrimeSpot,
    classify_ideal,
    spec_r_listing,
    spec_r_text,
)
from .rmod import NotDvrModule, ZpModule, localize, tensor_zp, tor1_zp, validate_module
from .spaces import Atom, Product, eval_local, free_oracle

FIXTURE_ORDER = ["pt", "V", "G", "GxR", "S1_antipodal"]
ATOM_ORDER = ["pt", "V", "G"]


class CliInputError(Exception):
    """Bad input that should exit with code 2."""


def _parse_prime(text: str) -> PrimeSpot:
    try:
        spot = classify_ideal(text)
    except ValueError as exc:
        raise CliInputError(f"bad --prime {text!r}: {exc}") from exc
    return spot


def _parse_mode(text: str) -> Mode:
    return Mode.QUOTIENT if text == "quotient" else Mode.GENUINE


def _load_value_arg(arg: str, loader, what: str) -> Any:
    """Accept inline JSON (starts with '{') or a file path."""
    if arg.lstrip().startswith("{"):
        try:
            payload = json.loads(arg)
        except json.JSONDecodeError as exc:
            raise kio.SchemaError("/", f"invalid inline JSON for {what}: {exc}") from exc
    else:
        payload = kio.load_json(arg)
    return loader(payload, "")


def _check(cid: str, passed: bool, detail: str = "") -> dict:
    return {
        "id": cid,
        "status": "pass" if passed else "fail",
        "detail": detail,
    }


def _digest(payload: Any) -> str:
    return hashlib.sha256(kio.canonical_dumps(payload).encode("utf-8")).hexdigest()


def _gate_p2(spot: PrimeSpot, experimental: bool) -> None:
    if spot.is_maximal and spot.p == 2 and not experimental:
        raise CliInputError(
            "localized Kunneth at (I,2) is experimental; pass --experimental-p2"
        )


# ---------------------------------------------------------------------------
# Subcommand bodies: each returns (results, checks)
# ---------------------------------------------------------------------------


def _cmd_spec_r(args) -> tuple[dict, list[dict]]:
    text = spec_r_text(args.max_prime)
    print(text)
    return {"listing": spec_r_listing(args.max_prime), "text": text}, []


def _zp_or_report_json(value: ZpModule | NotDvrModule) -> dict:
    if isinstance(value, NotDvrModule):
        return kio.not_dvr_to_json(value)
    return kio.zp_module_to_json(value)


def _cmd_localize(args) -> tuple[dict, list[dict]]:
    spot = _parse_prime(args.prime)
    if not spot.is_maximal:
        raise CliInputError("localize needs a maximal ideal like I,3 or J,5")
    mode = _parse_mode(args.mode)
    checks = []
    if args.module:
        mod = _load_value_arg(args.module, kio.fg_module_from_json, "--module")
        violations = validate_module(mod)
        checks.append(
            _check(
                "module_valid",
                not violations,
                "; ".join(str(v) for v in violations),
            )
        )
        if violations:
            return {"input": kio.fg_module_to_json(mod)}, checks
        out = localize(mod, spot, mode)
        print(f"{spot} [{mode.value}]: {out}")
        return {
            "input": kio.fg_module_to_json(mod),
            "localized": _zp_or_report_json(out),
        }, checks
    kin = _load_value_arg(args.kinvariant, kio.kinvariant_from_json, "--kinvariant")
    violations = validate_kinvariant(kin)
    checks.append(
        _check("kinvariant_valid", not violations, "; ".join(str(v) for v in violations))
    )
    if violations:
        return {"input": kio.kinvariant_to_json(kin)}, checks
    if spot.kind is IdealKind.MAXIMAL_J:
        graded = localize_equivariant(kin, spot, mode)
        label = "equivariant part (support-G prime)"
    else:
        graded = localize_kinvariant(kin, spot, mode)
        label = "regraded pair"
    print(f"{spot} [{mode.value}] {label}: {graded}")
    return {
        "input": kio.kinvariant_to_json(kin),
        "localized": kio.graded_to_json(graded),
        "shape": label,
    }, checks


def _cmd_tensor(args, op=tensor_zp, opname: str = "tensor") -> tuple[dict, list[dict]]:
    a = _load_value_arg(args.a, kio.zp_module_from_json, "first module")
    b = _load_value_arg(args.b, kio.zp_module_from_json, "second module")
    if a.p != b.p:
        raise CliInputError(f"modules live over different primes {a.p} and {b.p}")
    out = op(a, b)
    print(f"{opname}({a}, {b}) = {out}")
    return {
        "a": kio.zp_module_to_json(a),
        "b": kio.zp_module_to_json(b),
        opname: kio.zp_module_to_json(out),
    }, []


def _cmd_tor(args) -> tuple[dict, list[dict]]:
    return _cmd_tensor(args, op=tor1_zp, opname="tor")


def _cmd_kunneth(args) -> tuple[dict, list[dict]]:
    spot = _parse_prime(args.prime)
    if not spot.is_maximal:
        raise CliInputError("the Kunneth sequences live at maximal ideals")
    _gate_p2(spot, args.experimental_p2)
    mode = _parse_mode(args.mode)
    expr = _load_value_arg(args.space, kio.space_from_json, "--space")
    if not isinstance(expr, Product):
        raise CliInputError("kunneth expects a --space whose top node is a product")
    side = side_for(spot)
    left = eval_local(expr.left, spot, side, mode)
    right = eval_local(expr.right, spot, side, mode)
    result = kunneth_local(left.graded, right.graded, spot)
    print(result)
    checks = [
        _check(c.id, c.passed, c.detail) for c in result.checks
    ]
    return {
        "space": kio.space_to_json(expr),
        "result": kio.kunneth_result_to_json(result),
        "factor_ambiguity": [left.ambiguous, right.ambiguous],
    }, checks


def _cmd_six_term(args) -> tuple[dict, list[dict]]:
    if args.fixture:
        data = kio.fixture_sixterm(args.fixture)
        source = f"fixture:{args.fixture}"
    else:
        data = kio.sixterm_from_json(kio.load_json(args.file), "")
        source = args.file
    report = six_term_verify(data)
    print(f"six-term check for {source}:")
    print(report)
    checks = [
        _check(f"six_term_spot:{name}", h.is_zero(), f"homology {h}")
        for name, h in report.spots
    ]
    return {
        "source": source,
        "spots": {name: str(h) for name, h in report.spots},
        "exact": report.exact,
    }, checks


def _cmd_doubling(args) -> tuple[dict, list[dict]]:
    spot = _parse_prime(args.prime)
    if args.space not in ATOMS:
        raise CliInputError(f"--space must be one of {ATOM_ORDER}")
    report = doubling_check(ATOMS[args.space].kinvariant, spot)
    print(report)
    checks = [_check(f"doubling:{args.space}:{spot}", report.passed, str(report))]
    return {
        "space": args.space,
        "prime": str(spot),
        "product_rank": report.product_rank,
        "product_length": report.product_length,
        "k_rank": report.k_rank,
        "k_length": report.k_length,
    }, checks


def _cmd_remark_failure(args) -> tuple[dict, list[dict]]:
    spot = _parse_prime(args.prime)
    report = naive_failure_demo(spot)
    print(report)
    checks = [
        _check(
            f"naive_mismatch_detected:{spot}",
            report.mismatch_detected,
            f"naive rank {report.naive_rank} vs true rank {report.true_rank}",
        ),
        _check(
            f"pair_resolves_product:{spot}",
            report.resolved_by_pair,
            f"paired middle {report.full_middle}",
        ),
    ]
    return {
        "prime": str(spot),
        "naive_rank": report.naive_rank,
        "true_rank": report.true_rank,
        "full_middle": kio.graded_to_json(report.full_middle),
        "direct_middle": kio.graded_to_json(report.direct_middle),
    }, checks


# ---------------------------------------------------------------------------
# The verify suite
# ---------------------------------------------------------------------------


def _bott_reduce(a: str, b: str) -> str:
    """Product of two non-free atoms up to equivariant Bott periodicity."""
    twists = (a == "V") + (b == "V")
    return "V" if twists == 1 else "pt"


def _verify_catalog(primes: list[PrimeSpot], experimental_p2: bool) -> tuple[dict, list[dict]]:
    checks: list[dict] = []
    results: dict[str, Any] = {"fixtures": FIXTURE_ORDER, "primes": [str(s) for s in primes]}

    fixtures = {name: kio.fixture_kinvariant(name) for name in FIXTURE_ORDER}

    # Structural validity of the catalog, and expected failures of mutants.
    for name in FIXTURE_ORDER:
        violations = validate_kinvariant(fixtures[name])
        checks.append(
            _check(
                f"kinvariant_valid:{name}",
                not violations,
                "; ".join(str(v) for v in violations),
            )
        )
    for name, (_, expected_code) in MUTATED_KINVARIANTS.items():
        mutant = kio.fixture_kinvariant(name)
        codes = {v.code for v in validate_kinvariant(mutant)}
        checks.append(
            _check(
                f"kinvariant_invalid:{name}",
                bool(codes) and expected_code in codes,
                f"violations {sorted(codes)}, expected to include {expected_code}",
            )
        )

    # Connecting maps vanish at every (I,p), p odd.
    for spot in primes:
        if spot.kind is not IdealKind.MAXIMAL_I or spot.p == 2:
            continue
        for name in FIXTURE_ORDER:
            bad = connecting_maps_localized_zero(fixtures[name], spot)
            checks.append(
                _check(
                    f"connecting_maps_vanish:{name}:{spot}",
                    not bad,
                    "; ".join(str(v) for v in bad),
                )
            )

    # Six-term exactness, plus detection of the deliberately broken hexagon.
    for name in FIXTURE_ORDER:
        report = six_term_verify(kio.fixture_sixterm(name))
        checks.append(
            _check(
                f"six_term_exact:{name}",
                report.exact,
                f"failed spots {report.failed_spots()}",
            )
        )
    broken = six_term_verify(kio.fixture_sixterm("pt_broken"))
    checks.append(
        _check(
            "six_term_broken_detected",
            (not broken.exact) and "KG^0" in broken.failed_spots(),
            f"failed spots {broken.failed_spots()}",
        )
    )

    # Kunneth against independent evaluation at (I,p), p odd.
    for spot in primes:
        if spot.kind is not IdealKind.MAXIMAL_I or spot.p == 2:
            continue
        for a in ATOM_ORDER:
            for b in ATOM_ORDER:
                expr = Product(Atom(a), Atom(b))
                engine = eval_local(expr, spot)
                if "G" in (a, b):
                    oracle = free_oracle(expr, spot)
                else:
                    oracle = localize_kinvariant(ATOMS[_bott_reduce(a, b)].kinvariant, spot)
                checks.append(
                    _check(
                        f"kunneth_oracle:{a}x{b}:{spot}",
                        engine.graded == oracle and not engine.ambiguous,
                        f"engine {engine.graded} vs oracle {oracle}",
                    )
                )
        report = naive_failure_demo(spot)
        checks.append(
            _check(
                f"naive_mismatch_detected:{spot}",
                report.mismatch_detected and report.resolved_by_pair,
                f"naive {report.naive_rank} vs true {report.true_rank}",
            )
        )
        for name in ATOM_ORDER:
            dbl = doubling_check(ATOMS[name].kinvariant, spot)
            checks.append(_check(f"doubling:{name}:{spot}", dbl.passed, str(dbl)))

    # Support-G branch: Bott identities and free vanishing at (J,p).
    for spot in primes:
        if spot.kind is not IdealKind.MAXIMAL_J:
            continue
        for a, b in (("pt", "pt"), ("V", "V")):
            expr = Product(Atom(a), Atom(b))
            engine = eval_local(expr, spot)
            oracle = localize_equivariant(ATOMS[_bott_reduce(a, b)].kinvariant, spot)
            checks.append(
                _check(
                    f"support_g_bott:{a}x{b}:{spot}",
                    engine.graded == oracle and not engine.ambiguous,
                    f"engine {engine.graded} vs oracle {oracle}",
                )
            )
        for name in FIXTURE_ORDER:
            entry = FIXTURES[name]
            if not entry.free:
                continue
            van = support_g_vanishing(fixtures[name], entry.free, spot)
            checks.append(_check(f"support_g_zero:{name}:{spot}", van.passed, str(van)))

    # The experimental p = 2 diagnostic: the expected outcome is the mismatch.
    if experimental_p2:
        diag = p2_quotient_diagnostic()
        checks.append(
            _check(
                "p2_expected_inconsistency",
                diag.expected_inconsistency_observed,
                "quotient-convention Kunneth at (I,2) fails the pt x pt "
                "self-consistency check, the documented experimental outcome; "
                f"engine middle {diag.engine.middle} vs direct {diag.direct}",
            )
        )
        results["p2_diagnostic"] = {
            "engine_middle": kio.graded_to_json(diag.engine.middle),
            "direct": kio.graded_to_json(diag.direct),
            "consistent": diag.consistent,
        }

    return results, checks


def _cmd_verify(args) -> tuple[dict, list[dict]]:
    if args.suite != "catalog":
        raise CliInputError(f"unknown suite {args.suite!r}; available: catalog")
    primes = [_parse_prime(t) for t in args.primes]
    for spot in primes:
        if not spot.is_maximal:
            raise CliInputError(f"verification primes must be maximal ideals, got {spot}")
        _gate_p2(spot, args.experimental_p2)
    return _verify_catalog(primes, args.experimental_p2)


# ---------------------------------------------------------------------------
# Wiring
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equivk",
        description="Exact verification toolkit for Z/2-equivariant K-theory "
        "localization and Kunneth sequences.",
    )
    parser.add_argument("--version", action="version", version=f"equivk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", metavar="PATH", help="write a machine-readable report")
        p.add_argument("--verbose", action="store_true", help="enable debug logging")

    p = sub.add_parser("spec-r", help="print the prime spectrum of R = Z[t]/(t^2-1)")
    p.add_argument("--max-prime", type=int, default=7)
    common(p)
    p.set_defaults(func=_cmd_spec_r)

    p = sub.add_parser("localize", help="localize a module or paired invariant")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--module", help="FgRModule JSON (inline or path)")
    group.add_argument("--kinvariant", help="paired-invariant JSON (inline or path)")
    p.add_argument("--prime", required=True, help="maximal ideal, e.g. I,3 or J,5")
    p.add_argument("--mode", choices=["quotient", "genuine"], default="quotient")
    common(p)
    p.set_defaults(func=_cmd_localize)

    p = sub.add_parser("tensor", help="tensor product of localized modules")
    p.add_argument("a", help="ZpModule JSON (inline or path)")
    p.add_argument("b", help="ZpModule JSON (inline or path)")
    common(p)
    p.set_defaults(func=_cmd_tensor)

    p = sub.add_parser("tor", help="first torsion product of localized modules")
    p.add_argument("a", help="ZpModule JSON (inline or path)")
    p.add_argument("b", help="ZpModule JSON (inline or path)")
    common(p)
    p.set_defaults(func=_cmd_tor)

    p = sub.add_parser("kunneth", help="local Kunneth data for a product space")
    p.add_argument("--prime", required=True)
    p.add_argument("--space", required=True, help="space expression JSON (inline or path)")
    p.add_argument("--mode", choices=["quotient", "genuine"], default="quotient")
    p.add_argument("--experimental-p2", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_kunneth)

    p = sub.add_parser("six-term", help="verify a six-term hexagon")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--fixture", help="bundled fixture name, e.g. pt or G")
    group.add_argument("--file", help="six-term JSON file")
    common(p)
    p.set_defaults(func=_cmd_six_term)

    p = sub.add_parser("doubling", help="check the product-with-G doubling identity")
    p.add_argument("--space", required=True, help="catalog atom: pt, V, or G")
    p.add_argument("--prime", required=True)
    common(p)
    p.set_defaults(func=_cmd_doubling)

    p = sub.add_parser(
        "remark-failure",
        help="show the equivariant-only Kunneth failure at (I,p) and its repair",
    )
    p.add_argument("--prime", required=True)
    common(p)
    p.set_defaults(func=_cmd_remark_failure)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="catalog")
    p.add_argument(
        "--primes",
        nargs="+",
        default=["I,3", "J,3", "I,5"],
        help="maximal ideals to verify at",
    )
    p.add_argument("--experimental-p2", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
    started = time.monotonic()
    try:
        results, checks = args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except kio.SchemaError as exc:
        print(f"error: malformed input at {exc.path}: {exc.message}", file=sys.stderr)
        return 2
    elapsed_ms = int((time.monotonic() - started) * 1000)

    failed = [c for c in checks if c["status"] == "fail"]
    for c in checks:
        marker = "PASS" if c["status"] == "pass" else "FAIL"
        detail = f"  ({c['detail']})" if c["detail"] and c["status"] == "fail" else ""
        print(f"[{marker}] {c['id']}{detail}")
    if checks:
        print(f"{len(checks) - len(failed)}/{len(checks)} checks passed in {elapsed_ms} ms")

    report = {
        "command": ["equivk"] + list(argv),
        "inputs_digest": _digest({"argv": list(argv)}),
        "results": results,
        "checks": checks,
    }
    if getattr(args, "json", None):
        kio.store(args.json, report)
    return 1 if failed else 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
