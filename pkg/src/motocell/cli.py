"""Command-line front end.

Exit codes: 0 success, 1 internal assertion failure, 2 invalid input,
3 NonSplit / ResourceLimit.
"""

from __future__ import annotations

import argparse
import json
import sys

from motocell import arrangement as arr_mod
from motocell import completion, stratify
from motocell.cells import signed_poly
from motocell.errors import MotocellError, ValidationError
from motocell.root_system import build_cartan, flag_cell_inventory, omit, parabolic_quotient


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


def _check_q(qs):
    bad = [q for q in qs if not is_prime_power(q)]
    if bad:
        raise ValidationError(f"not prime powers: {bad}")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc


def _cells_payload(inv):
    return {"pointing": inv.pointing, "cells": inv.to_records(), "n_cells": len(inv)}


def _cmd_flag(args):
    datum = build_cartan(args.family, args.rank)
    omitted = args.omit if args.omit is not None else list(datum.node_labels)
    quotient = parabolic_quotient(datum, omit(datum, omitted))
    inv = flag_cell_inventory(quotient)
    return {
        "datum": datum.name,
        "omit": sorted(omitted),
        "parabolic_nodes": sorted(quotient.parabolic_nodes),
        "dimension": quotient.dimension,
        "n_representatives": len(quotient),
        **_cells_payload(inv),
        "poly": signed_poly(inv).to_json(),
    }, 0


def _cmd_completion(args):
    rec = completion.registry(args.name, args.n)
    out = {"record": rec.to_dict()}
    status = 0
    if isinstance(rec, completion.SphereRecord):
        out.update(_cells_payload(rec.inventory))
        out["poly"] = signed_poly(rec.inventory).to_json()
        out["certificate"] = {"level": "suspended(0)", "construction": "sphere"}
    elif args.suspended:
        inv, cert = completion.suspended_unstable_cells(rec)
        out.update(_cells_payload(inv))
        out["poly"] = signed_poly(inv).to_json()
        out["certificate"] = cert.as_dict()
    else:
        inv = completion.minimal_stable_cells(rec)
        out.update(_cells_payload(inv))
        out["poly"] = signed_poly(inv).to_json()
        out["certificate"] = completion.minimal_stable_certificate(rec).as_dict()
    if args.verify:
        report = completion.verify_record(rec)
        out["verify"] = report
        if not all(report.values()):
            status = 1
    return out, status


def _cmd_arrangement(args):
    raw = arr_mod.Arrangement.loads(_read(args.file))
    arr = arr_mod.normalize(raw)
    res = arr_mod.complement_cells(arr, pivot=args.pivot)
    out = {
        "ambient_dim": arr.ambient_dim,
        "n_subspaces_input": len(raw),
        "n_subspaces": len(arr),
        "level": res.level,
        "bound": res.bound,
        **_cells_payload(res.inventory),
        "poly_suspended": signed_poly(res.inventory).to_json(),
        "poly": res.unsuspended_poly().to_json(),
        "certificate": res.certificate.as_dict(),
        "recursion": res.trace.as_dict(),
    }
    status = 0
    if args.oracle_primes:
        _check_q(args.oracle_primes)
        checks = []
        for q in args.oracle_primes:
            predicted = sum(c * q ** (arr.ambient_dim - w)
                            for w, c in res.unsuspended_poly().coefficients.items())
            counted = arr_mod.point_count_inclusion_exclusion(arr, q)
            checks.append({"q": q, "cells": predicted, "inclusion_exclusion": counted,
                           "ok": predicted == counted})
            status = status or (0 if predicted == counted else 1)
        out["oracle"] = checks
    return out, status


def _cmd_stratified(args):
    strat = stratify.Stratification.loads(_read(args.file))
    if args.unstable:
        inv, cert = stratify.tower_cells_unstable(strat, args.bundle_ranks)
    else:
        inv, cert = stratify.stable_cells_from_filtration(strat)
    return {
        "total_dim": strat.total_dim,
        "n_strata": len(strat.strata),
        **_cells_payload(inv),
        "poly": signed_poly(inv).to_json(),
        "certificate": cert.as_dict(),
    }, 0


def _cmd_oracle(args):
    _check_q(args.q)
    text = _read(args.file)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    if isinstance(data, dict) and "ambient_dim" in data:
        arr = arr_mod.normalize(arr_mod.Arrangement.from_dict(data))
        counts = [arr_mod.point_count_inclusion_exclusion(arr, q) for q in args.q]
        kind = "arrangement_complement"
    elif isinstance(data, dict) and "total_dim" in data:
        strat = stratify.Stratification.from_dict(data)
        counts = [stratify.point_count_stratified(strat, q) for q in args.q]
        kind = "stratified"
    else:
        raise ValidationError("file is neither an arrangement nor a stratification")
    return {"kind": kind, "counts": [{"q": q, "count": c} for q, c in zip(args.q, counts)]}, 0


def _format_text(payload, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for key, value in payload.items():
        if key == "cells":
            lines.append(f"{pad}cells:")
            lines.extend(f"{pad}  ({c['p']}, {c['w']}) x {c['mult']}" for c in value)
        elif isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_format_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  - " + json.dumps(item, separators=(", ", ": ")))
        else:
            lines.append(f"{pad}{key}: {json.dumps(value)}")
    return "\n".join(line for line in lines if line)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="motocell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flag", parents=[common], help="Bruhat cells of G/P")
    p.add_argument("--family", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--omit", type=_int_list, default=None,
                   help="nodes outside the parabolic (default: all, i.e. G/B)")
    p.set_defaults(func=_cmd_flag)

    p = sub.add_parser("completion", parents=[common], help="two-orbit completions")
    p.add_argument("--name", required=True, choices=completion.NAMES)
    p.add_argument("--n", type=int, default=None)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--stable", action="store_true", help="minimal stable cells (default)")
    mode.add_argument("--suspended", action="store_true", help="constructive cells of Sigma X_+")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=_cmd_completion)

    p = sub.add_parser("arrangement", parents=[common], help="subspace arrangement complements")
    p.add_argument("--file", required=True)
    p.add_argument("--oracle-primes", type=_int_list, default=None)
    p.add_argument("--pivot", choices=("first", "last"), default="first")
    p.set_defaults(func=_cmd_arrangement)

    p = sub.add_parser("stratified", parents=[common], help="stratified varieties")
    p.add_argument("--file", required=True)
    p.add_argument("--unstable", action="store_true")
    p.add_argument("--bundle-ranks", type=_int_list, default=None)
    p.set_defaults(func=_cmd_stratified)

    p = sub.add_parser("oracle", parents=[common], help="exact finite-field point counts")
    p.add_argument("--file", required=True)
    p.add_argument("--q", type=_int_list, required=True)
    p.set_defaults(func=_cmd_oracle)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    as_json = args.format == "json"
    try:
        payload, status = args.func(args)
    except MotocellError as exc:
        error, status = {"code": exc.code, "message": str(exc)}, exc.exit_code
    except AssertionError as exc:
        error, status = {"code": "InternalAssertion", "message": str(exc)}, 1
    else:
        if as_json:
            stdout.write(json.dumps(payload, indent=2) + "\n")
        else:
            stdout.write(_format_text(payload) + "\n")
        return status
    if as_json:
        stdout.write(json.dumps({"error": error}, indent=2) + "\n")
    else:
        stderr.write(f"error [{error['code']}]: {error['message']}\n")
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
