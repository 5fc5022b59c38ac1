"""Command-line front end: JSON in, JSON out.

Exit codes: 0 success, 2 inconclusive, 1 error (with ``{"error": {...}}``).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import recursion, singularity, stabilization, strata
from .exact import as_rat, rat_str
from .profiles import ColoredProfile, ProfileError, is_admissible

DEFAULT_SEED = 20240501


class SchemaError(ValueError):
    code = "schema_violation"


class Inconclusive(Exception):
    def __init__(self, payload: dict):
        super().__init__("inconclusive")
        self.payload = payload


def _weights(text: Optional[str]) -> List:
    if not text:
        raise SchemaError("--weights is required")
    try:
        return [as_rat(t) for t in text.split(",") if t.strip()]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad weight list {text!r}: {exc}") from None


def _load(args) -> dict:
    try:
        if args.input and args.input != "-":
            with open(args.input) as fh:
                doc = json.load(fh)
        else:
            doc = json.load(sys.stdin)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON input: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("input must be a JSON object")
    return doc


def _field(doc: dict, name: str):
    if name not in doc:
        raise SchemaError(f"missing field {name!r}")
    return doc[name]


def _profile(raw) -> ColoredProfile:
    if not isinstance(raw, list) or not raw:
        raise SchemaError("profile must be a nonempty list of weight vectors")
    try:
        return ColoredProfile([v if isinstance(v, list) else [v] for v in raw])
    except ProfileError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc)) from None


def _config(raw) -> strata.Configuration:
    try:
        return strata.Configuration.from_json(raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad configuration: {exc}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_nk(args) -> dict:
    res = stabilization.compute_nk(_weights(args.weights), args.degree_cap)
    out = res.to_json()
    out["verified"] = res.verify()
    return out


def cmd_relation(args) -> dict:
    if args.weights:
        if not args.degree:
            raise SchemaError("--degree is required")
        g = stabilization.graded_membership(_weights(args.weights), args.degree)
        out = g.to_json()
        out["verified"] = g.verify()
        return out
    if not args.k or not args.degree:
        raise SchemaError("give --weights and --degree, or --k and --degree")
    cap = args.degree_cap if args.degree_cap is not None else 12
    res = stabilization.symbolic_nk_relation(args.k, args.degree, degree_cap=cap, seed=args.seed)
    out = res.to_json()
    if res.status == "inconclusive":
        raise Inconclusive(out)
    return out


def cmd_propagate(args) -> dict:
    doc = _load(args)
    try:
        cert = stabilization.RelationCertificate.from_json(_field(doc, "certificate"))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad certificate: {exc}") from None
    t = args.t if args.t is not None else int(doc.get("t", 1))
    if not cert.verify():
        raise SchemaError("input certificate does not verify")
    out = stabilization.propagate_relation(cert, t, reduce=not args.no_reduce)
    return {"certificate": out.to_json(), "verified": out.verify()}


def cmd_identities(args) -> dict:
    report = stabilization.verify_known_identities()
    if not all(report.values()):
        failed = [k for k, v in report.items() if not v]
        raise ArithmeticError(f"identities failed: {', '.join(failed)}")
    return {"identities": report, "all_zero": True}


def cmd_recursion(args) -> dict:
    k = args.k or 2
    cert = recursion.base_certificate()
    while cert.k < k:
        cert = recursion.lift_certificate(cert, allow_large=cert.k >= 2, time_budget=args.time_budget)
    out = {"ideal_certificate": cert.to_json(), "w_sequence": recursion.w_sequence(k)}
    if k <= 2:
        h = recursion.assemble_annihilator(cert)
        rel = recursion.power_sum_recursion(h)
        out["annihilator"] = h.to_json()
        out["relation"] = rel.to_json()
        if args.weights:
            out["cross_check"] = recursion.cross_check(rel, _weights(args.weights))
    return out


def cmd_branches(args) -> dict:
    doc = _load(args)
    P, Q = _profile(_field(doc, "profile")), _profile(_field(doc, "point_profile"))
    branches = singularity.enumerate_branches(P, Q)
    flags = [singularity.branch_is_immersion(b)[0] for b in branches]
    return {"branches": [[[list(map(rat_str, v)) for v in g] for g in b] for b in branches], "immersion": flags}


def cmd_classify(args) -> dict:
    doc = _load(args)
    P, Q = _profile(_field(doc, "profile")), _profile(_field(doc, "point_profile"))
    return singularity.classify_point(P, Q).to_json()


def cmd_codim(args) -> dict:
    if args.weights:
        P = ColoredProfile.uncolored(_weights(args.weights))
    else:
        P = _profile(_field(_load(args), "profile"))
    return singularity.min_singular_codim(P).to_json()


def cmd_farb_wolfson(args) -> dict:
    if args.d is None or args.n is None:
        raise SchemaError("--d and --n are required")
    return singularity.farb_wolfson_report(args.d, args.n)


def cmd_embed(args) -> dict:
    doc = _load(args)
    c = _config(doc.get("configuration", doc))
    N = args.N if args.N is not None else int(doc.get("N", 3))
    if args.an or c.n > 1:
        emb = strata.embed_configuration_an(c, N)
        return {"N": N, "monomials": [list(s) for s in emb.monomials], "embedding": emb.to_json()}
    emb = strata.embed_configuration(c, N)
    out = {"N": N, "embedding": emb.to_json()}
    if c.r == 1 and N >= 3:
        out["discriminant_vanishes"] = strata.discriminant_member(emb)
    return out


def cmd_equal(args) -> dict:
    doc = _load(args)
    a, b = _config(_field(doc, "a")), _config(_field(doc, "b"))
    return {"equal": strata.configs_equal(a, b)}


def cmd_admissible(args) -> dict:
    if args.weights:
        P = ColoredProfile.uncolored(_weights(args.weights))
    else:
        P = _profile(_field(_load(args), "profile"))
    return {"admissible": is_admissible(P)}


def cmd_oracle(args) -> dict:
    suite = singularity.random_oracle_suite(args.count, seed=args.seed)
    rows = []
    for inst in suite:
        agree, imm, rk = singularity.oracle_agrees(inst)
        rows.append({"profile": inst.profile.to_json(), "groups": [len(g) for g in inst.branch], "immersion": imm, "rank": rk, "agree": agree})
    return {"instances": rows, "count": len(rows), "all_agree": all(r["agree"] for r in rows)}


COMMANDS = {
    "nk": cmd_nk,
    "relation": cmd_relation,
    "propagate": cmd_propagate,
    "identities": cmd_identities,
    "recursion": cmd_recursion,
    "branches": cmd_branches,
    "classify": cmd_classify,
    "codim": cmd_codim,
    "farb-wolfson": cmd_farb_wolfson,
    "embed": cmd_embed,
    "equal": cmd_equal,
    "admissible": cmd_admissible,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="JSON input file ('-' or omitted: standard input)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--degree-cap", type=int, default=None)
    common.add_argument("--time-budget", type=float, default=None, help="seconds")
    parser = argparse.ArgumentParser(prog="incistrata", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("nk", "relation", "codim", "admissible", "recursion"):
            p.add_argument("--weights")
        if name in ("relation", "recursion"):
            p.add_argument("--k", type=int)
        if name == "relation":
            p.add_argument("--degree", type=int)
        if name == "propagate":
            p.add_argument("--t", type=int)
            p.add_argument("--no-reduce", action="store_true")
        if name == "farb-wolfson":
            p.add_argument("--d", type=int)
            p.add_argument("--n", type=int)
        if name == "embed":
            p.add_argument("--N", type=int)
            p.add_argument("--an", action="store_true", help="multivariate monomial coordinates")
        if name == "oracle":
            p.add_argument("--count", type=int, default=60)
    return parser


def _error(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
        code = 0
    except Inconclusive as exc:
        result, code = exc.payload, 2
    except (SchemaError, ProfileError, stabilization.CapExceeded, singularity.SumMismatch, singularity.ExhaustionBound) as exc:
        result, code = _error(exc.code, str(exc)), 1
    except TimeoutError as exc:
        result, code = _error("time_budget_exceeded", str(exc)), 1
    except (KeyError, TypeError, ValueError) as exc:
        result, code = _error("schema_violation", str(exc)), 1
    except ArithmeticError as exc:
        result, code = _error("verification_failed", str(exc)), 1
    json.dump(result, out, indent=2)
    out.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
