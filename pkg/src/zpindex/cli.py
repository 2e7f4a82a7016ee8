"""Batch command surface with machine-readable JSON output.

Every run echoes its inputs, seed and versions, and every numeric claim in
the results carries a provenance string naming the rule or oracle that
produced it.  Output is deterministic for a fixed configuration apart from
the timestamp field.  Exit codes: 0 success, 1 usage or shape errors,
2 a verification suite found a counterexample or a certificate was
rejected.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from .alphabets import circle_grid, parse_alphabet
from .coindex import (
    EquivariantMapCert,
    IndexReport,
    apply_certificate,
    index_of_join_of_finite,
    verify_certificate,
)
from .complexes import SimplicialComplex, join_complex
from .errors import NeededRangeError, NonFreeActionError, ResourceCapError, ShapeError
from .homology import betti_numbers
from .shiftspaces import (
    SubshiftSpec,
    Separation,
    mismatch_shift,
    neighbor_gap_shift,
    orbit_decompose,
    periodic_point_complex,
)
from .torusgrid import (
    TorusGridSpec,
    build_approx,
    canonical_certificate_P2,
    separated_torus_spec,
    stability_check,
    z_torus_spec,
)
from .verify import LEMMA_IDS, run_lemma_check


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit(2); usage errors are exit 1 here
        raise _UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise _UsageError(f"bad rational {text!r}: {e}")


def _word_spec(family: str, m: int, q: int, n: int, delta: Fraction) -> SubshiftSpec:
    if family == "Sigma":
        return mismatch_shift(m)
    if family == "Z":
        return neighbor_gap_shift(circle_grid(q), Fraction(1, 2))
    if family == "Y":
        return neighbor_gap_shift(circle_grid(q), Fraction(1), exact=True)
    if family == "XS":
        alpha = parse_alphabet(f"S^{n}:q={q}" if n > 1 else f"S:q={q}")
        return SubshiftSpec(alpha, Separation(m, delta))
    raise _UsageError(f"unknown family {family!r}; known: Sigma, Z, Y, XS")


def _parse_join_token(token: str) -> tuple[SubshiftSpec, int]:
    """"Sigma:m=2,p=7" or "Z:p=5,q=8" -> (word spec, period)."""
    head, _, rest = token.partition(":")
    params = {}
    if rest:
        for piece in rest.split(","):
            key, _, val = piece.partition("=")
            if not val:
                raise _UsageError(f"bad join token parameter {piece!r}")
            params[key.strip()] = val.strip()
    m = int(params.pop("m", "1"))
    p = int(params.pop("p", "0"))
    q = int(params.pop("q", "8"))
    n = int(params.pop("N", "1"))
    delta = _fraction(params.pop("delta", "1/2"))
    if params:
        raise _UsageError(f"unknown keys in join token: {sorted(params)}")
    if p < 1:
        raise _UsageError("join token needs p=<period>")
    return _word_spec(head, m, q, n, delta), p


def _emit(doc: dict, output: str | None) -> None:
    doc = dict(doc)
    doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _envelope(command: str, inputs: dict, results: dict, provenance: list[str], seed: int) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "results": results,
        "provenance": provenance,
        "versions": {
            "zpindex": __version__,
            "numpy": np.__version__,
            "python": "%d.%d.%d" % sys.version_info[:3],
        },
    }


def _add_common(sub):
    sub.add_argument("--seed", type=int, default=0, help="seed recorded in output and used by randomized suites")
    sub.add_argument("--output", default="-", help="output path, or - for stdout")


def _orbit_count(spec: SubshiftSpec, p: int, count: int) -> int:
    if count == 0:
        return 0
    if _is_prime(p):
        # a shift-fixed word is constant, which no positive-threshold family allows
        if count % p:
            raise ShapeError(f"count {count} not divisible by prime period {p}")
        return count // p
    words = spec.enumerate_periodic(p)
    return orbit_decompose(words, p).n_orbits


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- subcommand implementations ----------------------------------------------------


def _cmd_count(args) -> tuple[dict, int]:
    spec = _word_spec(args.family, args.m, args.q, args.N, _fraction(args.delta))
    ps = [int(x) for x in args.p_list.split(",")] if args.p_list else [args.p]
    if any(p < 1 for p in ps):
        raise _UsageError("periods must be >= 1")
    rows = []
    for p in ps:
        c = spec.count_periodic(p)
        rows.append(
            {
                "family": args.family,
                "m": args.m,
                "p": p,
                "count": c,
                "orbits": _orbit_count(spec, p, c),
            }
        )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["family", "m", "p", "count", "orbits"])
            w.writeheader()
            w.writerows(rows)
    results: dict = {"counts": rows}
    if len(rows) == 1:
        results["count"] = rows[0]["count"]
    prov = [
        "count = trace(A^(p/g))^g for the one-step letter matrix A and g = gcd(m!, p); exact integers"
    ]
    if args.csv:
        prov.append(f"csv written to {args.csv}")
    return _envelope("count", _inputs(args, ["family", "m", "p", "p_list", "q", "N", "delta", "csv"]), results, prov, args.seed), 0


def _cmd_enumerate(args) -> tuple[dict, int]:
    spec = _word_spec(args.family, args.m, args.q, args.N, _fraction(args.delta))
    words = spec.enumerate_periodic(args.p, method=args.method)
    results = {"count": len(words), "words": [w.text() for w in words]}
    prov = ["depth-first enumeration with exact rational constraint checks; lexicographic order"]
    return _envelope("enumerate", _inputs(args, ["family", "m", "p", "q", "N", "delta", "method"]), results, prov, args.seed), 0


def _cmd_orbits(args) -> tuple[dict, int]:
    spec = _word_spec(args.family, args.m, args.q, args.N, _fraction(args.delta))
    words = spec.enumerate_periodic(args.p)
    dec = orbit_decompose(words, args.p)
    results = {
        "n_orbits": dec.n_orbits,
        "free": dec.free,
        "orbit_representatives": [o[0].text() for o in dec.orbits],
        "orbit_sizes": [len(o) for o in dec.orbits],
    }
    if dec.witness is not None:
        results["short_orbit_witness"] = dec.witness.text()
    prov = ["orbits from explicit shift closure of the enumerated period-p set"]
    return _envelope("orbits", _inputs(args, ["family", "m", "p", "q", "N", "delta"]), results, prov, args.seed), 0


def _cmd_verify_lemma(args) -> tuple[dict, int]:
    alphabet = parse_alphabet(args.alphabet) if args.alphabet else None
    res = run_lemma_check(
        args.id,
        seed=args.seed,
        m=args.m,
        alphabet=alphabet,
        delta=_fraction(args.delta),
        trials=args.trials,
        p=args.p,
        q=args.q,
        copies=args.copies,
        ell=args.field or None,
    )
    prov = [f"property suite for statement {args.id} with seed {args.seed}"]
    doc = _envelope("verify-lemma", _inputs(args, ["id", "m", "alphabet", "delta", "trials", "p", "q", "copies", "field"]), res.to_json(), prov, args.seed)
    return doc, 0 if res.passed else 2


def _join_complex_from_args(args) -> tuple[SimplicialComplex, SubshiftSpec, int, list[str]]:
    spec, p = _parse_join_token(args.join_of)
    base = periodic_point_complex(spec, p)
    prov = [
        f"factor: period-{p} point set of {args.join_of} with {base.n_vertices} points"
    ]
    joined = base
    for _ in range(args.copies - 1):
        joined = join_complex(joined, base)
    if args.copies > 1:
        prov.append(f"join of {args.copies} copies: {joined.total_cells()} cells")
    return joined, spec, p, prov


def _cmd_homology(args) -> tuple[dict, int]:
    prov: list[str]
    if args.input:
        with open(args.input) as fh:
            doc = json.load(fh)
        c = SimplicialComplex.from_json(doc)
        p = c.p
        prov = [f"complex loaded from {args.input}"]
    else:
        if not args.join_of:
            raise _UsageError("homology needs --join-of or --input")
        c, _, p, prov = _join_complex_from_args(args)
    field = args.field if args.field else p
    bv = betti_numbers(c, field)
    free: bool | None = None
    if c.action is not None:
        free = c.is_free
    results = {
        "cells_by_dim": {str(d): n for d, n in c.cell_counts().items()},
        "free": free,
        **bv.to_json(),
    }
    prov.append(f"reduced Betti numbers by exact column reduction over F_{field}")
    return _envelope("homology", _inputs(args, ["join_of", "copies", "input", "field"]), results, prov, args.seed), 0


def _cmd_index(args) -> tuple[dict, int]:
    spec, p = _parse_join_token(args.join_of)
    base = periodic_point_complex(spec, p)
    report = index_of_join_of_finite([base] * args.copies)
    results = {"report": report.to_json()}
    if report.exact:
        results["exact"] = report.coind_lower
    prov = list(report.provenance)
    return _envelope("index", _inputs(args, ["join_of", "copies"]), results, prov, args.seed), 0


def _torus_spec_from_args(args) -> TorusGridSpec:
    if args.family == "Z":
        return z_torus_spec(args.p, args.q)
    if args.family == "XSN":
        return separated_torus_spec(args.p, args.q, args.N, _fraction(args.delta))
    raise _UsageError(f"unknown torus family {args.family!r}; known: Z, XSN")


def _cmd_approx_z(args) -> tuple[dict, int]:
    spec = _torus_spec_from_args(args)
    c = build_approx(spec, cell_cap=args.cap)
    field = args.field if args.field else spec.p
    bv = betti_numbers(c, field)
    results = {
        "spec": spec.token(),
        "resolution": spec.q,
        "vertices": c.n_vertices,
        "cells_by_dim": {str(d): n for d, n in c.cell_counts().items()},
        "free": c.is_free,
        **bv.to_json(),
    }
    prov = [
        f"inner vertex-wise cubical approximation at resolution q={spec.q}",
        f"reduced Betti numbers by exact column reduction over F_{field}",
    ]
    if args.stability:
        rep = stability_check(spec, field, cell_cap=args.cap)
        results["stability"] = rep.to_json()
        prov.append("stability: profiles at q and 2q compared, never merged")
    return _envelope("approx-z", _inputs(args, ["family", "p", "q", "N", "delta", "field", "stability", "cap"]), results, prov, args.seed), 0


def _cmd_certify(args) -> tuple[dict, int]:
    if args.cert:
        with open(args.cert) as fh:
            cert = EquivariantMapCert.from_json(json.load(fh))
        if not args.target:
            raise _UsageError("--cert needs --target, e.g. Z:p=2,q=8")
        head, _, rest = args.target.partition(":")
        params = dict(piece.split("=", 1) for piece in rest.split(",") if piece)
        if head != "Z" or int(params.get("p", 0)) != 2:
            raise _UsageError("certificate targets support Z:p=2,q=<res> for now")
        q = int(params["q"])
        target = build_approx(z_torus_spec(2, q))
        prov = [f"certificate loaded from {args.cert}; target rebuilt from {args.target}"]
    else:
        q = args.q
        target = build_approx(z_torus_spec(2, q))
        cert = canonical_certificate_P2(q, target=target)
        prov = [f"canonical antipodal certificate for the period-2 approximation at q={q}"]
    rep = verify_certificate(cert, target)
    results = {"certificate": cert.to_json(), "verification": rep.to_json()}
    code = 0
    if rep.accepted:
        updated = apply_certificate(rep, IndexReport.nonempty_free(cert.p))
        results["coind_lower"] = updated.coind_lower
        results["report"] = updated.to_json()
        prov.append(f"coindex lower bound {updated.coind_lower} from the accepted certificate")
    else:
        code = 2
        prov.append("certificate rejected; see verification.reason and witness")
    if args.save_cert:
        with open(args.save_cert, "w") as fh:
            json.dump(cert.to_json(), fh, sort_keys=True, indent=2)
        prov.append(f"certificate written to {args.save_cert}")
    return _envelope("certify", _inputs(args, ["q", "cert", "target", "save_cert"]), results, prov, args.seed), code


def _inputs(args, keys: list[str]) -> dict:
    out = {}
    for k in keys:
        v = getattr(args, k, None)
        out[k] = v
    return out


def build_parser() -> _Parser:
    parser = _Parser(prog="zpindex", allow_abbrev=False, description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("count", allow_abbrev=False, help="count periodic points via the transfer matrix")
    sp.add_argument("--family", required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--p-list", dest="p_list", default="")
    sp.add_argument("--q", type=int, default=8)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--delta", default="1/2")
    sp.add_argument("--csv", default="")
    _add_common(sp)
    sp.set_defaults(func=_cmd_count)

    sp = subs.add_parser("enumerate", allow_abbrev=False, help="enumerate periodic points")
    sp.add_argument("--family", required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, default=8)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--delta", default="1/2")
    sp.add_argument("--method", choices=["auto", "direct", "recoded"], default="auto")
    _add_common(sp)
    sp.set_defaults(func=_cmd_enumerate)

    sp = subs.add_parser("orbits", allow_abbrev=False, help="decompose periodic points into shift orbits")
    sp.add_argument("--family", required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, default=8)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--delta", default="1/2")
    _add_common(sp)
    sp.set_defaults(func=_cmd_orbits)

    sp = subs.add_parser("verify-lemma", allow_abbrev=False, help="run a property suite for one proven statement")
    sp.add_argument("--id", required=True, choices=list(LEMMA_IDS))
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--alphabet", default="")
    sp.add_argument("--delta", default="1/2")
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--p", type=int, default=5)
    sp.add_argument("--q", type=int, default=8)
    sp.add_argument("--copies", type=int, default=2)
    sp.add_argument("--field", type=int, default=0)
    _add_common(sp)
    sp.set_defaults(func=_cmd_verify_lemma)

    sp = subs.add_parser("homology", allow_abbrev=False, help="reduced Betti numbers of a join or a stored complex")
    sp.add_argument("--join-of", dest="join_of", default="")
    sp.add_argument("--copies", type=int, default=1)
    sp.add_argument("--input", default="")
    sp.add_argument("--field", type=int, default=0)
    _add_common(sp)
    sp.set_defaults(func=_cmd_homology)

    sp = subs.add_parser("index", allow_abbrev=False, help="exact index/coindex report for a join of finite free sets")
    sp.add_argument("--join-of", dest="join_of", required=True)
    sp.add_argument("--copies", type=int, default=1)
    _add_common(sp)
    sp.set_defaults(func=_cmd_index)

    sp = subs.add_parser("approx-z", allow_abbrev=False, help="cubical approximation of a periodic-point set on the torus grid")
    sp.add_argument("--family", default="Z")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--delta", default="1/2")
    sp.add_argument("--field", type=int, default=0)
    sp.add_argument("--stability", action="store_true")
    sp.add_argument("--cap", type=int, default=None)
    _add_common(sp)
    sp.set_defaults(func=_cmd_approx_z)

    sp = subs.add_parser("certify", allow_abbrev=False, help="build or verify an equivariant-map certificate")
    sp.add_argument("--q", type=int, default=8)
    sp.add_argument("--cert", default="")
    sp.add_argument("--target", default="")
    sp.add_argument("--save-cert", dest="save_cert", default="")
    _add_common(sp)
    sp.set_defaults(func=_cmd_certify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        doc, code = args.func(args)
        _emit(doc, args.output)
        return code
    except _UsageError as e:
        _emit({"error": {"type": "usage", "reason": str(e)}}, None)
        return 1
    except NeededRangeError as e:
        _emit({"error": {"type": "needed-range", "reason": str(e),
                         "needed": list(e.needed), "missing": list(e.missing)}}, None)
        return 1
    except NonFreeActionError as e:
        _emit({"error": {"type": "non-free-action", "reason": str(e),
                         "witness": list(map(str, e.witness)) if e.witness else None}}, None)
        return 1
    except ResourceCapError as e:
        _emit({"error": {"type": "resource-cap", "reason": str(e)}}, None)
        return 1
    except ShapeError as e:
        _emit({"error": {"type": "shape", "reason": str(e)}}, None)
        return 1
    except OSError as e:
        _emit({"error": {"type": "io", "reason": str(e)}}, None)
        return 1


if __name__ == "__main__":
    sys.exit(main())
