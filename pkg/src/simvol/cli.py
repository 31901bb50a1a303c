"""Command-line entry point: one config header line, then JSON lines."""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction

from . import __version__
from .exact import DomainError


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _interval(iv) -> dict:
    return {"lo": _q(iv.lo), "hi": _q(iv.hi), "approx_uncertified": iv.approx()}


# ---------------------------------------------------------------------------
# subcommands


def cmd_alpha(args):
    from .scl import alpha

    for n in _range(args.n, args.to):
        _emit(alpha(n, args.bits).to_json())


def cmd_scl(args):
    from .scl import Matrix2, g_matrix, scl_lift

    g = Matrix2.parse(args.matrix) if args.matrix else g_matrix(args.n)
    iv = scl_lift(g, args.bits)
    _emit({"matrix": [_q(g.a), _q(g.b), _q(g.c), _q(g.d)], "trace": _q(g.trace), **_interval(iv)})


def cmd_simvol(args):
    from .scl import scl_h, simvol_value

    iv = simvol_value(args.n, args.K, args.bits)
    _emit({"n": args.n, "K": args.K, "per_unit_K": args.K == 1, "quantity": "K*alpha_n", **_interval(iv)})
    _emit({"n": args.n, "K": args.K, "quantity": "scl = K*alpha_n/48", **_interval(scl_h(args.n, args.K, args.bits))})


def cmd_independence(args):
    from .fields import (
        gamma_radicand,
        mersenne_coprime,
        power_expansion_check,
        relation_search_exact,
        relation_search_numeric,
    )

    primes = _ints(args.primes)
    pairs = [(p, q) for p, q in itertools.combinations(primes, 2)]
    coprime = all(mersenne_coprime(p, q) for p, q in pairs)
    _emit({"claim": "mersenne_coprime", "pairs": [list(p) for p in pairs], "pass": coprime})
    q2 = {}
    for p in primes:
        if p == 2:
            continue
        q2[p] = all(power_expansion_check(p, n).q2_nonzero for n in range(1, args.power_bound + 1))
    _emit({"claim": "power_radical_part_nonzero", "n_max": args.power_bound, "per_prime": {str(k): v for k, v in q2.items()},
           "pass": all(q2.values())})
    rel = relation_search_exact(primes, args.bound, threads=args.threads)
    _emit({"claim": "no_multiplicative_relation", "bound": args.bound, "relations": [list(r) for r in rel],
           "pass": not rel, "radicands": {str(p): gamma_radicand(p) for p in primes}})
    if args.numeric_bits:
        verdict = relation_search_numeric(primes, args.coeff_bound, bits=args.numeric_bits)
        _emit({"claim": "numeric_independence", "coeff_bound": args.coeff_bound, **verdict.to_json(),
               "pass": verdict.status == "NoRelationFound"})


def _re_set(name: str):
    from . import urm

    if name == "evens":
        return urm.evens()
    if name == "odds":
        return urm.odds()
    if name == "empty":
        return urm.empty_set()
    if name == "all":
        return urm.all_naturals()
    if name == "halting":
        return urm.HaltingSet()
    if name.startswith("multiples:"):
        k = int(name.split(":", 1)[1])
        if k < 1:
            raise ValueError("multiples:k needs k >= 1")
        return urm.ExplicitRecursive(lambda n: n % k == 0, name)
    raise ValueError(f"unknown set {name!r}")


def cmd_specker(args):
    from .computable import specker

    A = _re_set(args.set)
    lower, upper = specker(A)
    events = A.events()
    for k, (lo, up, item) in enumerate(zip(lower, upper, events)):
        if k >= args.budget:
            break
        _emit({"step": k, "element": item, "lower_x": _q(lo), "upper_2_minus_x": _q(up)})


def cmd_stream(args):
    from .computable import inf_ratio, specker, upward_closure

    if args.source in ("specker-lower", "specker-upper"):
        lower, upper = specker(_re_set(args.set))
        stream = lower if args.source == "specker-lower" else upper
    elif args.source == "inf-ratio":
        profiles = {"succ": lambda m: m + 1, "one": lambda m: 1, "triple": lambda m: 3 * m}
        stream = inf_ratio(upward_closure(profiles[args.profile]))
    else:
        from .l1 import simvol_stream

        stream = simvol_stream(_complex(args.complex), cells=args.cells, threads=args.threads)
    for line in stream.dump(args.count):
        print(line)


def _complex(source: str):
    from .l1 import complex as cx

    builtin = {
        "triangle": cx.triangle,
        "tetrahedron": cx.tetrahedron_boundary,
        "torus7": cx.torus7,
        "klein": cx.klein_bottle,
    }
    if source in builtin:
        return builtin[source]()
    return cx.load_complex(source)


def cmd_homology(args):
    from .l1 import homology

    T = _complex(args.complex)
    degrees = [args.degree] if args.degree is not None else range(T.dimension + 1)
    for k in degrees:
        _emit(homology(T, k, args.coefficients).to_json())


def cmd_l1(args):
    from .l1 import Budget, Certified, Witness, semi_decide, simvol_events, verify_witness

    if args.l1_cmd == "semi-decide":
        T = _complex(args.complex)
        out = semi_decide(T, args.m, args.n, Budget(args.rmax, args.smax, args.node_limit), threads=args.threads)
        rec = {"status": out.status, "m": args.m, "n": args.n}
        if isinstance(out, Certified):
            w = out.witness
            rec.update(norm=w.norm, depths=list(w.depths), verified=bool(verify_witness(T, w)))
            if args.witness_out:
                with open(args.witness_out, "w") as fh:
                    fh.write(w.dumps() + "\n")
                rec["witness_path"] = args.witness_out
            else:
                rec["witness"] = w.to_json()
        else:
            rec["reason"] = out.reason
        _emit(rec)
    elif args.l1_cmd == "stream":
        T = _complex(args.complex)
        for e in simvol_events(T, cells=args.cells, node_limit=args.node_limit, max_depth=args.max_depth,
                               threads=args.threads):
            m, r, s = e.cell
            bound = f"{e.bound.numerator}/{e.bound.denominator}"
            rec = {"k": e.index, "bound": bound, "kind": "upper", "cell": {"m": m, "r": r, "s": s}}
            if e.witness is not None:
                rec["witness_terms"] = len(e.witness.chain)
            _emit(rec)
    else:
        with open(args.witness) as fh:
            w = Witness.from_json(fh.read())
        T = _complex(args.complex) if args.complex else None
        v = verify_witness(T, w)
        _emit({"verified": v.ok, "reason": v.reason, "checks": v.checks, "m": w.m, "n": w.n, "norm": w.norm})
        return 0 if v.ok else 1


# ---------------------------------------------------------------------------


def _ints(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _range(n, to):
    return range(n, (to if to is not None else n) + 1)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simvol", description=__doc__)
    p.add_argument("--threads", type=int, default=1, help="worker threads for searches (output is unaffected)")
    sub = p.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("alpha", help="enclosure of alpha_n = 24 arccos(1 - 2^-(n+1)) / pi")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--to", type=int, help="emit alpha_n .. alpha_to")
    a.add_argument("--bits", type=int, default=64)
    a.set_defaults(fn=cmd_alpha)

    s = sub.add_parser("scl", help="scl of the lift of an elliptic matrix")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix", help="a,b,c,d")
    g.add_argument("--n", type=int, help="use g_n")
    s.add_argument("--bits", type=int, default=64)
    s.set_defaults(fn=cmd_scl)

    v = sub.add_parser("simvol", help="K * alpha_n and the matching scl value")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--K", type=int, default=1)
    v.add_argument("--bits", type=int, default=64)
    v.set_defaults(fn=cmd_simvol)

    i = sub.add_parser("independence", help="coprimality, power expansion and relation searches")
    i.add_argument("--primes", default="3,5,7")
    i.add_argument("--bound", type=int, default=3)
    i.add_argument("--power-bound", type=int, default=20)
    i.add_argument("--numeric-bits", type=int, default=0)
    i.add_argument("--coeff-bound", type=int, default=10)
    i.set_defaults(fn=cmd_independence)

    k = sub.add_parser("specker", help="bounds for x_A and 2 - x_A")
    k.add_argument("--set", default="evens", help="evens, odds, empty, all, halting, multiples:k")
    k.add_argument("--budget", type=int, default=20)
    k.set_defaults(fn=cmd_specker)

    t = sub.add_parser("stream", help="dump a bound stream")
    t.add_argument("--source", choices=["specker-lower", "specker-upper", "inf-ratio", "simvol"], required=True)
    t.add_argument("--set", default="evens")
    t.add_argument("--profile", choices=["succ", "one", "triple"], default="succ")
    t.add_argument("--complex", default="triangle")
    t.add_argument("--cells", type=int, default=60)
    t.add_argument("--count", type=int, default=20)
    t.set_defaults(fn=cmd_stream)

    h = sub.add_parser("homology", help="simplicial homology via Smith normal form")
    h.add_argument("--complex", required=True, help="JSON file, JSON text, or triangle/tetrahedron/torus7/klein")
    h.add_argument("--degree", type=int)
    h.add_argument("--coefficients", choices=["Z", "Q"], default="Z")
    h.set_defaults(fn=cmd_homology)

    l1 = sub.add_parser("l1", help="l1-norm certificates for fundamental classes")
    lsub = l1.add_subparsers(dest="l1_cmd", required=True)
    sd = lsub.add_parser("semi-decide")
    sd.add_argument("--complex", required=True)
    sd.add_argument("--m", type=int, default=1)
    sd.add_argument("--n", type=int, required=True)
    sd.add_argument("--rmax", type=int, default=0)
    sd.add_argument("--smax", type=int, default=0)
    sd.add_argument("--node-limit", type=int)
    sd.add_argument("--witness-out")
    st = lsub.add_parser("stream")
    st.add_argument("--complex", required=True)
    st.add_argument("--cells", type=int, default=100)
    st.add_argument("--node-limit", type=int, default=200_000)
    st.add_argument("--max-depth", type=int, default=5)
    vf = lsub.add_parser("verify")
    vf.add_argument("--witness", required=True)
    vf.add_argument("--complex")
    l1.set_defaults(fn=cmd_l1)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in sorted(vars(args).items()) if k != "fn"}
    _emit({"config": config, "version": __version__})
    try:
        rc = args.fn(args)
    except (DomainError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.flush()
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
