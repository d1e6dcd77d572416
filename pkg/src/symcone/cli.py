"""symcone command line: every subcommand prints one JSON report on stdout.

Exit codes: 0 computed, 1 usage error or malformed input, 2 size guard exceeded.
"""

import argparse
import json
import os
import random
import sys
import time
from itertools import permutations, product

from . import io
from .errors import GuardExceededError, SymconeError
from .poly import VariableSpace, format_polynomial
from .sing import (
    SupportSet,
    Verdict,
    blowup_error_bound,
    blowup_rank_probe,
    coord_subspace_membership,
    fe_basis,
    is_permutation_free,
    maximum_matching,
    permutation_point,
    random_tuple_on,
    sdit_random,
    sdit_symbolic,
    separation_witness,
    shrunk_block,
    symbolic_determinant,
)
from .stabilizer import (
    compare_with_structured,
    frobenius_split,
    stabilizer_lie_algebra,
)
from .torus import (
    invariant_monomial_witness,
    origin_in_hull,
    torus_nullcone_maximal_supports,
)

EXHAUSTIVE_MAX = 3
SAMPLED_SUPPORTS = 1000
EXTRA_SEEDS = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def default_seed():
    raw = os.environ.get("SYMCONE_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SYMCONE_SEED must be an integer, got {raw!r}") from None


def _matrix(rows):
    return [[str(x) for x in row] for row in rows]


# subcommands

def cmd_gens(args):
    basis = fe_basis(args.n, args.m)
    space = VariableSpace.matrices(args.n, args.m)
    result = io.family_to_json(space, [f for _, f in basis], [e for e, _ in basis])
    result["count"] = len(basis)
    return {"n": args.n, "m": args.m}, result, None, None


def cmd_stab(args):
    space, polys = io.family_from_json(io.load_json(args.gens))
    L = stabilizer_lie_algebra(polys)
    result = {"dim": L.dim}
    if space.is_matrix:
        cmp = compare_with_structured(L, space.n, space.m)
        result["equals_structured"] = cmp.equal
        result["structured_dim"] = cmp.dim_expected
        if cmp.witness is not None:
            result["witness"] = cmp.as_dict()["witness"]
    else:
        result["equals_structured"] = None
    result["closed_under_commutator"] = L.is_closed_under_commutator()
    return {"gens": args.gens, "polynomials": len(polys)}, result, None, None


def cmd_sdit(args):
    X = io.tuple_from_json(io.load_json(args.tuple))
    params = {"tuple": args.tuple, "mode": args.mode, "n": X.n, "m": X.m}
    if args.mode == "symbolic":
        det = symbolic_determinant(X)
        verdict = Verdict.SINGULAR if det.is_zero() else Verdict.NONSINGULAR
        result = {"verdict": verdict.value, "determinant": format_polynomial(det)}
        return params, result, None, "0"
    seed = args.seed if args.seed is not None else default_seed()
    params["trials"] = args.trials
    res = sdit_random(X, seed=seed, trials=args.trials)
    return params, res.as_dict(), seed, str(res.error_bound)


def _support_certificate(I):
    J = I.project()
    block = shrunk_block(J)
    if block is not None:
        R, C = block
        return {"zero_block_rows": [r + 1 for r in R], "zero_block_cols": [c + 1 for c in C]}
    match = maximum_matching(J, J.n)
    return {"permutation": [match[j] + 1 for j in range(J.n)]}


def cmd_coord(args):
    I = io.support_from_json(io.load_json(args.support), args.n, args.m)
    res = coord_subspace_membership(I)
    result = res.as_dict()
    result["projected_support"] = [[j + 1, k + 1] for j, k in I.project().sorted()]
    result["certificate"] = _support_certificate(I)
    return {"support": args.support, "n": args.n, "m": args.m}, result, None, None


def _parse_subset(text, count):
    try:
        idx = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise UsageError(f"--subset expects comma separated 1-based indices, got {text!r}") from None
    if not idx:
        raise UsageError("--subset is empty")
    if any(not 1 <= i <= count for i in idx):
        raise UsageError(f"--subset indices must lie in 1..{count}")
    return [i - 1 for i in idx]


def cmd_torus(args):
    ws = io.weights_from_json(io.load_json(args.weights))
    params = {"weights": args.weights, "count": len(ws), "dim": ws.dim}
    if args.maximal:
        sets = torus_nullcone_maximal_supports(ws)
        result = {"maximal_supports": [[i + 1 for i in I] for I in sets]}
        return params, result, None, None
    I = _parse_subset(args.subset, len(ws)) if args.subset else list(range(len(ws)))
    params["subset"] = [i + 1 for i in I]
    if not I:
        raise UsageError("the weight system is empty")
    cert = origin_in_hull(ws, I)
    if cert is None:
        result = {"origin_in_hull": False, "certificate": None, "invariant_monomial": None}
    else:
        result = {
            "origin_in_hull": True,
            "certificate": {"indices": [i + 1 for i in cert.indices],
                            "coeffs": [str(c) for c in cert.coeffs]},
            "invariant_monomial": invariant_monomial_witness(ws, I),
        }
    return params, result, None, None


def cmd_frobenius(args):
    n = args.n
    det = fe_basis(n, 1)[0][1]
    L = stabilizer_lie_algebra([det])
    cmp = compare_with_structured(L, n, 1)
    splits = [frobenius_split(M, n) for M in L.elements()]
    result = {
        "dim": L.dim,
        "expected_dim": 2 * n * n - 1,
        "all_of_form_A_I_plus_I_B": all(s is not None for s in splits),
        "equals_structured": cmp.equal,
        "basis": [None if s is None else {"A": _matrix(s[0]), "B": _matrix(s[1])} for s in splits],
    }
    return {"n": n}, result, None, None


def _contains_permutation_enum(J):
    n = J.n
    return any(all((j, s[j]) in J.members for j in range(n)) for s in permutations(range(n)))


def _check_support(I, rng, samples):
    """Exact certificates for one coordinate subspace L_I."""
    res = coord_subspace_membership(I)
    free = is_permutation_free(I.project())
    ok = res.in_sing == res.in_nsing == free
    if I.n <= 6:
        ok = ok and (free != _contains_permutation_enum(I.project()))
    if free:
        # common zero block certifies all of L_I lies in NSING, hence in SING
        ok = ok and shrunk_block(I.project()) is not None
        for _ in range(samples):
            ok = ok and sdit_symbolic(random_tuple_on(I, rng)) is Verdict.SINGULAR
    else:
        match = maximum_matching(I.project(), I.n)
        sigma = [match[j] for j in range(I.n)]
        ok = ok and sdit_symbolic(permutation_point(I, sigma)) is Verdict.NONSINGULAR
    return ok, free


def _random_supports(n, m, rng, count):
    positions = list(product(range(m), range(n), range(n)))
    out = []
    for _ in range(count):
        density = rng.random()
        out.append(SupportSet.of(n, [p for p in positions if rng.random() < density], m))
    return out


def coordinate_scan(n, m, seed, samples=1):
    """Check in_sing = in_nsing with exact certificates over coordinate subspaces.

    For n, m <= 3 every J in [n] x [n] is covered through its full lift [m] x J
    (which has the same projection), followed by random supports; beyond that
    only random supports are checked.
    """
    rng = random.Random(seed)
    supports = []
    if n <= EXHAUSTIVE_MAX and m <= EXHAUSTIVE_MAX:
        regime = "exhaustive"
        cells = list(product(range(n), range(n)))
        for mask in range(1 << len(cells)):
            J = [cells[b] for b in range(len(cells)) if mask >> b & 1]
            supports.append(SupportSet.of(n, [(i, j, k) for i in range(m) for j, k in J], m))
    else:
        regime = "sampled"
    lifted = len(supports)
    supports += _random_supports(n, m, rng, SAMPLED_SUPPORTS)
    agree = 0
    free_count = 0
    for I in supports:
        ok, free = _check_support(I, rng, samples)
        agree += ok
        free_count += free
    return {
        "regime": regime,
        "projected_supports": lifted,
        "random_supports": SAMPLED_SUPPORTS,
        "checked": len(supports),
        "agreeing": agree,
        "permutation_free": free_count,
        "in_sing_equals_in_nsing": agree == len(supports),
    }


def cmd_obstruction(args):
    n, m = args.n, args.m
    seed = args.seed if args.seed is not None else default_seed()
    X = separation_witness(n, m)
    verdict = sdit_symbolic(X)
    d = 2
    ranks = [blowup_rank_probe(X, d, seed + s) for s in range(EXTRA_SEEDS + 1)]
    scan = coordinate_scan(n, m, seed)
    bound = blowup_error_bound(X, d)
    result = {
        "witness": io.tuple_to_json(X),
        "witness_verdict": verdict.value,
        "blowup": {
            "d": d,
            "seeds": [seed + s for s in range(EXTRA_SEEDS + 1)],
            "ranks": ranks,
            "full_rank": d * n,
            "all_full_rank": all(r == d * n for r in ranks),
        },
        "coordinate_scan": scan,
        "separates": (verdict is Verdict.SINGULAR and all(r == d * n for r in ranks)
                      and scan["in_sing_equals_in_nsing"]),
    }
    # full blow-up rank is a certificate; the bound covers a spurious deficient rank
    return {"n": n, "m": m}, result, seed, str(bound)


def build_parser():
    p = _Parser(prog="symcone", description="Exact computations around SING and NSING.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("gens", help="emit the f_e generators")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)

    s = sub.add_parser("stab", help="stabilizer Lie algebra of a polynomial family")
    s.add_argument("--gens", required=True)

    t = sub.add_parser("sdit", help="symbolic determinant identity test")
    t.add_argument("--tuple", required=True)
    t.add_argument("--mode", choices=["symbolic", "random"], default="symbolic")
    t.add_argument("--seed", type=int)
    t.add_argument("--trials", type=int, default=20)

    c = sub.add_parser("coord", help="classify a coordinate subspace")
    c.add_argument("--support", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)

    w = sub.add_parser("torus", help="torus null cone queries")
    w.add_argument("--weights", required=True)
    w.add_argument("--maximal", action="store_true")
    w.add_argument("--subset", help="comma separated 1-based weight indices")

    f = sub.add_parser("frobenius", help="stabilizer of det_n")
    f.add_argument("--n", type=int, required=True)

    o = sub.add_parser("obstruction", help="separation witness and coordinate subspace scan")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--m", type=int, required=True)
    o.add_argument("--seed", type=int)
    return p


COMMANDS = {
    "gens": cmd_gens,
    "stab": cmd_stab,
    "sdit": cmd_sdit,
    "coord": cmd_coord,
    "torus": cmd_torus,
    "frobenius": cmd_frobenius,
    "obstruction": cmd_obstruction,
}


def _validate(args):
    for name in ("n", "m", "trials"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise UsageError(f"--{name} must be >= 1")


def run(argv=None, out=None):
    out = out or sys.stdout
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        _validate(args)
        start = time.perf_counter()
        params, result, seed, bound = COMMANDS[command](args)
        elapsed = time.perf_counter() - start
    except GuardExceededError as exc:
        return _fail(out, command, "guard_exceeded", exc, 2)
    except (UsageError, SymconeError, OSError, ValueError, IndexError) as exc:
        return _fail(out, command, type(exc).__name__, exc, 1)
    report = {
        "command": command,
        "params": params,
        "result": result,
        "elapsed_s": round(elapsed, 6),
        "seed": seed,
        "error_bound": bound,
    }
    out.write(json.dumps(report, indent=2) + "\n")
    return 0


def _fail(out, command, kind, exc, code):
    print(f"symcone: error: {exc}", file=sys.stderr)
    out.write(json.dumps({"command": command, "error": {"type": kind, "message": str(exc)}}) + "\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
