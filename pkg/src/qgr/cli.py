"""The ``qgr`` command line tool.

Exit codes: 0 success or true, 1 false (``equiv``), 2 usage or input error,
3 infinite GK-dimension, 4 inconclusive within the caps.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath

from .errors import InvariantViolation, NotEventuallyPeriodic, NotFiniteGK, QgrError
from .extquiver import ext_quiver, gamma, qgr_equivalent
from .growth import cycle_poset, gk_dimension
from .k0 import ConeOracle, k0, positive_cone_oracle
from .matricial import bratteli, gk1_report, matricial_report, noetherian_check
from .monomial import load_algebra, ufnarovskii_graph
from .oracles import ISO_CAP, poset_iso_bruteforce
from .points import build_extension, classify_point_module, cyclic_point_module, is_split_extension, qgr_hom_dim, rep_from_json
from .poset import Poset
from .quiver import Quiver, load_quiver, serialize

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INFINITE, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4


class UsageError(QgrError):
    pass


def load_input(path: str) -> Quiver:
    """A quiver file, or a ``.alg`` monomial algebra replaced by its Ufnarovskii graph."""
    if path.endswith(".alg"):
        return ufnarovskii_graph(load_algebra(path))
    return load_quiver(path)


def load_poset(path: str) -> Poset:
    data = json.loads(FilePath(path).read_text(encoding="utf-8"))
    pairs = data.get("relations", data.get("covers", []))
    return Poset.from_relations(data["elements"], [tuple(p) for p in pairs], data.get("name", "P"))


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def emit(out, args, data: dict, human: str) -> None:
    if args.format == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(human if human.endswith("\n") else human + "\n")


# ---------------------------------------------------------------- commands

def cmd_gk(args, out) -> int:
    Q = load_input(args.file)
    g = gk_dimension(Q)
    if not g.finite:
        emit(out, args, g.to_json(), f"infinite GK-dimension; doubly cyclic vertices: {' '.join(g.doubly_cyclic)}")
        return EXIT_INFINITE
    emit(out, args, g.to_json(), f"GK-dimension {g.gk}; longest cycle chain: {' < '.join(g.max_chain) or '(none)'}")
    return EXIT_OK


def cmd_cycles(args, out) -> int:
    cp = cycle_poset(load_input(args.file))
    P = cp.as_poset()
    data = {
        "cycles": [{"base": c.base, "vertices": list(c.vertices), "arrows": list(c.arrows)} for c in cp.cycles],
        "order": [list(r) for r in P.relations()],
    }
    lines = [f"{c.base}: {' -> '.join(c.vertices)} (length {c.length})" for c in cp.cycles]
    lines += [f"{x} < {y}" for x, y in P.relations()]
    emit(out, args, data, "\n".join(lines) or "(no cycles)")
    return EXIT_OK


def cmd_ext_quiver(args, out) -> int:
    E = ext_quiver(load_input(args.file))
    if args.format == "dot":
        out.write(serialize(E.as_quiver(), "dot"))
        return EXIT_OK
    lines = [f"vertex {v} (cycle length {n})" for v, n in E.vertices] + [f"{v} -> {w}" for v, w in E.arrows]
    emit(out, args, E.to_json(), "\n".join(lines) or "(empty)")
    return EXIT_OK


def cmd_simples(args, out) -> int:
    Q = load_input(args.file)
    E = ext_quiver(Q)
    data = {"count": len(E.vertices), "simples": [{"vertex": v, "cycle_length": n} for v, n in E.vertices]}
    lines = [f"{len(E.vertices)} simple objects"] + [f"O_{v} (cycle length {n})" for v, n in E.vertices]
    if args.verify:
        D = args.cap_degree
        mods = {v: cyclic_point_module(Q, v, D) for v in E.names}
        table = {v: {w: qgr_hom_dim(mods[v], mods[w]).to_json() for w in E.names} for v in E.names}
        ok = all(table[v][w]["stabilized"] and table[v][w]["dim"] == int(v == w) for v in E.names for w in E.names)
        data["hom_check"] = {"ok": ok, "table": table}
        lines.append(f"Hom(O_v, O_w) = delta_vw at D={D}: {'yes' if ok else 'no'}")
        if not ok:
            emit(out, args, data, "\n".join(lines))
            return EXIT_INCONCLUSIVE
    emit(out, args, data, "\n".join(lines))
    return EXIT_OK


def cmd_equiv(args, out) -> int:
    Q1, Q2 = load_input(args.file), load_input(args.other)
    eq = qgr_equivalent(Q1, Q2)
    data = eq.to_json()
    lines = [f"equivalent: {'yes' if eq.equivalent else 'no'} ({eq.reason})"]
    if eq.bijection:
        lines += [f"  {x} -> {y}" for x, y in eq.bijection.items()]
    if args.verify:
        P1, P2 = ext_quiver(Q1).as_poset(), ext_quiver(Q2).as_poset()
        if max(len(P1), len(P2)) <= ISO_CAP:
            agree = poset_iso_bruteforce(P1, P2)[0] == eq.equivalent
            data["verified"] = agree
            lines.append(f"brute-force check agrees: {'yes' if agree else 'NO'}")
    emit(out, args, data, "\n".join(lines))
    return EXIT_OK if eq.equivalent else EXIT_FALSE


def cmd_canonical(args, out) -> int:
    P = load_poset(args.file) if args.poset else ext_quiver(load_input(args.file)).as_poset()
    fmt = args.format if args.format in ("json", "dot") else "text"
    out.write(serialize(gamma(P), fmt))
    return EXIT_OK


def cmd_k0(args, out) -> int:
    K = k0(load_input(args.file))
    data = K.to_json(args.normalized)
    basis = data["basis"]
    lines = [
        f"K0 = Z^{K.rank} with basis {' '.join(basis) or '(empty)'}",
        "positive cone: v = 0 or v is positive at every minimal element of its support",
        "order: " + (", ".join(f"{x} < {y}" for x, y in data["poset"]["covers"]) or "(discrete)"),
        f"order unit: ({', '.join(map(str, K.order_unit))})",
        f"normalization: Veronese degree {K.normalization.exponent} (L={K.normalization.L}, n={K.normalization.multiplier})",
    ]
    code = EXIT_OK
    if args.test_vector is not None:
        v = parse_vector(args.test_vector)
        if len(v) != K.rank:
            raise UsageError(f"test vector needs {K.rank} entries")
        member = K.contains(v, normalized=args.normalized)
        data["test_vector"] = {"vector": list(v), "member": member}
        lines.append(f"{v} in cone: {'yes' if member else 'no'}")
        if args.verify:
            vn = v if args.normalized else K.from_declaration_order(v)
            image = tuple(sum(c * r[k] for c, r in zip(vn, K.R)) for k in range(len(K.normalization.matrix)))
            verdict = ConeOracle(K)(image, args.cap_iterations)
            data["test_vector"]["oracle"] = verdict.to_json()
            lines.append(f"iteration oracle: {verdict.verdict}")
            if verdict.verdict == "inconclusive":
                code = EXIT_INCONCLUSIVE
    emit(out, args, data, "\n".join(lines))
    return code


def cmd_cone_test(args, out) -> int:
    Q = load_input(args.file)
    K = k0(Q)
    v = parse_vector(args.test_vector)
    if len(v) != len(Q.vertices):
        raise UsageError(f"test vector needs {len(Q.vertices)} entries, one per vertex")
    x = v if args.normalized else K.normalization.to_normalized(v)
    verdict = positive_cone_oracle(K, x, args.cap_iterations)
    steps = f" after {verdict.steps} steps" if verdict.steps is not None else ""
    emit(out, args, verdict.to_json(), f"{verdict.verdict}{steps}: {verdict.reason}")
    return EXIT_INCONCLUSIVE if verdict.verdict == "inconclusive" else EXIT_OK


def cmd_hom(args, out) -> int:
    Q = load_input(args.file)
    D = args.cap_degree
    h = qgr_hom_dim(cyclic_point_module(Q, args.v, D), cyclic_point_module(Q, args.w, D))
    state = "stabilized" if h.stabilized else "not stabilized"
    emit(out, args, h.to_json(), f"dim Hom(O_{args.v}, O_{args.w}) = {h.dim} ({state} at D={D})")
    return EXIT_OK if h.stabilized else EXIT_INCONCLUSIVE


def cmd_ext_split(args, out) -> int:
    Q = load_input(args.file)
    if args.normalized:
        Q = k0(Q).normalization.quiver
    D = args.cap_degree
    nu = list(parse_vector(args.nu))
    if not nu:
        raise UsageError("--nu needs at least one entry")
    nu += [nu[-1]] * (D - len(nu))
    r = args.arrow
    if r is None:
        candidates = [a.id for a in Q.out_arrows(args.v) if a.tgt == args.w]
        if not candidates:
            raise UsageError(f"no arrow {args.v} -> {args.w}")
        r = candidates[0]
    verdict = is_split_extension(build_extension(Q, args.v, args.w, r, nu, D))
    emit(out, args, verdict.to_json(), f"{verdict.verdict} (D={D}, arrow {r})")
    return EXIT_INCONCLUSIVE if verdict.verdict == "inconclusive" else EXIT_OK


def cmd_point_classify(args, out) -> int:
    rep = rep_from_json(FilePath(args.file).read_text(encoding="utf-8"))
    try:
        d = classify_point_module(rep)
    except NotEventuallyPeriodic as exc:
        emit(out, args, {"verdict": "inconclusive", "reason": str(exc)}, f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    emit(out, args, d.to_json(), f"isomorphic to O_{d.base} in QGr (cycle {' -> '.join(d.sequence)})")
    return EXIT_OK


def cmd_monomial(args, out) -> int:
    U = ufnarovskii_graph(load_algebra(args.file))
    out.write(serialize(U, args.format if args.format in ("json", "dot") else "text"))
    return EXIT_OK


def cmd_bratteli(args, out) -> int:
    seq = bratteli(load_input(args.file), args.n_max)
    emit(out, args, {"bratteli": [list(p) for p in seq]}, "\n".join(f"{m}: {list(p)}" for m, p in enumerate(seq)))
    return EXIT_OK


def cmd_noetherian(args, out) -> int:
    Q = load_input(args.file)
    left, right = noetherian_check(Q)
    g1 = gk1_report(Q)
    data = {"left": left, "right": right, "gk1": g1.to_json()}
    emit(out, args, data, f"left Noetherian: {'yes' if left else 'no'}\nright Noetherian: {'yes' if right else 'no'}\n{g1.summary}")
    return EXIT_OK


def cmd_report(args, out) -> int:
    Q = load_input(args.file)
    g = gk_dimension(Q)
    data: dict = {"quiver": {"name": Q.name, "vertices": len(Q.vertices), "arrows": len(Q.arrows)}, "gk": g.to_json()}
    if g.finite:
        E = ext_quiver(Q)
        data["ext_quiver"] = E.to_json()
        data["simples"] = len(E.vertices)
        data["k0"] = k0(Q).to_json(args.normalized)
        data.update(matricial_report(Q, args.n_max))
        data["gk1"] = gk1_report(Q).to_json()
    out.write(json.dumps(data, indent=2) + "\n")
    return EXIT_OK if g.finite else EXIT_INFINITE


# ---------------------------------------------------------------- parser

def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-degree", type=positive_int, default=15, help="truncation degree D")
    common.add_argument("--cap-iterations", type=positive_int, default=50, help="iteration cap for cone tests")
    common.add_argument("--format", choices=("human", "json", "dot"), default="human")
    common.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    common.add_argument("--normalized", action="store_true", help="use the normalized vertex order")
    common.add_argument("--verify", action="store_true", help="cross-check with the brute-force oracles")

    parser = argparse.ArgumentParser(prog="qgr", description="Invariants of quotient categories of path algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, *positional):
        p = sub.add_parser(name, parents=[common], help=help)
        for arg in positional:
            p.add_argument(arg)
        p.set_defaults(func=func)
        return p

    add("gk", cmd_gk, "GK-dimension with a witness", "file")
    add("cycles", cmd_cycles, "simple cycles and their reachability order", "file")
    add("ext-quiver", cmd_ext_quiver, "the Ext-quiver", "file")
    add("simples", cmd_simples, "the simple objects", "file")
    add("equiv", cmd_equiv, "decide equivalence of the quotient categories", "file", "other")
    p = add("canonical", cmd_canonical, "the canonical quiver of the Ext-quiver", "file")
    p.add_argument("--poset", action="store_true", help="read a poset JSON file instead of a quiver")
    p = add("k0", cmd_k0, "K0 as an ordered group", "file")
    p.add_argument("--test-vector")
    p = add("cone-test", cmd_cone_test, "cone membership by iterating the incidence matrix", "file")
    p.add_argument("--test-vector", required=True)
    add("hom", cmd_hom, "dim Hom(O_v, O_w)", "file", "v", "w")
    p = add("ext-split", cmd_ext_split, "whether N(nu) splits", "file", "v", "w")
    p.add_argument("--nu", required=True, help="comma-separated; the last value is repeated")
    p.add_argument("--arrow", help="arrow v -> w to use (default: the first one)")
    add("point-classify", cmd_point_classify, "identify a point module", "file")
    point = sub.add_parser("point", help="point module tools")
    point_sub = point.add_subparsers(dest="point_command", required=True)
    p = point_sub.add_parser("classify", parents=[common], help="same as point-classify")
    p.add_argument("file")
    p.set_defaults(func=cmd_point_classify)
    mono = sub.add_parser("monomial", help="monomial algebra tools")
    mono_sub = mono.add_subparsers(dest="monomial_command", required=True)
    p = mono_sub.add_parser("graph", parents=[common], help="the Ufnarovskii graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_monomial)
    p = add("bratteli", cmd_bratteli, "Bratteli vectors", "file")
    p.add_argument("--n-max", type=int, default=12)
    add("noetherian", cmd_noetherian, "Noetherian and GK-1 report", "file")
    p = add("report", cmd_report, "everything, as JSON", "file")
    p.add_argument("--n-max", type=int, default=12)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except InvariantViolation:
        raise
    except NotFiniteGK as exc:
        if args.format == "json":
            out.write(json.dumps({"finite": False, "doubly_cyclic": list(exc.doubly_cyclic)}, indent=2) + "\n")
        err.write(f"qgr: {exc}\n")
        return EXIT_INFINITE
    except (QgrError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        err.write(f"qgr: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
