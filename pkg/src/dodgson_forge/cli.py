"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 verified mathematical failure
(identity violation, failed congruence), 2 budget exhausted or unsupported
input.  Graph arguments accept a JSON file path or ``catalog:<name>``.
Reports carry the schema tag dodgson-forge/1 and are byte-deterministic for
fixed seed and flags.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys

from .errors import BudgetExceededError, InvalidArgumentError, SizeLimitError, UnsupportedDegreeError
from .graph import EdgeOrdering, Graph, graph_stats, vertex_width
from .poly import MultiPoly
from .catalog import catalog, catalog_names
from .dodgson import DodgsonKey, dodgson, graph_polynomial, identity_suite
from .denom import denom_search, denominator_reduce, five_invariant, higher_invariant, is_split
from .reduction import DodgsonPool, certify, fubini_reduce, reduce_order
from .oracle import c2_congruence, fuzz_graph_identity, point_count
from ._parallel import Pool

SCHEMA = "dodgson-forge/1"


def load_graph(spec: str) -> Graph:
    if spec.startswith("catalog:"):
        return catalog(spec.split(":", 1)[1])
    return Graph.load(spec)


def _parse_labels(text: str):
    return [int(x) for x in text.split(",") if x.strip()]


def _emit(args, payload: dict, text_lines):
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
    if args.format == "json":
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dodgson-forge",
        description="Graph polynomials, Dodgson identities, linear and denominator reduction.",
    )
    parser.add_argument("--threads", type=int, default=None, help="worker threads")
    parser.add_argument("--timeout-s", type=int, default=None, help="wall-clock limit")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--budget-terms", type=int, default=2_000_000)
    parser.add_argument("--budget-evals", type=int, default=10 ** 8)
    parser.add_argument("--report", metavar="OUT.json", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="print a catalog graph")
    p.add_argument("name", nargs="?", default=None)

    for name, hlp in [
        ("psi", "graph polynomial"),
        ("vw", "vertex width with witness ordering"),
        ("identities", "run the exact identity suite"),
    ]:
        p = sub.add_parser(name, help=hlp)
        p.add_argument("graph")
        if name == "identities":
            p.add_argument("--trials", type=int, default=20)
            p.add_argument("--dual", default=None, help="planar dual graph file")
        if name == "vw":
            p.add_argument("--budget", type=int, default=1 << 22)

    p = sub.add_parser("dodgson", help="Dodgson polynomial for a key")
    p.add_argument("graph")
    p.add_argument("--key", required=True, help='e.g. "I=1,2;J=3,4;K="')

    p = sub.add_parser("five", help="five-invariant of five edges")
    p.add_argument("graph")
    p.add_argument("--edges", required=True, help="e.g. 1,2,3,4,5")
    p.add_argument("--split", action="store_true", help="also report the split")

    p = sub.add_parser("higher", help="higher invariant of n >= 5 edges")
    p.add_argument("graph")
    p.add_argument("--edges", required=True)

    p = sub.add_parser("reduce", help="linear reduction / certification")
    p.add_argument("graph")
    p.add_argument("--order", default=None, help="e.g. 1,2,3")
    p.add_argument("--fubini", action="store_true")
    p.add_argument("--edges", default=None, help="edge subset for --fubini")
    p.add_argument("--max-stage", type=int, default=None)
    p.add_argument("--strategy", choices=("given-order", "vw-witness-order", "search"),
                   default=None)

    p = sub.add_parser("denom", help="denominator reduction")
    p.add_argument("graph")
    p.add_argument("--order", default=None)
    p.add_argument("--search", action="store_true")
    p.add_argument("--state-budget", type=int, default=1 << 16)

    p = sub.add_parser("count", help="finite-field point count")
    p.add_argument("target", help="graph file, catalog:<name>, or polynomial .txt")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--vars", default=None, help="a1,a2,... ambient variables")

    p = sub.add_parser("fuzz", help="randomized identity testing mod p")
    p.add_argument("graph")
    p.add_argument("--identity", required=True,
                   choices=("det_tree", "dodgson1", "dodgson2", "plucker2"))
    p.add_argument("--trials", type=int, default=50)

    p = sub.add_parser("c2", help="point-count congruence against a denominator")
    p.add_argument("graph")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--order", default=None, help="reduction order prefix")
    p.add_argument("--stage", type=int, default=5)

    args = parser.parse_args(argv)
    if args.timeout_s:
        def _alarm(signum, frame):
            raise BudgetExceededError(f"timeout after {args.timeout_s}s")

        signal.signal(signal.SIGALRM, _alarm)
        signal.alarm(args.timeout_s)
    pool = Pool(args.threads)
    try:
        return _dispatch(args, pool)
    except (BudgetExceededError, SizeLimitError, UnsupportedDegreeError) as ex:
        print(f"budget/unsupported: {ex}", file=sys.stderr)
        return 2
    except InvalidArgumentError as ex:
        print(f"invalid argument: {ex}", file=sys.stderr)
        return 2


def _dispatch(args, pool) -> int:
    cmd = args.command
    if cmd == "catalog":
        if args.name is None:
            for line in catalog_names():
                print(line)
            return 0
        g = catalog(args.name)
        payload = {"schema": SCHEMA, **g.to_json_dict()}
        _emit(args, payload, [g.render()])
        return 0

    if cmd == "psi":
        g = load_graph(args.graph)
        psi = graph_polynomial(g)
        _emit(args, {"schema": SCHEMA, "graph": g.name, "psi": psi.render()}, [psi.render()])
        return 0

    if cmd == "vw":
        g = load_graph(args.graph)
        res = vertex_width(g, budget=args.budget)
        payload = {
            "schema": SCHEMA,
            "graph": g.name,
            "width": res["width"],
            "witness": list(res["witness"]),
            "optimal": res["optimal"],
        }
        _emit(args, payload, [
            f"vw({g.name}) = {res['width']}"
            + ("" if res["optimal"] else " (upper bound, budget hit)"),
            "witness: " + ",".join(str(x) for x in res["witness"]),
        ])
        return 0 if res["optimal"] else 2

    if cmd == "dodgson":
        g = load_graph(args.graph)
        key = DodgsonKey.parse(args.key)
        raw = dodgson(g, key)
        norm = raw.normalized()
        sign = "0" if raw.is_zero() else ("+" if raw == norm else "-")
        payload = {
            "schema": SCHEMA, "graph": g.name, "key": key.render(),
            "raw_sign": sign, "normalized": norm.render(),
        }
        _emit(args, payload, [f"{norm.render()}    (raw sign {sign})"])
        return 0

    if cmd == "five":
        g = load_graph(args.graph)
        edges = _parse_labels(args.edges)
        val = five_invariant(g, edges)
        lines = [val.render()]
        payload = {"schema": SCHEMA, "graph": g.name, "edges": edges, "five": val.render()}
        if args.split:
            rep = is_split(g, edges)
            payload["split"] = {
                "split": rep.split, "zero": rep.zero,
                "vanishing_term": rep.vanishing_term,
                "pair": [p.render() for p in rep.pair] if rep.pair else None,
                "verified": rep.verified,
            }
            lines.append(f"split: {rep.split} zero: {rep.zero}")
        _emit(args, payload, lines)
        return 0

    if cmd == "higher":
        g = load_graph(args.graph)
        edges = _parse_labels(args.edges)
        val = higher_invariant(g, edges)
        _emit(args, {"schema": SCHEMA, "graph": g.name, "edges": edges,
                     "invariant": val.render()}, [val.render()])
        return 0

    if cmd == "reduce":
        g = load_graph(args.graph)
        if args.fubini:
            edges = _parse_labels(args.edges) if args.edges else list(g.edge_labels())
            state = fubini_reduce(g, edges)
            payload = {"schema": SCHEMA, "graph": g.name, "fubini_over": sorted(edges),
                       "state": state.to_json_dict()}
            _emit(args, payload, [
                f"Fubini over {sorted(edges)}: {len(state.polys)} polynomials",
                *(f"  {sp.poly.render()}" for sp in state.polys),
            ])
            return 0
        strategy = args.strategy or ("given-order" if args.order else "search")
        order = _parse_labels(args.order) if args.order else None
        if order is not None and args.max_stage is not None:
            states, halted = reduce_order(g, order, max_stage=args.max_stage,
                                          pool=DodgsonPool(g))
            payload = {
                "schema": SCHEMA, "graph": g.name, "order": order,
                "stages": [st.to_json_dict() for st in states[1:]],
                "halted": halted["stage"] if halted else None,
            }
            _emit(args, payload, [
                f"stage {st.stage}: {len(st.polys)} polynomials" for st in states[1:]
            ])
            return 0
        rep = certify(g, strategy=strategy, order=order)
        payload = {**rep.to_json_dict(), "schema": SCHEMA}
        verdict_line = payload["verdict"]
        _emit(args, payload, [
            f"graph {g.name}: {verdict_line}",
            f"order: {','.join(str(x) for x in rep.order)}",
            f"positivity: {rep.positivity}  ramification: {rep.ramification['pass']}",
            f"M: {rep.M}",
        ])
        return 0 if rep.verdict != "fails-at-stage" else 1

    if cmd == "denom":
        g = load_graph(args.graph)
        if args.search or not args.order:
            res = denom_search(g, state_budget=args.state_budget)
            payload = res.to_json_dict()
            _emit(args, payload, [
                f"graph {g.name}: {res.verdict}",
                f"final denominators: {res.final_denominators}  weight drop: {res.weight_drop}",
                f"states explored: {res.states_explored}  memo violations: {len(res.memo_violations)}",
            ])
            if res.verdict == "unknown":
                return 2
            return 0
        trace = denominator_reduce(g, _parse_labels(args.order))
        payload = trace.to_json_dict()
        lines = [f"P_{s} = {p.render()}" for s, p in trace.P]
        st = trace.status
        lines.append(
            f"status: {st.kind}"
            + (f" at stage {st.stage}" if st.stage else "")
            + (f" d={st.d}" if st.d is not None else "")
            + (f" ({st.obstruction})" if st.obstruction else "")
        )
        _emit(args, payload, lines)
        return 0 if st.kind != "obstruction" else 1

    if cmd == "count":
        if args.target.startswith("catalog:") or args.target.endswith(".json"):
            g = load_graph(args.target)
            f = graph_polynomial(g)
            name = g.name
        else:
            with open(args.target, "r", encoding="utf-8") as fh:
                f = MultiPoly.parse(fh.read())
            name = args.target
        variables = None
        if args.vars:
            variables = [int(v.lstrip("a")) for v in args.vars.split(",") if v.strip()]
        n = point_count(f, args.q, variables=variables, budget=args.budget_evals, pool=pool)
        _emit(args, {"schema": SCHEMA, "target": name, "q": args.q, "count": n},
              [f"|V({name})(F_{args.q})| = {n}"])
        return 0

    if cmd == "fuzz":
        g = load_graph(args.graph)
        verdict = fuzz_graph_identity(g, args.identity, trials=args.trials, seed=args.seed)
        payload = {**verdict.to_json_dict(), "graph": g.name, "identity": args.identity}
        _emit(args, payload, [
            f"{args.identity} on {g.name}: "
            + ("probable-equal" if verdict.equal else f"UNEQUAL {verdict.witness}"),
        ])
        return 0 if verdict.equal else 1

    if cmd == "identities":
        g = load_graph(args.graph)
        dual = load_graph(args.dual) if args.dual else None
        rep = identity_suite(g, trials=args.trials, seed=args.seed, dual=dual)
        lines = []
        for name, entry in sorted(rep.items()):
            if isinstance(entry, dict):
                lines.append(
                    f"{name}: {'pass' if entry['pass'] else 'FAIL'} ({entry['checked']} checks)"
                )
        lines.append(f"overall: {'pass' if rep['pass'] else 'FAIL'}")
        _emit(args, {"schema": SCHEMA, "graph": g.name, "suite": rep_to_json(rep)}, lines)
        return 0 if rep["pass"] else 1

    if cmd == "c2":
        g = load_graph(args.graph)
        order = _parse_labels(args.order) if args.order else list(g.edge_labels())
        trace = denominator_reduce(g, order)
        stages = dict(trace.P)
        if args.stage not in stages:
            raise InvalidArgumentError(f"trace has no stage {args.stage}")
        pk = stages[args.stage]
        consumed = set(order[: args.stage])
        remaining = [e for e in g.edge_labels() if e not in consumed]
        rep = c2_congruence(g, pk, args.stage, args.q, remaining, budget=args.budget_evals)
        _emit(args, rep.to_json_dict(), [
            f"|X_G(F_{args.q})| = {rep.count_graph}, |V(P_{args.stage})(F_{args.q})| = {rep.count_denominator}",
            f"congruence mod q^3: {'holds, sign ' + str(rep.sign) if rep.holds else 'FAILS'}",
        ])
        return 0 if rep.holds else 1

    raise InvalidArgumentError(f"unknown command {cmd}")


def rep_to_json(rep: dict) -> dict:
    out = {}
    for k, v in rep.items():
        out[k] = v
    return out


if __name__ == "__main__":
    sys.exit(main())
