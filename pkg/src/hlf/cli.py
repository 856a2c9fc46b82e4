"""Command line front end.

Single queries print a short answer line by default and a JSON report with
--json; job files and check suites always print JSON.  Reports use sorted
keys so identical inputs and seeds give identical bytes; wall time goes to
stderr only.  Exit codes: 0 all pass, 1 expectation or property failure,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import checks
from .convergence import DIVERGES, converges, unit_converges
from .errors import HlfError, ParseError
from .fields import parse_field
from .opens import open_from_data, product_escape_witness, \
    subgroup_escape_witness
from .parsing import parse_element
from .points import (ChartedScheme, OUT_OF_CHART, Point, PointSeqFamily,
                     chart_transfer, member_points, point_seq_converges,
                     presentation_from_data, scheme_from_data)
from .sequences import parse_family
from .valuation import rank_valuation
from .weil import ScalarExtPresentation, scalar_ext_from_data, weil_restrict


def _need(inp, key):
    v = inp.get(key)
    if v is None:
        raise ParseError("missing required input %r" % key)
    return v


def _read_json(spec):
    """A file path, an @file path, or inline data."""
    if isinstance(spec, dict):
        return spec
    path = spec[1:] if spec.startswith("@") else spec
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise ParseError("cannot read %s: %s" % (path, err))
    except json.JSONDecodeError as err:
        raise ParseError("%s is not valid JSON: %s" % (path, err))


def _load_open(spec, field_text=None):
    data = _read_json(spec)
    text = data.get("field") or field_text
    if text is None:
        raise ParseError("open descriptor carries no field")
    field = parse_field(text)
    return field, open_from_data(field, data.get("open", data))


def _load_scheme(spec):
    data = _read_json(spec)
    if "charts" in data:
        return scheme_from_data(data)
    if "theta" in data:
        return scalar_ext_from_data(data)
    return presentation_from_data(data)


def _split_coords(field, text):
    return tuple(parse_element(field, part) for part in text.split(","))


def _chart_presentation(X, inp):
    if isinstance(X, ChartedScheme):
        return X.charts[int(inp.get("chart") or 0)]
    return X


# --- task handlers ------------------------------------------------------------

def _task_valuation(inp):
    f = parse_field(_need(inp, "field"))
    x = parse_element(f, _need(inp, "elem"))
    r = inp.get("rank")
    v = rank_valuation(x, int(r) if r is not None else None)
    rep = {"task": "valuation", "field": _need(inp, "field"),
           "elem": inp["elem"], "valuation": list(v)}
    if r is not None:
        rep["rank"] = int(r)
    return rep, 0, repr(tuple(v))


def _task_member(inp):
    field, U = _load_open(_need(inp, "open"), inp.get("field"))
    x = parse_element(field, _need(inp, "elem"))
    ans = "YES" if U.contains(x) else "NO"
    return {"task": "member", "field": repr(field), "elem": inp["elem"],
            "open": U.to_data(), "answer": ans}, 0, ans


def _task_converge(inp):
    f = parse_field(_need(inp, "field"))
    fam = parse_family(f, _need(inp, "seq"))
    limit = inp.get("limit")
    L = parse_element(f, limit) if limit is not None else None
    topo = inp.get("topology") or "higher"
    if topo == "parshin":
        if L is None or L.is_zero():
            raise ParseError("the parshin topology lives on units; "
                             "pass a nonzero --limit")
        v = unit_converges(fam, L, route="decomposition")
    else:
        v = converges(fam, limit=L, topology=topo)
    rep = {"task": "converge", "field": inp["field"], "seq": inp["seq"],
           "topology": topo}
    if limit is not None:
        rep["limit"] = limit
    rep.update(v.to_data())
    return rep, 0, _verdict_lines(v)


def _task_units(inp):
    f = parse_field(_need(inp, "field"))
    fam = parse_family(f, _need(inp, "seq"))
    L = parse_element(f, _need(inp, "limit"))
    topo = inp.get("topology") or "higher"
    if topo == "valuation":
        raise ParseError("the units task answers the higher and parshin "
                         "readings only")
    route = "decomposition" if topo == "parshin" else "ratio"
    v = unit_converges(fam, L, route=route)
    rep = {"task": "units", "field": inp["field"], "seq": inp["seq"],
           "limit": inp["limit"], "route": route}
    rep.update(v.to_data())
    return rep, 0, _verdict_lines(v)


def _verdict_lines(v):
    out = [v.kind]
    if v.certificate is not None:
        out.append("certificate: %r" % v.certificate)
    if v.witness is not None:
        out.append("witness: %r" % v.witness)
    if v.reason is not None:
        out.append("reason: %s" % v.reason)
    return "\n".join(out)


def _task_points_member(inp):
    X = _load_scheme(_need(inp, "scheme"))
    if isinstance(X, ScalarExtPresentation):
        coords = _scalar_coords(X, _need(inp, "elem"))
        ans = X.member(coords)
    else:
        pres = _chart_presentation(X, inp)
        coords = _split_coords(pres.ring.field, _need(inp, "elem"))
        ans = member_points(pres, coords)
    return {"task": "points-member", "elem": inp["elem"],
            "answer": ans}, 0, ans


def _scalar_coords(Y, text):
    f = Y.ext.ring.field
    out = []
    for part in text.split(";"):
        comps = _split_coords(f, part)
        out.append(Y.ext.scalar(comps))
    return tuple(out)


def _task_points_map(inp):
    X = _load_scheme(_need(inp, "scheme"))
    if not isinstance(X, ChartedScheme):
        raise ParseError("points-map needs a charted scheme file")
    i = int(_need(inp, "chart"))
    j = int(_need(inp, "to_chart"))
    coords = _split_coords(X.ring.field, _need(inp, "elem"))
    res = chart_transfer(X, Point(coords, chart=i), j)
    if res == OUT_OF_CHART:
        return {"task": "points-map", "result": OUT_OF_CHART}, 0, OUT_OF_CHART
    human = "(%s)@%d" % (", ".join(str(c) for c in res.coords), j)
    return {"task": "points-map", "chart": j,
            "coords": [str(c) for c in res.coords]}, 0, human


def _task_points_converge(inp):
    X = _load_scheme(_need(inp, "scheme"))
    pres = _chart_presentation(X, inp)
    f = pres.ring.field
    fams = tuple(parse_family(f, part)
                 for part in _need(inp, "seq").split(","))
    coords = _split_coords(f, _need(inp, "limit"))
    v = point_seq_converges(pres, PointSeqFamily(fams, Point(coords)))
    rep = {"task": "points-converge", "seq": inp["seq"],
           "limit": inp["limit"]}
    rep.update(v.to_data())
    human = v.kind
    if v.kind == DIVERGES and v.against is not None:
        human += " (coordinate %d)" % v.against
    return rep, 0, human


def _task_weil(inp):
    Y = _load_scheme(_need(inp, "scheme"))
    if not isinstance(Y, ScalarExtPresentation):
        raise ParseError("weil needs a scalar extension scheme file")
    W = weil_restrict(Y)
    pres = W.presentation
    rep = {"task": "weil", "ring": pres.ring.describe(),
           "vars": list(pres.variables),
           "gens": [g.text() for g in pres.gens]}
    lines = ["V(%s) in A^%d" % (", ".join(rep["gens"]) or "0", pres.arity)]
    if inp.get("elem") is not None:
        coords = _scalar_coords(Y, inp["elem"])
        x = W.encode(coords)
        rep["encoded"] = [str(c) for c in x.coords]
        rep["member_source"] = Y.member(coords)
        rep["member_restricted"] = member_points(pres, x.coords)
        lines.append("encoded: (%s)" % ", ".join(rep["encoded"]))
        lines.append("member: %s / %s" % (rep["member_source"],
                                          rep["member_restricted"]))
    return rep, 0, "\n".join(lines)


def _task_witness_subgroup(inp):
    spec = _need(inp, "open")
    if isinstance(spec, list):
        if len(spec) != 1:
            raise ParseError("witness-subgroup takes one open")
        spec = spec[0]
    field, U = _load_open(spec, inp.get("field"))
    w = subgroup_escape_witness(U)
    if w is None:
        return {"task": "witness-subgroup", "witness": None}, 1, "NONE"
    ok = w.checked()
    rep = {"task": "witness-subgroup", "witness": w.to_data(), "checked": ok}
    human = "%s\n%s" % ("checked" if ok else "FAILED",
                        ", ".join(str(e) for e in w.elems))
    return rep, 0 if ok else 1, human


def _task_witness_product(inp):
    spec = _need(inp, "open")
    if not isinstance(spec, list) or len(spec) != 3:
        raise ParseError("witness-product takes three opens: two factors "
                         "and the target")
    loaded = [_load_open(s, inp.get("field")) for s in spec]
    fields = [f for f, _ in loaded]
    if fields[1] != fields[0] or fields[2] != fields[0]:
        raise ParseError("the three opens live over different fields")
    V1, V2, W = (U for _, U in loaded)
    w = product_escape_witness(V1, V2, W)
    if w is None:
        return {"task": "witness-product", "witness": None}, 1, "NONE"
    ok = w.checked()
    rep = {"task": "witness-product", "witness": w.to_data(), "checked": ok}
    human = "%s\n%s" % ("checked" if ok else "FAILED",
                        ", ".join(str(e) for e in w.elems))
    return rep, 0 if ok else 1, human


_HANDLERS = {"valuation": _task_valuation, "member": _task_member,
             "converge": _task_converge, "units": _task_units,
             "points-member": _task_points_member,
             "points-map": _task_points_map,
             "points-converge": _task_points_converge,
             "weil": _task_weil,
             "witness-subgroup": _task_witness_subgroup,
             "witness-product": _task_witness_product}


# --- commands -----------------------------------------------------------------

def _emit(args, rep, human):
    if getattr(args, "json", False):
        print(json.dumps(rep, indent=2, sort_keys=True))
    else:
        print(human)


def _cmd_single(kind):
    def run(args):
        rep, code, human = _HANDLERS[kind](vars(args))
        _emit(args, rep, human)
        return code
    return run


def _seed_of(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("HLF_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ParseError("HLF_SEED must be an integer, not %r" % env)


def _cmd_check(args):
    seed = _seed_of(args)
    t0 = time.time()
    if args.suite:
        rep = checks.run_suite(args.suite, seed, args.battery_size)
    else:
        rep = checks.run_all(seed, args.battery_size)
    print(json.dumps(rep, indent=2, sort_keys=True))
    print("completed in %.1fs" % (time.time() - t0), file=sys.stderr)
    return 0 if rep["ok"] else 1


def _cmd_run(args):
    data = _read_json(args.job)
    tasks = data.get("tasks")
    if not isinstance(tasks, list):
        raise ParseError("a job file holds a list under 'tasks'")
    ids = [t.get("id") for t in tasks]
    if any(i is None for i in ids) or len(set(ids)) != len(ids):
        raise ParseError("task ids must be present and unique")
    entries, worst = [], 0
    t0 = time.time()
    for t in tasks:
        kind = t.get("kind")
        if kind not in _HANDLERS:
            raise ParseError("task %r has unknown kind %r" % (t["id"], kind))
        try:
            rep, code, human = _HANDLERS[kind](t)
        except HlfError as err:
            entries.append({"id": t["id"], "kind": kind, "error": str(err)})
            worst = 2
            continue
        entry = {"id": t["id"], "kind": kind, "report": rep}
        if "expect" in t:
            entry["pass"] = human.splitlines()[0] == t["expect"]
            if not entry["pass"]:
                worst = max(worst, 1)
        worst = max(worst, code)
        entries.append(entry)
    print(json.dumps({"tasks": entries, "ok": worst == 0},
                     indent=2, sort_keys=True))
    print("completed in %.1fs" % (time.time() - t0), file=sys.stderr)
    return worst


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="hlf",
        description="Exact arithmetic, topology and rational point checks "
                    "over higher local fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def task(name, aliases=(), **flags):
        p = sub.add_parser(name, aliases=list(aliases))
        for flag, kw in flags.items():
            p.add_argument("--" + flag.replace("_", "-"), dest=flag, **kw)
        p.add_argument("--json", action="store_true",
                       help="print the full JSON report")
        return p

    kinds = {"valuation": ("val",), "member": (), "converge": (),
             "units": (), "points-member": (), "points-map": (),
             "points-converge": (), "weil": (), "witness-subgroup": (),
             "witness-product": ()}
    flagsets = {
        "valuation": dict(field=dict(required=True), elem=dict(required=True),
                          rank=dict(type=int)),
        "member": dict(field=dict(), elem=dict(required=True),
                       open=dict(required=True)),
        "converge": dict(field=dict(required=True), seq=dict(required=True),
                         limit=dict(),
                         topology=dict(choices=("higher", "valuation",
                                                "parshin"))),
        "units": dict(field=dict(required=True), seq=dict(required=True),
                      limit=dict(required=True),
                      topology=dict(choices=("higher", "parshin"))),
        "points-member": dict(scheme=dict(required=True),
                              elem=dict(required=True), chart=dict(type=int)),
        "points-map": dict(scheme=dict(required=True),
                           elem=dict(required=True),
                           chart=dict(type=int, required=True),
                           to_chart=dict(type=int, required=True)),
        "points-converge": dict(scheme=dict(required=True),
                                seq=dict(required=True),
                                limit=dict(required=True),
                                chart=dict(type=int)),
        "weil": dict(scheme=dict(required=True), elem=dict()),
        "witness-subgroup": dict(field=dict(), open=dict(required=True)),
        "witness-product": dict(field=dict(),
                                open=dict(required=True, action="append")),
    }
    for kind, aliases in kinds.items():
        p = task(kind, aliases, **flagsets[kind])
        p.set_defaults(fn=_cmd_single(kind))

    pc = sub.add_parser("check")
    pc.add_argument("suite", nargs="?", choices=checks.SUITES)
    pc.add_argument("--seed", type=int)
    pc.add_argument("--battery-size", dest="battery_size", type=int,
                    default=100)
    pc.add_argument("--json", action="store_true")
    pc.set_defaults(fn=_cmd_check)

    pr = sub.add_parser("run")
    pr.add_argument("job")
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(fn=_cmd_run)
    return ap


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except HlfError as err:
        print("error: %s" % err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
