"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fixtures, io
from .complex import betti
from .covers import CoverError, GuardExceeded
from .generators import classify_survival, minimal_generator_basis
from .metrics import claim_report, d_delta_metric, df_metric
from .persistence import (PersistenceDiagram, bottleneck_distance, cech_filtration, log_scale, persistence_diagram,
                          restrict_to_resolution, tower_diagram, tower_module)
from .pullback import mapper, multiscale_mapper
from .reeb import reeb_graph, reeb_h1_check
from .verify import format_table, verify_instance


class UsageError(ValueError):
    pass


def _load_complex(path):
    if not path:
        raise UsageError("--complex is required")
    return io.complex_from_json(io.read_json(path))


def _load_function(args, K):
    if not args.function:
        raise UsageError("--function is required")
    return io.function_from_json(K, io.read_json(args.function))


def _load_cover(args, f):
    if not args.cover:
        raise UsageError("--cover is required")
    return io.cover_from_json(io.read_json(args.cover), f.codomain)


def _emit(args, text: str, default_stdout: bool = True):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    elif default_stdout:
        sys.stdout.write(text)


def _summary(data: dict):
    sys.stdout.write(io.dumps(data))


def _betti_list(K) -> list[int]:
    return [betti(K, k) for k in range(min(K.dim_cap, 3) + 1)]


# commands --------------------------------------------------------------------------

def cmd_mapper(args):
    K = _load_complex(args.complex)
    f = _load_function(args, K)
    U = _load_cover(args, f)
    m = mapper(K, f, U, args.dim_cap)
    if args.out:
        io.write_json(args.out, io.complex_to_json(m.nerve))
    if args.dot:
        Path(args.dot).write_text(io.nerve_to_dot(m))
    _summary({
        "nerve_vertices": len(m.nerve.vertices),
        "nerve_betti": _betti_list(m.nerve),
        "domain_betti": _betti_list(K),
        "elements": [{"id": io._jid(lab), "vertices": [io._jid(v) for v in m.pullback.element_vertices(k)]}
                     for k, lab in enumerate(m.pullback.labels)],
    })


def cmd_multiscale(args):
    K = _load_complex(args.complex)
    f = _load_function(args, K)
    if not args.tower:
        raise UsageError("--tower is required")
    T = io.tower_from_json(io.read_json(args.tower))
    mm = multiscale_mapper(K, f, T, args.dim_cap)
    D = tower_diagram(tower_module(mm, 1))
    data = {
        "scales": list(mm.scales),
        "complexes": [io.complex_to_json(C) for C in mm.complexes],
        "maps": [[[io._jid(a), io._jid(b)] for a, b in m.assignment.items()] for m in mm.maps],
    }
    if args.out:
        io.write_json(args.out, data)
    _summary({"scales": list(mm.scales), "betti1": [betti(C, 1) for C in mm.complexes],
              "h1_bars_index": [[b, None if d == float("inf") else d] for b, d in D.points]})


def _metric_for(args):
    if args.metric:
        K = _load_complex(args.complex) if args.complex else None
        return io.metric_from_csv(Path(args.metric).read_text(), K)
    K = _load_complex(args.complex)
    f = _load_function(args, K)
    return df_metric(K, f, args.mode)


def cmd_persistence(args):
    if args.kind == "cech":
        d = _metric_for(args)
        F = cech_filtration(d, args.dim_cap)
        dgms = [persistence_diagram(F, k) for k in range(args.dim_cap)]
        _emit(args, io.diagram_to_csv(dgms))
    elif args.kind == "tower":
        K = _load_complex(args.complex)
        f = _load_function(args, K)
        T = io.tower_from_json(io.read_json(args.tower))
        D = tower_diagram(tower_module(multiscale_mapper(K, f, T, args.dim_cap), 1))
        _emit(args, io.diagram_to_csv([D.to_scales()]))
    else:
        if len(args.diagrams) != 2:
            raise UsageError("bottleneck needs two diagram files")
        a, b = (io.diagrams_from_csv(Path(p).read_text()) for p in args.diagrams)
        Da = a.get(args.k) or PersistenceDiagram(args.k, [])
        Db = b.get(args.k) or PersistenceDiagram(args.k, [])
        if args.resolution is not None:
            Da = log_scale(restrict_to_resolution(Da, args.resolution))
            Db = log_scale(restrict_to_resolution(Db, args.resolution))
        _summary({"k": args.k, "bottleneck": bottleneck_distance(Da, Db), "log": args.resolution is not None})


def cmd_metrics(args):
    K = _load_complex(args.complex)
    f = _load_function(args, K)
    if args.kind == "df":
        d = df_metric(K, f, args.mode)
        _emit(args, io.metric_to_csv(d))
        return
    U = _load_cover(args, f)
    m = mapper(K, f, U, args.dim_cap)
    if args.kind == "ddelta":
        _emit(args, io.metric_to_csv(d_delta_metric(m)))
        return
    rep = claim_report(m, df_metric(K, f, args.mode))
    data = {"delta": rep.delta, "claim1": rep.claim1, "claim2": rep.claim2, "claim3": rep.claim3,
            "observation0": rep.observation0, "distortion": rep.distortion, "holds": rep.holds()}
    if args.out:
        io.write_json(args.out, data)
    _summary(data)


def cmd_generators(args):
    K = _load_complex(args.complex)
    if args.kind == "basis":
        d = _metric_for(args)
        B = minimal_generator_basis(K, d, args.mode)
        data = io.basis_to_json(B)
        if args.out:
            io.write_json(args.out, data)
        _summary(data)
        return
    f = _load_function(args, K)
    U = _load_cover(args, f)
    d = df_metric(K, f, "exact")
    B = minimal_generator_basis(K, d, args.mode)
    rep = classify_survival(B, mapper(K, f, U, args.dim_cap), U)
    data = {"lebesgue": rep.lebesgue, "s_max": rep.s_max, "generators": rep.entries, "ok": rep.ok}
    if args.out:
        io.write_json(args.out, data)
    _summary(data)


def cmd_reeb(args):
    K = _load_complex(args.complex)
    f = _load_function(args, K)
    R = reeb_graph(K, f)
    if args.out:
        io.write_json(args.out, io.reeb_to_json(R))
    if args.dot:
        Path(args.dot).write_text(io.reeb_to_dot(R))
    rep = reeb_h1_check(K, f)
    _summary({"nodes": len(R.complex.vertices), "betti1": R.betti1(),
              "positive_generators": rep.positive, "basis_check": rep.ok})


def cmd_verify(args):
    K = _load_complex(args.complex)
    f = _load_function(args, K)
    U = _load_cover(args, f)
    rows = verify_instance(K, f, U, args.dim_cap)
    if args.out:
        io.write_json(args.out, [r.as_dict() for r in rows])
    sys.stdout.write(format_table(rows) + "\n")
    return 0 if all(r.passed for r in rows) else 1


FIXTURES = {
    "tent": fixtures.fix_tent,
    "tent-coarse": fixtures.fix_tent_coarse,
    "eight": fixtures.fix_eight,
    "pinch": fixtures.fix_pinch,
    "cylinder": fixtures.cylinder,
}


def cmd_fixture(args):
    if args.name in FIXTURES:
        inst = FIXTURES[args.name]()
    elif args.name == "random-real":
        inst = fixtures.random_real_instance(np.random.default_rng(args.seed))
    elif args.name == "random-ball":
        inst = fixtures.random_ball_instance(np.random.default_rng(args.seed))
    else:
        raise UsageError(f"unknown fixture {args.name!r}")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    io.write_json(out / "complex.json", io.complex_to_json(inst.complex))
    io.write_json(out / "function.json", io.function_to_json(inst.function))
    if inst.cover is not None:
        io.write_json(out / "cover.json", io.cover_to_json(inst.cover))
    _summary({"fixture": args.name, "dir": str(out)})


# parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nervelab", description="Mapper, multiscale mapper, Reeb graphs and their guarantees.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, dim_cap=2):
        sp.add_argument("--complex")
        sp.add_argument("--function")
        sp.add_argument("--cover")
        sp.add_argument("--tower")
        sp.add_argument("--metric")
        sp.add_argument("--dim-cap", type=int, default=dim_cap)
        sp.add_argument("--out")
        sp.add_argument("--dot")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("mapper", help="nerve of the pullback cover")
    common(sp, 3)
    sp.set_defaults(func=cmd_mapper)

    sp = sub.add_parser("multiscale", help="multiscale mapper over a tower of covers")
    common(sp, 2)
    sp.set_defaults(func=cmd_multiscale)

    sp = sub.add_parser("persistence", help="persistence diagrams and distances")
    sp.add_argument("kind", choices=["cech", "tower", "bottleneck"])
    sp.add_argument("diagrams", nargs="*")
    common(sp, 2)
    sp.add_argument("--mode", choices=["exact", "approx"], default="exact")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--resolution", type=float, help="compare log-scaled diagrams from this resolution")
    sp.set_defaults(func=cmd_persistence)

    sp = sub.add_parser("metrics", help="d_f, d_delta and correspondence distortion")
    sp.add_argument("kind", choices=["df", "ddelta", "distortion"])
    common(sp, 2)
    sp.add_argument("--mode", choices=["exact", "approx"], default="exact")
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("generators", help="minimal H1 generator bases")
    sp.add_argument("kind", choices=["basis", "classify"])
    common(sp, 2)
    sp.add_argument("--mode", choices=["exact", "greedy"], default="greedy")
    sp.set_defaults(func=cmd_generators)

    sp = sub.add_parser("reeb", help="Reeb graph of a real function")
    common(sp, 2)
    sp.set_defaults(func=cmd_reeb)

    sp = sub.add_parser("verify", help="run every theorem check on one instance")
    common(sp, 2)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("fixture", help="write a named or random instance as JSON files")
    sp.add_argument("name", choices=sorted(FIXTURES) + ["random-real", "random-ball"])
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.func(args)
    except (ValueError, KeyError, GuardExceeded, FileNotFoundError, CoverError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        sys.stderr.write(json.dumps({"error": str(msg), "type": type(exc).__name__}, sort_keys=True) + "\n")
        return 2
    return rc or 0


if __name__ == "__main__":
    raise SystemExit(main())
