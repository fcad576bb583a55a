"""Command-line interface: design construction, code parameters, reference
table reproduction, alist export, and Monte Carlo simulation.

Machine-readable results go to stdout (or --out); progress and diagnostics go
to stderr.  Every artifact-producing invocation writes a run manifest
(<out>.manifest.json) capturing the command line, configuration, seed,
package/python versions and SHA-256 digests of the outputs.

Exit codes: 0 ok, 1 verification/diff failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, formats
from .designs import (
    DesignError,
    IncidenceStructure,
    build_sts,
    build_transversal_design,
    check_admissible,
    develop_cyclic,
    tanner_girth,
    verify_partial_steiner,
    verify_steiner,
)
from .eaqecc import (
    BLOCK_BY_POINT,
    POINT_BY_BLOCK,
    assemble_params,
    family_params,
    normalize_orientation,
    oriented_matrix,
    type_label,
)
from .geometry import AG, EG, PG, ag_hyperplane_spread, build_geometry, pg_spread
from .designs import delete_subdesigns
from .simulator import (
    CONVENTION_PER_PAULI,
    CONVENTION_TOTAL,
    SimConfig,
    estimate_bler,
)
from .tables import TABLE_BUDGET, TABLE_IDS, ConstructionCache, compute_table, diff_report, rows_to_csv

USAGE_ERROR = 2
CHECK_FAILED = 1


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def write_manifest(out_paths: list[Path], args: argparse.Namespace, extra: dict | None = None):
    if not out_paths:
        return
    manifest = {
        "command": sys.argv,
        "config": {k: v for k, v in vars(args).items() if k != "func" and not callable(v)},
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "outputs": {str(p): _sha256(p) for p in out_paths if p.exists()},
    }
    if extra:
        manifest.update(extra)
    mpath = out_paths[0].with_suffix(out_paths[0].suffix + ".manifest.json")
    mpath.write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    print(f"manifest: {mpath}", file=sys.stderr)


def _emit(text: str, out: str | None, args, extra=None) -> list[Path]:
    if out:
        path = Path(out)
        path.write_text(text)
        write_manifest([path], args, extra)
        return [path]
    sys.stdout.write(text)
    return []


def _geometry_args(parser: argparse.ArgumentParser):
    parser.add_argument("--pg", nargs=2, type=int, metavar=("M", "Q"))
    parser.add_argument("--ag", nargs=2, type=int, metavar=("M", "Q"))
    parser.add_argument("--eg", nargs=2, type=int, metavar=("M", "Q"))


def _pick_geometry(args):
    picks = [(PG, args.pg), (AG, args.ag), (EG, args.eg)]
    chosen = [(k, v) for k, v in picks if v]
    if len(chosen) != 1:
        raise SystemExit2("choose exactly one of --pg/--ag/--eg M Q")
    kind, (m, q) = chosen[0]
    return kind, m, q


class SystemExit2(SystemExit):
    def __init__(self, msg: str):
        print(f"error: {msg}", file=sys.stderr)
        super().__init__(USAGE_ERROR)


# --- design ------------------------------------------------------------------

def cmd_design_build(args) -> int:
    if args.sts:
        S = build_sts(args.sts)
        mu = 3
        comments = [f"sts({args.sts})"]
    elif args.td:
        mu, g = args.td
        S = build_transversal_design(mu, g)
        comments = [f"td({mu},{g}) groups: " + " | ".join(
            ",".join(map(str, grp)) for grp in S.groups)]
        mu = None  # GDD, not a Steiner design
    else:
        kind, m, q = _pick_geometry(args)
        design = build_geometry(kind, m, q)
        S = design.structure
        mu = design.mu if kind != EG else None
        comments = [f"{kind.lower()}({m},{q})", "point coordinates:"]
        comments += [f"  {i}: {c}" for i, c in enumerate(design.point_coords)]
        if kind == EG:
            verify_partial_steiner(S, design.mu)
            print(f"verified: partial Steiner (pairs covered at most once), "
                  f"mu={design.mu}", file=sys.stderr)
    if mu is not None and not args.td:
        params = verify_steiner(S, mu)
        print(f"verified: S(2,{params.mu},{params.v}) with b={params.b} r={params.r} "
              f"girth={tanner_girth(S)}", file=sys.stderr)
    buf = io.StringIO()
    formats.write_design(S, buf, comments=comments)
    _emit(buf.getvalue(), args.out, args)
    return 0


def cmd_design_verify(args) -> int:
    with open(args.file) as fh:
        S = formats.read_design(fh)
    try:
        if not check_admissible(S.v, args.mu, 1):
            print(f"admissibility: FAILED — (v-1) mod (mu-1) and v(v-1) mod mu(mu-1) "
                  f"must vanish for (v,mu,lambda)=({S.v},{args.mu},1)", file=sys.stderr)
            return CHECK_FAILED
        params = verify_steiner(S, args.mu)
    except DesignError as e:
        print(f"verification FAILED: {e}", file=sys.stderr)
        return CHECK_FAILED
    print(f"OK: S(2,{params.mu},{params.v}) b={params.b} r={params.r} "
          f"girth={tanner_girth(S)}")
    return 0


def cmd_design_develop(args) -> int:
    bases = []
    if args.base_file:
        with open(args.base_file) as fh:
            v, bases = formats.read_base_blocks(fh)
        if args.v and args.v != v:
            raise SystemExit2(f"--v {args.v} disagrees with base file ({v})")
    else:
        if not args.v or not args.bases:
            raise SystemExit2("need --v and --bases (or --base-file)")
        v = args.v
        for part in args.bases.split(";"):
            bases.append(tuple(int(x) for x in part.split(",")))
    S = develop_cyclic(v, bases)
    mu = len(S.blocks[0]) if S.blocks else 0
    try:
        params = verify_steiner(S, mu)
        print(f"verified: S(2,{params.mu},{params.v}) b={params.b} r={params.r}",
              file=sys.stderr)
    except DesignError as e:
        print(f"verification FAILED: {e}", file=sys.stderr)
        return CHECK_FAILED
    buf = io.StringIO()
    formats.write_design(S, buf, comments=[f"cyclic development v={v} bases={bases}"])
    _emit(buf.getvalue(), args.out, args)
    return 0


def cmd_design_delete(args) -> int:
    kind, m, q = _pick_geometry(args)
    design = build_geometry(kind, m, q)
    if kind == PG:
        if args.spread_s is None:
            raise SystemExit2("--spread-s S required for PG spreads")
        spread = pg_spread(design, args.spread_s)
    elif kind == AG:
        spread = ag_hyperplane_spread(design)
    else:
        raise SystemExit2("subdesign deletion applies to PG/AG designs")
    folded = delete_subdesigns(design.structure, spread, args.count)
    print(f"deleted {args.count} of {len(spread.parts)} spread parts: "
          f"{design.structure.b} -> {folded.b} blocks", file=sys.stderr)
    buf = io.StringIO()
    formats.write_design(folded, buf, comments=[folded.provenance])
    _emit(buf.getvalue(), args.out, args)
    return 0


# --- code --------------------------------------------------------------------

def _load_structure(args):
    """(design-or-structure, label) from --pg/--ag/--eg or --design FILE."""
    if args.design:
        with open(args.design) as fh:
            S = formats.read_design(fh)
        return S, Path(args.design).name
    kind, m, q = _pick_geometry(args)
    design = build_geometry(kind, m, q)
    return design, f"{kind.lower()}({m},{q})"


def cmd_code_params(args) -> int:
    orientation = normalize_orientation(args.type)
    if args.family:
        kind_s, m_v, q_v = _pick_geometry(args)
        params = family_params(kind_s, orientation, m_v, q_v)
        # closed-form values carry no enumeration certificate
        verdict_status = "theorem-only" if params.d.status == "exact" else "bounded"
        d_lo, d_hi = params.d.lower, params.d.upper
        girth = params.girth
    else:
        design, label = _load_structure(args)
        params, verdict = assemble_params(design, orientation, TABLE_BUDGET)
        verdict_status = (
            ("exact" if verdict.certified else "theorem-only")
            if params.d.status == "exact"
            else "bounded"
        )
        d_lo, d_hi = params.d.lower, params.d.upper
        girth = params.girth
        if args.design:
            kind_s, m_v, q_v = label, "", ""
        else:
            kind_s, m_v, q_v = design.kind, design.m, design.q
    header = "kind,orientation,m,q,n,k,d_status,d_lower,d_upper,c,rank_h,girth,rate,net_rate\n"
    row = (
        f"{kind_s},{type_label(orientation)},{m_v},{q_v},{params.n},{params.k},"
        f"{verdict_status},{d_lo},{d_hi},{params.c},{params.rank_h},{girth},"
        f"{float(params.rate):.4f},{float(params.net_rate):.4f}\n"
    )
    _emit(header + row, args.out, args)
    return 0


def cmd_code_distance(args) -> int:
    orientation = normalize_orientation(args.type)
    design, label = _load_structure(args)
    params, verdict = assemble_params(design, orientation, TABLE_BUDGET)
    r = verdict.result
    print(f"{label} type {type_label(orientation)}: d status={r.status} "
          f"lower={r.lower} upper={r.upper} certified={verdict.certified}")
    for s in verdict.sources:
        print(f"  source: {s}")
    if r.witness:
        print(f"  witness support: {list(r.witness)}")
    return 0


def cmd_code_export_alist(args) -> int:
    orientation = normalize_orientation(args.type)
    design, label = _load_structure(args)
    structure = design.structure if hasattr(design, "structure") else design
    H = oriented_matrix(structure, orientation)
    buf = io.StringIO()
    formats.write_alist(H, buf)
    _emit(buf.getvalue(), args.out, args)
    print(f"alist: {label} type {type_label(orientation)} "
          f"n={H.cols} m={H.rows}", file=sys.stderr)
    return 0


# --- tables ------------------------------------------------------------------

def cmd_tables(args) -> int:
    ids = TABLE_IDS if args.table == ["all"] else [t.upper() for t in args.table]
    for t in ids:
        if t not in TABLE_IDS:
            raise SystemExit2(f"unknown table {t}; valid: {', '.join(TABLE_IDS)} or 'all'")
    cache = ConstructionCache(TABLE_BUDGET)
    all_ok = True
    outputs = []
    for t in ids:
        t0 = time.time()
        rows = compute_table(t, cache)
        csv = rows_to_csv(rows)
        report = diff_report(rows)
        bad = [r for r in rows if r.status == "mismatch"]
        all_ok &= not bad
        if args.out:
            path = Path(args.out) / f"table_{t}.csv"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(csv)
            outputs.append(path)
        else:
            sys.stdout.write(csv)
        if report:
            print(report, file=sys.stderr)
        print(
            f"table {t}: {len(rows)} rows, {len(bad)} mismatches "
            f"({time.time() - t0:.1f}s)",
            file=sys.stderr,
        )
    if outputs:
        write_manifest(outputs, args)
    return 0 if all_ok else CHECK_FAILED


# --- sim ---------------------------------------------------------------------

def cmd_sim(args) -> int:
    orientation = normalize_orientation(args.type)
    design, label = _load_structure(args)
    structure = design.structure if hasattr(design, "structure") else design
    H = oriented_matrix(structure, orientation)
    f_ms = tuple(float(x) for x in args.fm.split(","))
    for f in f_ms:
        p = f / 3.0 if args.convention == CONVENTION_TOTAL else f
        if 3.0 * p > 1.0 or f < 0:
            raise SystemExit2(f"invalid f_m {f}: per-Pauli probability must satisfy 3p <= 1")
    config = SimConfig(
        f_m_values=f_ms,
        trials=args.trials,
        seed=args.seed,
        max_iter=args.max_iter,
        prior_override=args.prior,
        convention=args.convention,
        exact_recovery=args.exact_recovery,
        workers=args.threads,
    )
    records = estimate_bler(H, config, name=label)
    lines = [
        f"# code={label} type={type_label(orientation)} n={H.cols} checks={H.rows} "
        f"seed={args.seed} trials={args.trials} max_iter={args.max_iter} "
        f"convention={args.convention} accounting="
        f"{'exact-recovery' if args.exact_recovery else 'stabilizer-equivalent'}",
        "f_m,trials,errors,bler,ci_low,ci_high",
    ]
    for r in records:
        lines.append(
            f"{r.f_m},{r.trials},{r.block_errors},{r.bler:.6e},{r.ci_low:.6e},{r.ci_high:.6e}"
        )
        print(
            f"f_m={r.f_m}: {r.block_errors}/{r.trials} bler={r.bler:.3e} "
            f"[{r.ci_low:.2e}, {r.ci_high:.2e}] ({r.wall_time:.1f}s)",
            file=sys.stderr,
        )
    _emit("\n".join(lines) + "\n", args.out, args)
    return 0


# --- parser ------------------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser, top: bool):
    # accepted both before and after the subcommand; the later wins
    default = dict(seed=1, threads=1, out=None)
    kw = (lambda k: {"default": default[k]}) if top else (lambda k: {"default": argparse.SUPPRESS})
    parser.add_argument("--seed", type=int, help="RNG seed", **kw("seed"))
    parser.add_argument("--threads", type=int, help="worker processes", **kw("threads"))
    parser.add_argument("--out", type=str, help="output file/directory", **kw("out"))


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eaqldpc", description=__doc__)
    _global_flags(p, top=True)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="construct/verify/transform designs")
    dsub = d.add_subparsers(dest="subcommand", required=True)

    b = dsub.add_parser("build", help="build a named design")
    _geometry_args(b)
    b.add_argument("--sts", type=int, metavar="V")
    b.add_argument("--td", nargs=2, type=int, metavar=("MU", "G"))
    _global_flags(b, top=False)
    b.set_defaults(func=cmd_design_build)

    ver = dsub.add_parser("verify", help="verify a design file")
    ver.add_argument("file")
    ver.add_argument("--mu", type=int, required=True)
    _global_flags(ver, top=False)
    ver.set_defaults(func=cmd_design_verify)

    dev = dsub.add_parser("develop", help="cyclic development of base blocks")
    dev.add_argument("--v", type=int)
    dev.add_argument("--bases", type=str, help="semicolon-separated blocks, e.g. '0,1,4;0,2,7'")
    dev.add_argument("--base-file", type=str)
    _global_flags(dev, top=False)
    dev.set_defaults(func=cmd_design_develop)

    dele = dsub.add_parser("delete", help="delete spread subdesigns")
    _geometry_args(dele)
    dele.add_argument("--spread-s", type=int, default=None)
    dele.add_argument("--count", type=int, required=True)
    _global_flags(dele, top=False)
    dele.set_defaults(func=cmd_design_delete)

    c = sub.add_parser("code", help="derive code parameters / exports")
    csub = c.add_subparsers(dest="subcommand", required=True)

    par = csub.add_parser("params", help="[[n,k,d;c]] parameter CSV row")
    _geometry_args(par)
    par.add_argument("--design", type=str)
    par.add_argument("--type", required=True, help="I (block-by-point) or II (point-by-block)")
    par.add_argument("--family", action="store_true", help="closed-form only, no matrix")
    _global_flags(par, top=False)
    par.set_defaults(func=cmd_code_params)

    dist = csub.add_parser("distance", help="distance verdict with sources")
    _geometry_args(dist)
    dist.add_argument("--design", type=str)
    dist.add_argument("--type", required=True)
    _global_flags(dist, top=False)
    dist.set_defaults(func=cmd_code_distance)

    al = csub.add_parser("export-alist", help="export H in alist format")
    _geometry_args(al)
    al.add_argument("--design", type=str)
    al.add_argument("--type", required=True)
    _global_flags(al, top=False)
    al.set_defaults(func=cmd_code_export_alist)

    t = sub.add_parser("tables", help="recompute reference tables and diff")
    t.add_argument("table", nargs="+", help=f"table ids ({', '.join(TABLE_IDS)}) or 'all'")
    _global_flags(t, top=False)
    t.set_defaults(func=cmd_tables)

    s = sub.add_parser("sim", help="depolarizing-channel BLER Monte Carlo")
    _geometry_args(s)
    s.add_argument("--design", type=str)
    s.add_argument("--type", required=True)
    s.add_argument("--fm", required=True, help="comma-separated f_m values")
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--max-iter", type=int, default=100)
    s.add_argument("--prior", type=float, default=None, help="override decoder prior")
    s.add_argument(
        "--convention",
        choices=[CONVENTION_TOTAL, CONVENTION_PER_PAULI],
        default=CONVENTION_TOTAL,
        help="f_m = total depolarizing probability (default) or per-Pauli probability",
    )
    s.add_argument("--exact-recovery", action="store_true",
                   help="count success only on residual == 0 (no degeneracy credit)")
    _global_flags(s, top=False)
    s.set_defaults(func=cmd_sim)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    # seed/threads ride on the namespace for subcommands that use them
    if args.command == "sim" and not hasattr(args, "seed"):
        args.seed = 1
    try:
        return args.func(args)
    except SystemExit2 as e:
        return int(e.code)
    except DesignError as e:
        print(f"verification error: {e}", file=sys.stderr)
        return CHECK_FAILED
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
