"""Command-line driver for every pipeline.

Exit codes: 0 success, 2 parse error (with file:line:column), 3 domain
error. All numeric output is fixed-format at 6 significant digits so
golden files diff cleanly. Commands that depend on "now" (hotspot,
coverage, quests) default to the latest measurement timestamp, keeping
every run deterministic for fixed inputs; pass --now to override.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys
from datetime import datetime, timezone

from .config import Config
from .errors import DomainError, NutriquestError, ParseError
from .timefmt import parse_instant

UTC = timezone.utc


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    return format(float(value), "#.6g")


def _load_config(path) -> Config:
    return Config.load(path) if path else Config()


def _load_reference(path):
    from .anthro import GrowthReference, bundled_reference
    return GrowthReference.from_csv(path) if path else bundled_reference()


def _load_cutoffs(path):
    from .anthro import CutoffTable
    return CutoffTable.load(path) if path else CutoffTable.default()


def _build_store(args, need_log=False):
    from .platform import Registry, Store
    from .platform.files import read_measurements_csv
    from .platform.store import SyncBatch
    config = _load_config(getattr(args, "config", None))
    registry = Registry.load(args.registry)
    log_path = getattr(args, "log", None)
    store = Store(config, registry,
                  reference=_load_reference(getattr(args, "ref", None)),
                  cutoffs=_load_cutoffs(getattr(args, "cutoffs", None)),
                  log_path=log_path)
    outcomes = []
    latest = None
    measurements_path = getattr(args, "measurements", None)
    if measurements_path:
        payloads = read_measurements_csv(measurements_path)
        by_chw: dict[str, list] = {}
        for p in payloads:
            by_chw.setdefault(p["chw_id"], []).append(p)
            ts = parse_instant(p["timestamp"])
            latest = ts if latest is None or ts > latest else latest
        for chw_id in sorted(by_chw):
            batch = SyncBatch(batch_id=f"file-{chw_id}", chw_id=chw_id,
                              client_timestamp=latest or datetime.now(UTC),
                              measurements=tuple(by_chw[chw_id]))
            outcomes.extend(store.submit_batch(batch))
    return store, outcomes, latest


def _now_arg(args, latest):
    if getattr(args, "now", None):
        return parse_instant(args.now)
    return latest or datetime(1970, 1, 1, tzinfo=UTC)


def _zscore_inputs(args, store=None):
    from .anthro.reference import Sex
    if getattr(args, "child", None):
        if store is None:
            raise DomainError("--child requires --registry")
        child = store.registry.children.get(args.child)
        if child is None:
            raise DomainError(f"unknown child {args.child}")
        ts = (parse_instant(args.timestamp) if args.timestamp
              else datetime.now(UTC))
        return child.sex, float((ts.date() - child.birth_date).days)
    if args.sex is None or args.age_days is None:
        raise DomainError("provide --child or both --sex and --age-days")
    return Sex(args.sex), float(args.age_days)


# --- commands ----------------------------------------------------------------

def cmd_power(args) -> int:
    from .analytics import PowerParams, sample_size
    params = PowerParams(d=args.d, alpha=args.alpha, power=args.power,
                         tails=args.tails, allocation_ratio=args.ratio)
    print(sample_size(params))
    return 0


def cmd_zscore(args) -> int:
    from .anthro import (EngineSettings, HeightMode, Measurement,
                         evaluate_measurement)
    reference = _load_reference(args.ref)
    cutoffs = _load_cutoffs(args.cutoffs)
    store = None
    if args.registry:
        from .platform import Registry, Store
        store = Store(_load_config(args.config), Registry.load(args.registry),
                      reference=reference, cutoffs=cutoffs)
    sex, age_days = _zscore_inputs(args, store)
    ts = (parse_instant(args.timestamp) if args.timestamp
          else datetime.now(UTC))
    m = Measurement(id="cli", child_id=args.child or "cli", chw_id="cli",
                    timestamp=ts, lat=0.0, lon=0.0, weight=args.weight,
                    height=args.height, height_mode=HeightMode(args.height_mode),
                    muac=args.muac)
    zr = evaluate_measurement(m, sex, age_days, reference, cutoffs,
                              EngineSettings())
    for axis in ("waz", "haz", "whz", "muacz"):
        z = getattr(zr, axis)
        if z is not None:
            print(f"{axis} {fmt(z)}")
    for flag in sorted(zr.flags):
        print(f"flag {flag}")
    return 0


def cmd_classify(args) -> int:
    from .anthro import (EngineSettings, HeightMode, Measurement,
                         evaluate_measurement)
    reference = _load_reference(args.ref)
    cutoffs = _load_cutoffs(args.cutoffs)
    sex, age_days = _zscore_inputs(args)
    ts = (parse_instant(args.timestamp) if args.timestamp
          else datetime.now(UTC))
    m = Measurement(id="cli", child_id="cli", chw_id="cli", timestamp=ts,
                    lat=0.0, lon=0.0, weight=args.weight, height=args.height,
                    height_mode=HeightMode(args.height_mode), muac=args.muac)
    zr = evaluate_measurement(m, sex, age_days, reference, cutoffs,
                              EngineSettings())
    c = zr.classification.to_dict()
    for axis in ("stunting", "wasting", "underweight", "muac_band"):
        print(f"{axis} {c[axis] if c[axis] is not None else 'unclassified'}")
    return 0


def cmd_ingest(args) -> int:
    store, outcomes, _ = _build_store(args, need_log=True)
    counts = {"accepted": 0, "duplicate": 0, "rejected": 0}
    lines = ["id,status,reason,points,blocked"]
    for o in outcomes:
        counts[o["status"]] += 1
        lines.append(f"{o.get('id', '')},{o['status']},{o.get('reason', '')},"
                     f"{fmt(o.get('points'))},{str(o.get('blocked', '')).lower()}")
    if args.out:
        pathlib.Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    store.close()
    print(f"accepted={counts['accepted']} duplicate={counts['duplicate']} "
          f"rejected={counts['rejected']}")
    return 0


def cmd_hotspot(args) -> int:
    from .geostat import matrix_dump
    store, _, latest = _build_store(args)
    store.recompute_layers(_now_arg(args, latest))
    payload = store.hotspot_payload(layer=args.layer)
    pathlib.Path(args.out).write_text(json.dumps(payload, indent=2),
                                      encoding="utf-8")
    if args.matrix:
        if args.layer == "density":
            grid = store.layers.density
        else:
            grid = store.layers.hotspot.gi
        pathlib.Path(args.matrix).write_text(matrix_dump(grid), encoding="utf-8")
    print(f"wrote {args.out} ({len(payload['features'])} cells, layer={args.layer})")
    return 0


def cmd_coverage(args) -> int:
    from .geostat import matrix_dump
    import numpy as np
    store, _, latest = _build_store(args)
    store.recompute_layers(_now_arg(args, latest))
    payload = store.coverage_payload()
    pathlib.Path(args.out).write_text(json.dumps(payload, indent=2),
                                      encoding="utf-8")
    if args.matrix:
        cov = store.layers.coverage
        grid = np.array([[1.0 if cov.cell(r, c).uncharted else 0.0
                          for c in range(cov.spec.cols)]
                         for r in range(cov.spec.rows)])
        pathlib.Path(args.matrix).write_text(matrix_dump(grid), encoding="utf-8")
    uncharted = sum(1 for f in payload["features"] if f["properties"]["uncharted"])
    print(f"wrote {args.out} ({uncharted} uncharted cells)")
    return 0


def cmd_quests(args) -> int:
    store, _, latest = _build_store(args)
    store.recompute_layers(_now_arg(args, latest))
    if args.chw not in store.registry.chws:
        raise DomainError(f"unknown chw {args.chw}")
    payload = store.quests_payload(args.chw, args.max)
    if args.out:
        pathlib.Path(args.out).write_text(json.dumps(payload, indent=2),
                                          encoding="utf-8")
    for q in payload["quests"]:
        print(f"{q['id']} kind={q['kind']} cell=({q['target_row']},"
              f"{q['target_col']}) bonus=x{fmt(q['bonus_multiplier'])} "
              f"expires={q['expires_at']}")
    print(f"{len(payload['quests'])} quest(s) for {args.chw}")
    return 0


def cmd_screen(args) -> int:
    store, _, _ = _build_store(args)
    lines = ["id,kind,severity,chw_id,child_id,measurement_ids,statistic,"
             "threshold,created_at"]
    for a in store.alerts:
        ids = ";".join(a.measurement_ids)
        lines.append(f"{a.id},{a.kind},{a.severity},{a.chw_id},"
                     f"{a.child_id or ''},{ids},{fmt(a.statistic)},"
                     f"{fmt(a.threshold)},{a.created_at.isoformat()}")
    pathlib.Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    by_severity: dict[str, int] = {}
    for a in store.alerts:
        by_severity[a.severity] = by_severity.get(a.severity, 0) + 1
    summary = " ".join(f"{k}={v}" for k, v in sorted(by_severity.items())) or "none"
    print(f"alerts: {summary} -> {args.out}")
    return 0


def cmd_efficiency(args) -> int:
    store, _, _ = _build_store(args)
    start = parse_instant(args.start) if args.start else None
    end = parse_instant(args.end) if args.end else None
    chws = [args.chw] if args.chw else sorted(store.registry.chws)
    lines = ["chw_id,accuracy,speed,coverage,composite,n_submissions,inactive"]
    for chw_id in chws:
        s = store.efficiency_payload(chw_id, start, end)
        lines.append(f"{chw_id},{fmt(s['accuracy'])},{fmt(s['speed'])},"
                     f"{fmt(s['coverage'])},{fmt(s['composite'])},"
                     f"{s['n_submissions']},{str(s['inactive']).lower()}")
        print(f"{chw_id} E={fmt(s['composite'])} A={fmt(s['accuracy'])} "
              f"S={fmt(s['speed'])} C={fmt(s['coverage'])}"
              + (" (inactive)" if s["inactive"] else ""))
    if args.out:
        pathlib.Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


def cmd_trial_stats(args) -> int:
    from .analytics import analyze_trial, format_report, load_trial_csv, report_csv
    trial = analyze_trial(load_trial_csv(getattr(args, "in")))
    print(format_report(trial), end="")
    if args.out:
        pathlib.Path(args.out).write_text(report_csv(trial), encoding="utf-8")
    return 0


def cmd_simulate(args) -> int:
    from .platform.files import measurements_to_csv
    from .simkit import (SimConfig, generate_population, simulate_measurements,
                         simulate_trial, trial_to_csv)
    cfg = (SimConfig.from_file(args.sim_config) if args.sim_config
           else SimConfig.from_values({}))
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    registry, latent = generate_population(cfg)
    registry.save(out / "registry")
    stream = simulate_measurements(cfg, registry, latent)
    (out / "measurements.csv").write_text(measurements_to_csv(stream.payloads),
                                          encoding="utf-8")
    manifest_lines = ["kind,chw_id,measurement_id"]
    manifest_lines += [f"{e['kind']},{e['chw_id'] or ''},{e['measurement_id'] or ''}"
                       for e in stream.manifest]
    (out / "fraud_manifest.csv").write_text("\n".join(manifest_lines) + "\n",
                                            encoding="utf-8")
    (out / "trial_scores.csv").write_text(trial_to_csv(simulate_trial(cfg)),
                                          encoding="utf-8")
    print(f"seed={cfg.seed} children={len(registry.children)} "
          f"chws={len(registry.chws)} measurements={len(stream.payloads)} "
          f"planted={len(stream.manifest)} -> {out}")
    return 0


def cmd_serve(args) -> int:
    from .platform import Registry, Store, serve
    config = _load_config(args.config)
    registry = Registry.load(args.registry)
    store = Store(config, registry,
                  reference=_load_reference(args.ref),
                  cutoffs=_load_cutoffs(args.cutoffs),
                  log_path=args.log)
    store.recompute_layers()
    try:
        serve(store, host=args.host, port=args.port)
    except KeyboardInterrupt:
        pass
    finally:
        store.close()
    return 0


# --- wiring ---------------------------------------------------------------------

def _add_measurement_value_flags(p):
    p.add_argument("--weight", type=float, help="weight in kg")
    p.add_argument("--height", type=float, help="height/length in cm")
    p.add_argument("--height-mode", default="standing",
                   choices=["standing", "recumbent"])
    p.add_argument("--muac", type=float, help="MUAC in mm")
    p.add_argument("--sex", choices=["F", "M"])
    p.add_argument("--age-days", type=float)
    p.add_argument("--child", help="child id (with --registry)")
    p.add_argument("--timestamp", help="ISO instant for age computation")
    p.add_argument("--ref", help="growth reference CSV (default: bundled)")
    p.add_argument("--cutoffs", help="cutoff table CSV (default: bundled)")


def _add_store_flags(p, log=False):
    p.add_argument("--config", help="platform key=value config file")
    p.add_argument("--registry", required=True, help="registry directory")
    p.add_argument("--measurements", help="measurement batch CSV")
    p.add_argument("--ref", help="growth reference CSV (default: bundled)")
    p.add_argument("--cutoffs", help="cutoff table CSV (default: bundled)")
    if log:
        p.add_argument("--log", help="persistent record log path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nutriquest")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("power", help="sample size from effect size/alpha/power")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--power", type=float, default=0.95)
    p.add_argument("--tails", choices=["one", "two"], default="one")
    p.add_argument("--ratio", type=float, default=1.0)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("zscore", help="z-scores for one measurement")
    _add_measurement_value_flags(p)
    p.add_argument("--config")
    p.add_argument("--registry")
    p.set_defaults(func=cmd_zscore)

    p = sub.add_parser("classify", help="malnutrition classification")
    _add_measurement_value_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ingest", help="run the sync pipeline over a batch file")
    _add_store_flags(p, log=True)
    p.add_argument("--out", help="per-measurement outcome CSV")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("hotspot", help="hotspot/density GeoJSON from measurements")
    _add_store_flags(p)
    p.add_argument("--layer", choices=["gistar", "density"], default="gistar")
    p.add_argument("--out", required=True)
    p.add_argument("--matrix", help="plain-text matrix dump path")
    p.add_argument("--now", help="ISO instant (default: latest measurement)")
    p.set_defaults(func=cmd_hotspot)

    p = sub.add_parser("coverage", help="coverage/staleness GeoJSON")
    _add_store_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--matrix", help="uncharted-mask matrix path")
    p.add_argument("--now")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("quests", help="ranked quests for a CHW")
    _add_store_flags(p)
    p.add_argument("--chw", required=True)
    p.add_argument("--max", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--now")
    p.set_defaults(func=cmd_quests)

    p = sub.add_parser("screen", help="integrity screening -> alert export")
    _add_store_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("efficiency", help="per-CHW efficiency scores")
    _add_store_flags(p)
    p.add_argument("--chw")
    p.add_argument("--start")
    p.add_argument("--end")
    p.add_argument("--out")
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("trial-stats", help="evaluation report from score file")
    p.add_argument("--in", dest="in", required=True,
                   help="chw_id,group,phase,score CSV")
    p.add_argument("--out", help="machine-readable report CSV")
    p.set_defaults(func=cmd_trial_stats)

    p = sub.add_parser("simulate", help="generate a synthetic cohort and trial")
    p.add_argument("--sim-config", help="simulation key=value file")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config")
    p.add_argument("--registry", required=True)
    p.add_argument("--ref")
    p.add_argument("--cutoffs")
    p.add_argument("--log")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NutriquestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
