"""Administrative command line: serve, import lists, recompute, audit, backup.

Exit codes: 0 success, 1 user error, 2 data error. Commands other than
``serve`` expect exclusive access to the store file; the weekly backup cron
job is a plain ``graphhaus dump`` invocation.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import canon, invariants
from .config import Config, ConfigError, load_config
from .graphs import GraphError, from_graph6
from .invariants import Status
from .scheduler import Job, MlfqScheduler, SchedulerConfig
from .store import CorruptArchive, MetaEntry, MetaList, NotFound, Store, StoreError

CONFIG_ENV_VAR = "GRAPHHAUS_CONFIG"

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_DATA_ERROR = 2


def _load_config(args) -> Config:
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    cfg = load_config(path) if path else Config()
    if args.store:
        cfg.store_path = args.store
    return cfg


def _open_store(cfg: Config) -> Store:
    return Store(cfg.store_path)


def _budget_levels(budget: float):
    lower = tuple(b for b in (1.0, 30.0) if b < budget)
    return lower + (budget,)


def cmd_serve(args) -> int:
    try:
        cfg = _load_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR
    if args.port:
        cfg.api_port = args.port
    try:
        store = _open_store(cfg)
        store.graph_count()  # probe the file before serving
    except Exception as exc:
        print(f"error: corrupt or unreadable store: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    scheduler = MlfqScheduler(
        SchedulerConfig(
            levels=cfg.scheduler_levels,
            worker_count=cfg.scheduler_workers,
            reserved_cores=cfg.scheduler_reserved_cores,
        ),
        compute=lambda gid, inv, dl: invariants.compute(inv, store.graph_by_id(gid), dl),
        sink=store.set_invariant_value,
    )
    scheduler.start()
    for gid, inv in store.pending_jobs():  # resume interrupted work
        scheduler.submit(Job(gid, inv))

    from .api import create_app

    app = create_app(store, scheduler=scheduler, rate_limit_seconds=cfg.api_rate_limit_seconds)
    import uvicorn

    print(f"serving {cfg.store_path} on port {cfg.api_port}")
    try:
        uvicorn.run(app, host=args.host, port=cfg.api_port, log_level="warning")
    except SystemExit:
        raise
    except Exception as exc:
        print(f"error: bind failure: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR
    finally:
        scheduler.shutdown(wait=False)
    return EXIT_OK


def cmd_import_list(args) -> int:
    cfg = _load_config(args)
    if args.count_unknown and args.file:
        print("error: --count-unknown takes no file", file=sys.stderr)
        return EXIT_USER_ERROR
    if not args.count_unknown and not args.file and args.count is None:
        print("error: need a graph6 file, --count, or --count-unknown", file=sys.stderr)
        return EXIT_USER_ERROR

    count = args.count
    file_ref = None
    if args.file:
        path = Path(args.file)
        if not path.is_file():
            print(f"error: no such file {path}", file=sys.stderr)
            return EXIT_USER_ERROR
        lines = 0
        with path.open() as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    g = from_graph6(line)
                except GraphError as exc:
                    print(f"error: malformed line {lineno}: {exc}", file=sys.stderr)
                    return EXIT_DATA_ERROR
                if g.order != args.order:
                    print(
                        f"error: malformed line {lineno}: order {g.order} != {args.order}",
                        file=sys.stderr,
                    )
                    return EXIT_DATA_ERROR
                lines += 1
        if count is None:
            count = lines
        file_ref = str(path)
    if args.count_unknown:
        count = None

    store = _open_store(cfg)
    try:
        try:
            meta = store.get_meta_list(args.family)
        except NotFound:
            meta = MetaList(args.family)
        if args.description:
            meta.description = args.description
        if args.generator_url:
            meta.generator_url = args.generator_url
        meta.entries = [e for e in meta.entries if e.order != args.order]
        meta.entries.append(MetaEntry(args.order, count, file_ref))
        meta.entries.sort(key=lambda e: e.order)
        store.upsert_meta_list(meta)
    finally:
        store.close()
    shown = "?" if count is None else count
    print(f"{args.family}: order {args.order} -> count {shown}, file {file_ref or '-'}")
    return EXIT_OK


def cmd_recompute(args) -> int:
    cfg = _load_config(args)
    if args.invariant != "all":
        try:
            invariants.descriptor(args.invariant)
        except invariants.UnknownInvariant as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USER_ERROR
    store = _open_store(cfg)
    try:
        wanted = None if args.invariant == "all" else args.invariant
        jobs = store.pending_jobs(wanted, statuses=(Status.PENDING, Status.TIMED_OUT))
        scheduler = MlfqScheduler(
            SchedulerConfig(levels=_budget_levels(args.budget), worker_count=1),
            compute=lambda gid, inv, dl: invariants.compute(inv, store.graph_by_id(gid), dl),
            sink=store.set_invariant_value,
        )
        for gid, inv in jobs:
            scheduler.submit(Job(gid, inv))
        scheduler.run_until_idle()
        done = sum(
            1
            for gid, inv in jobs
            if store.invariant_values(gid)[inv].status
            in (Status.COMPUTED, Status.UNDEFINED)
        )
        print(f"recomputed {len(jobs)} job(s): {done} finished, {len(jobs) - done} still timed out or failed")
    finally:
        store.close()
    return EXIT_OK


def cmd_audit_canonical(args) -> int:
    cfg = _load_config(args)
    store = _open_store(cfg)
    try:
        duplicate_keys = store.audit_unique_keys()
        report = store.canonicalizer.verify_canonical_stability(
            (key, graph) for _, key, graph in store.iter_graphs()
        )
    finally:
        store.close()
    print(f"checked {report.checked} graph(s): {len(report.mismatches)} canonical mismatch(es),"
          f" {len(duplicate_keys)} duplicate key(s)")
    for mismatch in report.mismatches:
        print(f"  stored {mismatch.stored_key!r} != recomputed {mismatch.recomputed_key!r}")
    if report.mismatches or duplicate_keys:
        return EXIT_DATA_ERROR
    return EXIT_OK


def cmd_dump(args) -> int:
    cfg = _load_config(args)
    store = _open_store(cfg)
    try:
        store.dump(args.path)
    finally:
        store.close()
    print(f"dumped {cfg.store_path} to {args.path}")
    return EXIT_OK


def cmd_restore(args) -> int:
    cfg = _load_config(args)
    target = Path(cfg.store_path)
    if target.exists():
        if not args.force:
            print(f"error: {target} exists; use --force to overwrite", file=sys.stderr)
            return EXIT_USER_ERROR
        target.unlink()
    try:
        store = Store.restore(args.path, target)
    except FileNotFoundError:
        print(f"error: no such archive {args.path}", file=sys.stderr)
        return EXIT_USER_ERROR
    except CorruptArchive as exc:
        print(f"error: corrupt archive: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    count = store.graph_count()
    store.close()
    print(f"restored {count} graph(s) into {target}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphhaus",
        description="Self-hostable database service for interesting graphs.",
    )
    parser.add_argument("--config", "-c", help=f"config file (or ${CONFIG_ENV_VAR})")
    parser.add_argument("--store", help="store path, overrides the config")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="start the HTTP service and job scheduler")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=0, help="overrides api.port")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("import-list", help="register a meta-directory list")
    p.add_argument("family")
    p.add_argument("order", type=int)
    p.add_argument("file", nargs="?", help="graph6 file, one graph per line")
    p.add_argument("--count", type=int, help="override the stored count")
    p.add_argument("--count-unknown", action="store_true", help="record the count as unknown")
    p.add_argument("--description")
    p.add_argument("--generator-url")
    p.set_defaults(func=cmd_import_list)

    p = sub.add_parser("recompute", help="re-run pending/timed-out invariant jobs")
    p.add_argument("invariant", help="an invariant id, or 'all'")
    p.add_argument("--budget", type=float, default=300.0, help="final time limit in seconds")
    p.set_defaults(func=cmd_recompute)

    p = sub.add_parser("audit-canonical", help="verify stored canonical keys against the active algorithm")
    p.set_defaults(func=cmd_audit_canonical)

    p = sub.add_parser("dump", help="write a checksummed backup archive")
    p.add_argument("path")
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("restore", help="rebuild the store from an archive")
    p.add_argument("path")
    p.add_argument("--force", action="store_true", help="overwrite an existing store")
    p.set_defaults(func=cmd_restore)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USER_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR
    except StoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
