"""Command-line surface: per-field genus reports, bulk range scans with a
result cache, the branch-configuration engine, the classical parity
datasets, and the node-code searches.

Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .bqf import class_group, DEFAULT_MAX_H
from .errors import ResourceLimitError
from .genus import genus_report_json, report_for_d
from .intkit import factorize
from .keylemma import (
    BranchConfiguration,
    dataset_campedelli,
    dataset_werner,
    is_two_divisible,
    kernel_mod_e,
    lift_element,
    two_torsion_rank,
)
from .nodesets import (
    WeightCodeProblem,
    code_search,
    feasible_distributions,
    quintic_certificate,
)

SCHEMA_VERSION = "1"

ALL_CHECKS = ("gauss", "kernel", "wide", "norm_minus_one")


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True)


class ResultCache:
    """Append-only line-delimited JSON cache keyed by discriminant.

    Newest record for a key wins; unparseable lines are skipped, so a
    torn write cannot poison the file.
    """

    def __init__(self, path):
        self.path = Path(path)
        self.records: dict[int, dict] = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                try:
                    rec = json.loads(line)
                    if rec.get("version") == SCHEMA_VERSION:
                        self.records[rec["key"]] = rec["value"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    continue

    def get(self, D: int):
        return self.records.get(D)

    def put(self, D: int, value: dict) -> None:
        if D in self.records:
            return
        self.records[D] = value
        with self.path.open("a") as fh:
            fh.write(_dump({"key": D, "version": SCHEMA_VERSION, "value": value}) + "\n")


@dataclass(frozen=True)
class ScanJob:
    d_min: int
    d_max: int
    checks: tuple[str, ...]
    sign: str = "both"
    workers: int = 1
    max_h: int = DEFAULT_MAX_H

    def __post_init__(self):
        if self.d_min > self.d_max:
            raise ValueError("d_min must not exceed d_max")
        if not self.checks:
            raise ValueError("at least one check must be selected")
        for c in self.checks:
            if c not in ALL_CHECKS:
                raise ValueError(f"unknown check {c!r}; choose from {', '.join(ALL_CHECKS)}")


def compute_record(d: int, max_h: int = DEFAULT_MAX_H) -> dict:
    """Full cacheable record for one field: class group plus genus report."""
    field, cg, report, wide = report_for_d(d, max_h=max_h)
    return {
        "class_group": cg.to_json_dict(),
        "genus_report": genus_report_json(field, report, wide),
    }


def evaluate_checks(record: dict, checks) -> dict[str, bool | None]:
    """Re-derive check outcomes from a (possibly cached) record.

    None means the check does not apply to this field.
    """
    rep = record["genus_report"]
    out: dict[str, bool | None] = {}
    for check in checks:
        if check == "gauss":
            out[check] = bool(rep["gauss_holds"])
        elif check == "kernel":
            out[check] = len(rep["kernel_masks"]) == 2 and bool(rep["image_is_two_torsion"])
        elif check == "wide":
            out[check] = rep["wide_rank"] in (rep["r"] - 1, rep["r"] - 2)
        elif check == "norm_minus_one":
            if rep["d"] < 0:
                out[check] = None
            else:
                out[check] = rep["support_class_principal"] == rep["norm_minus_one"]
    return out


def _scan_worker(args):
    d, max_h = args
    return d, compute_record(d, max_h)


def run_scan(job: ScanJob, cache: ResultCache | None = None) -> dict:
    """Scan a d range, evaluating the selected checks per squarefree d.

    Returns the summary dict; cached records are reused and fresh ones
    appended as they are produced, so an interrupted run keeps its
    partial results.
    """
    candidates = []
    skipped = 0
    for d in range(job.d_min, job.d_max + 1):
        if d in (0, 1):
            skipped += 1
            continue
        if job.sign == "pos" and d < 0 or job.sign == "neg" and d > 0:
            continue
        if not factorize(d).is_squarefree:
            skipped += 1
            continue
        candidates.append(d)

    records: dict[int, dict] = {}
    to_compute = []
    for d in candidates:
        D = d if d % 4 == 1 else 4 * d
        cached = cache.get(D) if cache else None
        if cached is not None:
            records[d] = cached
        else:
            to_compute.append(d)

    if job.workers > 1 and len(to_compute) > 1:
        with ProcessPoolExecutor(max_workers=job.workers) as pool:
            for d, rec in pool.map(_scan_worker, [(d, job.max_h) for d in to_compute]):
                records[d] = rec
                if cache:
                    cache.put(rec["genus_report"]["D"], rec)
    else:
        for d in to_compute:
            _, rec = _scan_worker((d, job.max_h))
            records[d] = rec
            if cache:
                cache.put(rec["genus_report"]["D"], rec)

    counts = {c: {"pass": 0, "fail": 0, "not_applicable": 0} for c in job.checks}
    anomalies = []
    for d in candidates:
        results = evaluate_checks(records[d], job.checks)
        failing = []
        for check, ok in results.items():
            if ok is None:
                counts[check]["not_applicable"] += 1
            elif ok:
                counts[check]["pass"] += 1
            else:
                counts[check]["fail"] += 1
                failing.append(check)
        if failing:
            anomalies.append({"d": d, "failed": sorted(failing), "report": records[d]["genus_report"]})
    return {
        "d_min": job.d_min,
        "d_max": job.d_max,
        "checks": {c: counts[c] for c in sorted(counts)},
        "scanned": len(candidates),
        "skipped": skipped,
        "anomalies": anomalies,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _print_genus_text(record: dict) -> None:
    rep = record["genus_report"]
    cg = record["class_group"]
    print(f"d = {rep['d']}   D = {rep['D']}   r = {rep['r']} ramified primes")
    print(f"narrow class group: h+ = {cg['h_plus']}, invariant factors {cg['invariant_factors']}")
    print(f"rank Cl+[2] = {rep['rank2']}  (r - 1 = {rep['r'] - 1})  gauss_holds: {rep['gauss_holds']}")
    print(f"genus map kernel masks: {rep['kernel_masks']}  generator kind: {rep['kernel_generator_kind']}")
    print(f"image equals full 2-torsion: {rep['image_is_two_torsion']}")
    print(f"wide rank: {rep['wide_rank']}   support class principal: {rep['support_class_principal']}   norm -1 unit: {rep['norm_minus_one']}")


def cmd_genus(args) -> int:
    record = compute_record(args.d, args.bound)
    if args.json:
        print(_dump(record["genus_report"]))
    else:
        _print_genus_text(record)
    return 0


def cmd_classgroup(args) -> int:
    cg = class_group(args.D, max_h=args.bound)
    data = cg.to_json_dict()
    if args.json:
        print(_dump(data))
    else:
        print(f"D = {data['D']}: h+ = {data['h_plus']}, invariant factors {data['invariant_factors']}")
        for i, rep in enumerate(data["reps"]):
            print(f"  [{i}] ({rep[0]}, {rep[1]}, {rep[2]})")
        print(f"two-torsion basis indices: {data['two_torsion_basis']}")
    return 0


def cmd_scan(args) -> int:
    checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    job = ScanJob(
        d_min=args.d_min,
        d_max=args.d_max,
        checks=checks,
        sign=args.sign,
        workers=args.workers,
        max_h=args.bound,
    )
    cache = ResultCache(args.cache) if args.cache else None
    summary = run_scan(job, cache)
    if args.json:
        print(_dump(summary))
    else:
        print(f"scanned {summary['scanned']} squarefree d in [{summary['d_min']}, {summary['d_max']}], skipped {summary['skipped']}")
        for check, c in summary["checks"].items():
            print(f"  {check}: {c['pass']} pass, {c['fail']} fail, {c['not_applicable']} n/a")
        for a in summary["anomalies"]:
            print(f"  ANOMALY d={a['d']}: failed {a['failed']}")
    return 1 if summary["anomalies"] else 0


def cmd_keylemma(args) -> int:
    try:
        data = json.loads(Path(args.config_file).read_text())
        config = BranchConfiguration.from_json_dict(data)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: cannot read branch configuration: {exc}", file=sys.stderr)
        return 2
    reps = kernel_mod_e(config)
    result = {
        "kernel_basis_masks": reps,
        "quotient_rank": len(reps),
        "pic_two_rank": config.pic_two_rank,
        "two_torsion_rank": two_torsion_rank(config),
    }
    if args.json:
        print(_dump(result))
    else:
        print(f"quotient kernel rank: {result['quotient_rank']}")
        print(f"two-torsion rank (including downstairs): {result['two_torsion_rank']}")
        print(f"coset representative masks: {reps}")
    return 0


def _parity_check(name: str, vector) -> dict:
    ok, half = is_two_divisible(vector)
    return {
        "name": name,
        "vector": list(vector.coords),
        "divisible_by_2": ok,
        "half": list(half.coords) if half else None,
    }


def cmd_campedelli(args) -> int:
    cam = dataset_campedelli()
    wer = dataset_werner()
    checks = [
        _parity_check("branch divisor Ct + Et1..5", cam.branch),
        _parity_check("conic block Qt + Et1..4", wer.even_block),
    ]
    all_pass = all(c["divisible_by_2"] for c in checks)
    out = {"basis": list(cam.basis), "checks": checks, "all_pass": all_pass}
    if args.json:
        print(_dump(out))
    else:
        for c in checks:
            print(f"{c['name']}: divisible by 2: {c['divisible_by_2']}  half: {c['half']}")
        print(f"all parity checks pass: {all_pass}")
    return 0 if all_pass else 1


def cmd_werner(args) -> int:
    wer = dataset_werner()
    parity = _parity_check("conic block Qt + Et1..4", wer.even_block)
    reps = kernel_mod_e(wer.config)
    lift = lift_element(wer.config, reps[0], "bL - Ep1 - Ep2 - Ep3 - Ep4") if reps else None
    decomposition = dataset_campedelli().c_tilde.coords == (wer.b_tilde + wer.q_tilde).coords
    out = {
        "parity": parity,
        "decomposition_matches_campedelli": decomposition,
        "kernel_rank": len(reps),
        "two_torsion_rank": two_torsion_rank(wer.config),
        "kernel_masks": reps,
        "lift": lift.expression if lift else None,
    }
    ok = parity["divisible_by_2"] and decomposition and len(reps) >= 1
    if args.json:
        print(_dump(out))
    else:
        print(f"parity check: {parity['divisible_by_2']}  half: {parity['half']}")
        print(f"B + Q decomposes the degree-10 curve: {decomposition}")
        print(f"cover 2-torsion rank: {out['two_torsion_rank']} (kernel masks {reps})")
        if lift:
            print(f"lift of the nontrivial class: {lift.expression}")
    return 0 if ok else 1


def cmd_nodecode(args) -> int:
    weights = frozenset(int(w) for w in args.weights.split(","))
    problem = WeightCodeProblem(args.n, args.k, weights)
    filt = feasible_distributions(problem)
    search = code_search(problem, node_budget=args.node_budget)
    out = {
        "n": problem.n,
        "k": problem.k,
        "allowed": sorted(problem.allowed),
        "macwilliams_feasible": len(filt),
        "filter_conclusive": len(filt) == 0,
        "search": search.verdict,
        "decided_by": "macwilliams+search" if len(filt) == 0 else "search",
        "search_nodes": search.nodes,
        "witness": search.generator_bitstrings(),
    }
    if args.json:
        print(_dump(out))
    else:
        print(f"[{problem.n}, {problem.k}] with weights {sorted(problem.allowed)}: {search.verdict}")
        print(f"MacWilliams filter: {len(filt)} feasible distribution(s) "
              f"({'already conclusive' if not filt else 'not conclusive'}); search is authoritative")
        if search.exists:
            for row in out["witness"]:
                print(f"  {row}")
    return 0


def cmd_quintic(args) -> int:
    cert = quintic_certificate(
        b2=args.b2,
        nodes=args.nodes,
        min_even=args.min_even,
        second_even=args.second_even,
        node_budget=args.node_budget,
    )
    if args.json:
        print(_dump(cert.to_json_dict()))
    else:
        for step in cert.steps:
            print(f"[{step.source}] {step.claim}")
            print(f"    {step.arithmetic}")
        print(f"verdict: {cert.verdict}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genuskit",
        description="narrow class groups, genus maps, double-cover 2-torsion, and node-set code searches",
    )
    parser.add_argument("--config", metavar="FILE", help="JSON file with defaults for the global flags")
    parser.add_argument("--json", action="store_true", default=None, help="machine-readable JSON output")
    parser.add_argument("--cache", metavar="PATH", help="line-delimited JSON result cache")
    parser.add_argument("--workers", type=int, metavar="N", help="parallel workers for scans (default 1)")
    parser.add_argument("--bound", type=int, metavar="H", help=f"maximum class number (default {DEFAULT_MAX_H})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genus", help="genus report for one squarefree d")
    p.add_argument("-d", type=int, required=True, dest="d")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("classgroup", help="narrow class group of a fundamental discriminant")
    p.add_argument("-D", type=int, required=True, dest="D")
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("scan", help="verify checks across a range of d")
    p.add_argument("d_min", type=int)
    p.add_argument("d_max", type=int)
    p.add_argument("--checks", default=",".join(ALL_CHECKS), help="comma-separated subset of " + ",".join(ALL_CHECKS))
    p.add_argument("--sign", choices=("both", "pos", "neg"), default="both")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("keylemma", help="kernel/rank of a branch configuration JSON file")
    p.add_argument("config_file")
    p.set_defaults(func=cmd_keylemma)

    p = sub.add_parser("campedelli", help="parity checks of the Campedelli/Werner branch data")
    p.set_defaults(func=cmd_campedelli)

    p = sub.add_parser("werner", help="Werner branch configuration: parity, kernel, lift")
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("nodecode", help="weight-restricted binary code existence")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-w", "--weights", required=True, help="comma-separated allowed nonzero weights")
    p.add_argument("--node-budget", type=int, default=None)
    p.set_defaults(func=cmd_nodecode)

    p = sub.add_parser("quintic", help="replay the 32-node quintic contradiction chain")
    p.add_argument("--b2", type=int, default=53)
    p.add_argument("--nodes", type=int, default=32)
    p.add_argument("--min-even", type=int, default=16)
    p.add_argument("--second-even", type=int, default=20)
    p.add_argument("--node-budget", type=int, default=None)
    p.set_defaults(func=cmd_quintic)

    return parser


_GLOBAL_DEFAULTS = {"json": False, "cache": None, "workers": 1, "bound": DEFAULT_MAX_H}


def _apply_config(args) -> None:
    # resolution order: explicit flag > config file entry > built-in default
    config = {}
    if args.config:
        config = json.loads(Path(args.config).read_text())
        unknown = set(config) - set(_GLOBAL_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key, default in _GLOBAL_DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, config.get(key, default))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
