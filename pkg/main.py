# main.py
# ----------------------------------------------------------------
# icc-taint main pipeline script: simulate scenarios on the taint
# monitor, analyze the logs, report ICC threats
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

import argparse
import logging
import os
import sys

sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src import config
from src.analysis.pipeline import IccAnalyzer
from src.analysis.plot import ScalingPlots
from src.analysis.report import Report, build_report, load_expected
from src.analysis.stats import ScalingStats
from src.domain.catalog import default_catalog, load_catalog
from src.errors import IccError
from src.logformat.metadata import read_metadata, write_metadata
from src.monitor.simulator import Monitor, is_test_mode
from src.scenario.corpus import builtin_corpus, corpus_dir, find_scenario, load_file

EXIT_OK = 0
EXIT_THREAT = 1
EXIT_ERROR = 2

META_SUFFIX = ".meta.yaml"
LOG_SUFFIX = ".log"

# -----------------------------------------------------------------------------------------


def _catalog(args):
    return load_catalog(args.catalog) if args.catalog else default_catalog()


def _scenario_path(ref, catalog):
    """A scenario file path, or the name of a builtin corpus scenario."""
    if os.path.exists(ref):
        return ref
    path = find_scenario(ref, catalog=catalog)
    if path is None:
        raise IccError(f"no scenario file or corpus scenario named '{ref}'")
    return path


def _focus(text):
    if not text:
        return None
    try:
        return {int(p) for p in text.split(",") if p}
    except ValueError:
        raise IccError(f"--focus expects comma-separated pids, got '{text}'") from None


def _emit_report(report: Report, args):
    if args.format == "json":
        print(report.to_json(), end="")
    else:
        print(report.to_table(per_dataset=getattr(args, "per_dataset", False)), end="")
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as f:
            f.write(report.to_json())
        print(f">>> JSON report saved to: {args.json}")
    if args.fail_on_threat and report.threats():
        print(f"(!) > {len(report.threats())} ICC threat(s) found.", file=sys.stderr)
        return EXIT_THREAT
    return EXIT_OK


def _simulate(scenario, catalog, test_mode):
    monitor = Monitor(scenario, catalog)
    taint_log = monitor.run(test_mode)
    return taint_log, monitor.metadata()


def run_simulation(args):
    print(f"\n[1] Running scenario on the taint monitor...")
    catalog = _catalog(args)
    scenario = load_file(_scenario_path(args.scenario, catalog), catalog)
    taint_log, meta = _simulate(scenario, catalog, args.test_mode or None)

    out = args.out or os.path.join(config.DATA_DIR, "logs", scenario.name)
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    with open(out + LOG_SUFFIX, "wb") as f:
        f.write(taint_log.to_bytes())
    write_metadata(meta, out + META_SUFFIX)

    print(f">>> Scenario '{scenario.name}': {len(taint_log.events)} events.")
    print(f"\tLog saved to: {out + LOG_SUFFIX}")
    print(f"\tMetadata saved to: {out + META_SUFFIX}")
    return EXIT_OK


def run_analysis(args):
    print(f"\n[2] Analyzing taint log...")
    catalog = _catalog(args)
    meta_path = args.meta or (os.path.splitext(args.log)[0] + META_SUFFIX)
    meta = read_metadata(meta_path)
    analyzer = IccAnalyzer(catalog, ignore_sinks=args.ignore_sinks)
    with open(args.log, "rb") as f:
        result = analyzer.run(f, meta, _focus(args.focus))

    expected = load_expected(args.expected) if args.expected else None
    name = os.path.splitext(os.path.basename(args.log))[0]
    report = build_report(result, name, expected=expected, test_mode=is_test_mode(args.test_mode or None))
    if result.skipped_records:
        print(f"\t(!) > Skipped {result.skipped_records} record(s) of unknown kind.")
    for diagnostic in result.diagnostics:
        logging.getLogger("main").info("diagnostic: %s", diagnostic)
    return _emit_report(report, args)


def run_e2e(args):
    print(f"\n[3] Simulating and analyzing scenarios end to end...")
    catalog = _catalog(args)
    test_mode = is_test_mode(args.test_mode or None)
    if args.scenarios:
        scenarios = [load_file(_scenario_path(ref, catalog), catalog) for ref in args.scenarios]
    else:
        scenarios = builtin_corpus(catalog=catalog)
        print(f"\tLoaded {len(scenarios)} corpus scenario(s) from {corpus_dir()}")

    analyzer = IccAnalyzer(catalog, ignore_sinks=args.ignore_sinks)
    reports = []
    for scenario in scenarios:
        taint_log, meta = _simulate(scenario, catalog, test_mode)
        result = analyzer.run(taint_log.to_bytes(), meta)
        reports.append(build_report(result, scenario.name, scenario.dataset,
                                    scenario.expected_verdicts, test_mode))
        print(f"\t{scenario.name}: {len(result.verdicts)} model(s), "
              f"{sum(1 for v in result.verdicts if v.threat.is_threat)} threat(s)")
    return _emit_report(Report.merge(reports), args)


def run_corpus(args):
    catalog = _catalog(args)
    if args.action == "list":
        print(f"\n[0] Builtin corpus ({corpus_dir()})")
        for scenario in builtin_corpus(catalog=catalog):
            print(f"\t{scenario.name:<36} {scenario.dataset:<11} {len(scenario.apps)} app(s), "
                  f"{len(scenario.expected_verdicts)} expected verdict(s)")
        return EXIT_OK

    if not args.name:
        raise IccError("corpus emit needs a scenario name")
    scenario = load_file(_scenario_path(args.name, catalog), catalog)
    taint_log, meta = _simulate(scenario, catalog, args.test_mode or None)
    out_dir = args.out or os.path.join(config.DATA_DIR, "logs")
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, scenario.name)
    with open(base + LOG_SUFFIX, "wb") as f:
        f.write(taint_log.to_bytes())
    write_metadata(meta, base + META_SUFFIX)
    print(f">>> Emitted {base + LOG_SUFFIX} and {base + META_SUFFIX}")
    return EXIT_OK


def run_scaling(args):
    print(f"\n[4] Measuring analyzer scaling...")
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise IccError(f"--sizes expects comma-separated integers, got '{args.sizes}'") from None
    stats = ScalingStats(sizes, args.repeats, _catalog(args))
    out_dir = args.out or os.path.join(config.PLOTS_DIR, "scaling")
    print(stats.report(out_dir))

    viz = ScalingPlots(stats.runs)
    print("\tGenerating stage time plot...")
    viz.plot_stage_times(os.path.join(out_dir, "1_stage_times.png"))
    print("\tGenerating per-model time plot...")
    viz.plot_per_model(os.path.join(out_dir, "2_per_model.png"))
    print(f">>> Scaling results saved to directory: {out_dir}/")
    return EXIT_OK

# -----------------------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(description="ICC threat detection from taint monitor logs")
    parser.add_argument("--catalog", help="tag/source/sink catalog YAML (extends the defaults)")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="step", required=True)

    p = sub.add_parser("run", help="simulate one scenario and write its log and metadata")
    p.add_argument("scenario", help="scenario file or corpus scenario name")
    p.add_argument("--out", help="output path without suffix")
    p.add_argument("--test-mode", action="store_true", help="deterministic header timestamp")
    p.set_defaults(func=run_simulation)

    def _report_options(p):
        p.add_argument("--format", choices=["table", "json"], default="table", help="report format on stdout")
        p.add_argument("--json", help="write the machine-readable report here")
        p.add_argument("--ignore-sinks", action="store_true", help="degraded mode: any sensitive delivery leaks")
        p.add_argument("--fail-on-threat", action="store_true", help="exit 1 when a threat is found")
        p.add_argument("--test-mode", action="store_true", help="report zero timings")

    p = sub.add_parser("analyze", help="analyze a log against its metadata")
    p.add_argument("log")
    p.add_argument("--meta", help=f"metadata file (default: <log>{META_SUFFIX})")
    p.add_argument("--expected", help="expected verdicts YAML for accuracy")
    p.add_argument("--focus", help="comma-separated pids to keep (default: pids in metadata)")
    _report_options(p)
    p.set_defaults(func=run_analysis)

    p = sub.add_parser("e2e", help="simulate and analyze scenarios (default: the whole corpus)")
    p.add_argument("scenarios", nargs="*")
    p.add_argument("--per-dataset", action="store_true", help="add the per-dataset accuracy table")
    _report_options(p)
    p.set_defaults(func=run_e2e)

    p = sub.add_parser("corpus", help="list the builtin corpus or emit one scenario's log")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("--out", help="output directory")
    p.add_argument("--test-mode", action="store_true")
    p.set_defaults(func=run_corpus)

    p = sub.add_parser("scaling", help="time the analyzer over growing numbers of app pairs")
    p.add_argument("--sizes", default="1,10,50,100,200")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=run_scaling)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (IccError, OSError) as e:
        print(f"(!) > {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
