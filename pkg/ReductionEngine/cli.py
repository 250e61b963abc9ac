#!/usr/bin/env python3
"""
Reduction Engine CLI - build, run, verify, benchmark and export OuMv reductions

Usage:
    python cli.py build --family FAMILY --variant VARIANT --n N [--seed SEED] [--output FILE]
    python cli.py run --family FAMILY --variant VARIANT --n N [--trials T] [--adapter NAME]
    python cli.py verify [--family FAMILY] [--variant VARIANT] [--n N ...] [--trials T]
    python cli.py bench --family FAMILY --variant VARIANT --n N [N ...] [--timings]
    python cli.py export --family FAMILY --variant VARIANT --n N --format dot|edges|map
"""

import argparse
import logging
import sys

from ReductionEngine.src.graph.traversal import is_bipartite
from ReductionEngine.src.harness.bench import BENCH_COLUMNS, TIMING_COLUMNS, bench, fit_update_scaling
from ReductionEngine.src.harness.config import load_config
from ReductionEngine.src.harness.export import EXPORT_FORMATS, export_construction
from ReductionEngine.src.harness.reports import VERIFY_COLUMNS, to_csv, to_json, verify_rows, write_text
from ReductionEngine.src.harness.runner import (FAMILIES, Cell, build_driver, make_cells,
                                               prepare_instance, run_cell, run_cells)
from ReductionEngine.src.harness.verification import verify_construction
from ReductionEngine.src.oumv.generators import INSTANCE_MODES, generate_instance
from ReductionEngine.src.oumv.text_format import read_instance

# flags that map straight onto configuration keys
CONFIG_FLAGS = ("t", "delta", "beta", "d", "seed", "trials", "adapter", "workers", "mode")


def format_summary(summary, indent=0):
    """Format a construction summary for human-readable output"""
    prefix = "  " * indent
    lines = [f"{prefix}🔧 {summary['family']}/{summary['variant']} (n={summary['n']})"]
    lines.append(f"{prefix}   Nodes: {summary['N']}  Edges: {summary['m']}")
    if summary.get('expected_N') is not None:
        lines.append(f"{prefix}   Expected reduction nodes: {summary['expected_N']}")
    if 'max_degree' in summary:
        lines.append(f"{prefix}   Max degree: {summary['max_degree']}")
    if 'bipartite' in summary:
        lines.append(f"{prefix}   Bipartite: {'yes' if summary['bipartite'] else 'no'}")
    if summary.get('threshold') is not None:
        lines.append(f"{prefix}   Threshold: {summary['threshold']}")
    if summary.get('certificate'):
        certificate = summary['certificate']
        lines.append(f"{prefix}   Expansion ({certificate['method']}): {certificate['value']}")
    for note in summary.get('notes', []):
        lines.append(f"{prefix}   Note: {note}")
    return "\n".join(lines)


def format_run(run):
    """Format one reduction run for human-readable output"""
    status = "✅" if run['passed'] else "❌"
    lines = [f"{status} {run['family']}/{run['variant']} n={run['n']} seed={run['seed']}"]
    lines.append(f"   Pairs: {len(run['pairs'])}  Updates: {run['total_updates']}  "
                 f"Queries: {run['total_queries']}  Max updates/pair: {run['max_updates_per_pair']}")
    bits = "".join(str(p['bit']) for p in sorted(run['pairs'], key=lambda p: p['index']))
    truth = "".join(str(p['oracle']) for p in sorted(run['pairs'], key=lambda p: p['index']))
    lines.append(f"   Decoded: {bits}  Oracle: {truth}")
    if 'timings' in run:
        lines.append("   Time: " + ", ".join(f"{k}={v:.4f}" for k, v in sorted(run['timings'].items())))
    return "\n".join(lines)


def format_report(report):
    """Format a verification report for human-readable output"""
    status = "✅" if report['passed'] else "❌"
    lines = [f"{status} {report['family']}/{report['variant']} n={report['n']}"]
    for item in report['items']:
        mark = "✓" if item['passed'] else "✗"
        line = f"   {mark} {item['name']}: {item['value']}"
        if item['expected'] is not None:
            line += f" (expected {item['expected']})"
        if item['detail']:
            line += f" - {item['detail']}"
        lines.append(line)
    return "\n".join(lines)


def output_text(text, output_file=None):
    """Write to a file or print"""
    if output_file:
        write_text(text, output_file)
        print(f"✅ Output saved to: {output_file}")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def overrides_from_args(args):
    """Configuration values given explicitly on the command line"""
    values = {}
    for key in CONFIG_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            values[key] = value
    if getattr(args, 'd', None) is not None and getattr(args, 'variant', None) == 'expander':
        values['densest_expander_d'] = values.pop('d')
    if getattr(args, 'beta', None) is not None and getattr(args, 'family', None) == 'densest':
        values['densest_beta'] = values.pop('beta')
    return values


def load_instance(args, config, n, seed):
    if getattr(args, 'instance', None):
        return read_instance(args.instance)
    return generate_instance(n, config.mode, seed)


def cmd_build(args, config):
    """Build one construction and print its summary"""
    seed = config.seed
    instance = prepare_instance(args.family, args.variant, load_instance(args, config, args.n[0], seed))
    driver = build_driver(args.family, args.variant, instance, config.gadget_options(args.family, seed))
    summary = driver.summary()
    summary['max_degree'] = max(driver.graph.degrees(), default=0)
    summary['bipartite'] = is_bipartite(driver.graph)[0]
    if args.format == 'json':
        output_text(to_json(summary), args.output)
    else:
        output_text(format_summary(summary), args.output)
    return True


def cmd_run(args, config):
    """Run reductions against an adapter and compare with the oracle"""
    if getattr(args, 'instance', None):
        instance = read_instance(args.instance)
        runs = [run_cell(Cell(args.family, args.variant, instance.n, config.seed), config, instance)]
    else:
        cells = make_cells(args.family, args.variant, args.n, config.seed, config.trials)
        runs = run_cells(cells, config)
    data = [run.to_dict(args.timings) for run in runs]
    if args.format == 'json':
        output_text(to_json(data), args.output)
    elif args.format == 'csv':
        columns = ["family", "variant", "n", "seed", "total_updates", "total_queries",
                   "max_updates_per_pair", "mismatches", "passed"]
        output_text(to_csv(data, columns, config.precision), args.output)
    else:
        output_text("\n".join(format_run(run) for run in data), args.output)
    return all(run.passed for run in runs)


def cmd_verify(args, config):
    """Run every structural and behavioural check"""
    targets = []
    families = [args.family] if args.family else sorted(FAMILIES)
    for family in families:
        variants = [args.variant] if args.variant else list(FAMILIES[family])
        for variant in variants:
            for n in args.n:
                targets.append((family, variant, n))
    reports = [verify_construction(family, variant, n, config) for family, variant, n in sorted(targets)]
    if args.format == 'json':
        output_text(to_json([r.to_dict(args.timings) for r in reports]), args.output)
    elif args.format == 'csv':
        output_text(to_csv(verify_rows(reports), VERIFY_COLUMNS, config.precision), args.output)
    else:
        output_text("\n".join(format_report(r.to_dict()) for r in reports), args.output)
    return all(report.passed for report in reports)


def cmd_bench(args, config):
    """Benchmark a construction over several n"""
    rows = bench(args.family, args.variant, args.n, config, trials=config.trials)
    columns = BENCH_COLUMNS + (TIMING_COLUMNS if args.timings else [])
    if args.format == 'json':
        fit = fit_update_scaling(rows)
        data = {"rows": [{k: row[k] for k in columns} for row in rows],
                "fit": fit.to_dict() if fit else None}
        output_text(to_json(data), args.output)
    else:
        output_text(to_csv(rows, columns, config.precision), args.output)
    return all(row['mismatches'] == 0 for row in rows)


def cmd_export(args, config):
    """Export a construction as DOT, an edge list or its layout map"""
    instance = load_instance(args, config, args.n[0], config.seed)
    text = export_construction(args.family, args.variant, instance, args.export_format, config,
                               config.seed, args.first_pair)
    output_text(text, args.output)
    return True


def add_construction_args(parser, n_nargs='+'):
    parser.add_argument('--family', required=True, choices=sorted(FAMILIES), help='Reduction family')
    parser.add_argument('--variant', required=True, help='Construction variant (e.g., const, expander)')
    parser.add_argument('--n', type=int, nargs=n_nargs, required=True, help='OuMv dimension(s)')
    add_parameter_args(parser)


def add_parameter_args(parser):
    parser.add_argument('--t', type=float, help='Degree trade-off t in [0, 1] (varying variants)')
    parser.add_argument('--delta', type=float, help='Approximation slack delta (st approx)')
    parser.add_argument('--beta', type=float, help='Power-law exponent')
    parser.add_argument('--d', type=int, help='Densest gadget degree')
    parser.add_argument('--seed', type=int, help='Random seed for reproducible runs')
    parser.add_argument('--mode', choices=INSTANCE_MODES, help='Instance generator mode')


def main():
    parser = argparse.ArgumentParser(
        description='Reduction Engine - OuMv reductions to dynamic graph problems',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Build and inspect a construction
  %(prog)s build --family matching --variant const --n 4

  # Run against the recompute adapter with a fixed seed
  %(prog)s run --family st --variant expander --n 4 --seed 7 --trials 5

  # Verify every variant of a family
  %(prog)s verify --family densest --n 3

  # Benchmark into a CSV file
  %(prog)s bench --family matching --variant const --n 2 4 8 --output bench.csv
        """
    )
    parser.add_argument('--config', help='key=value configuration file')
    parser.add_argument('--data-dir', help='Directory holding defaults.json')
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level (default: WARNING)')

    subparsers = parser.add_subparsers(dest='command', help='Command to execute')

    build_parser = subparsers.add_parser('build', help='Build a construction and print its summary')
    add_construction_args(build_parser, n_nargs=1)
    build_parser.add_argument('--instance', help='Instance file to build from')
    build_parser.add_argument('--format', choices=['json', 'text'], default='text',
                              help='Output format (default: text)')
    build_parser.add_argument('--output', help='Output file path')

    run_parser = subparsers.add_parser('run', help='Run reductions and compare with the oracle')
    add_construction_args(run_parser)
    run_parser.add_argument('--instance', help='Instance file (overrides --n)')
    run_parser.add_argument('--trials', type=int, help='Seeds per n')
    run_parser.add_argument('--adapter', help='Adapter name (default: recompute)')
    run_parser.add_argument('--workers', type=int, help='Worker processes')
    run_parser.add_argument('--timings', action='store_true', help='Include wall times')
    run_parser.add_argument('--format', choices=['json', 'csv', 'text'], default='text',
                            help='Output format (default: text)')
    run_parser.add_argument('--output', help='Output file path')

    verify_parser = subparsers.add_parser('verify', help='Check constructions and their invariants')
    verify_parser.add_argument('--family', choices=sorted(FAMILIES), help='Family (default: all)')
    verify_parser.add_argument('--variant', help='Variant (default: all of the family)')
    verify_parser.add_argument('--n', type=int, nargs='+', default=[2], help='Dimensions (default: 2)')
    add_parameter_args(verify_parser)
    verify_parser.add_argument('--trials', type=int, help='Seeds per target')
    verify_parser.add_argument('--adapter', help='Adapter name (default: recompute)')
    verify_parser.add_argument('--timings', action='store_true', help='Include wall times')
    verify_parser.add_argument('--format', choices=['json', 'csv', 'text'], default='text',
                               help='Output format (default: text)')
    verify_parser.add_argument('--output', help='Output file path')

    bench_parser = subparsers.add_parser('bench', help='Benchmark update and query counts')
    add_construction_args(bench_parser)
    bench_parser.add_argument('--trials', type=int, help='Seeds per n')
    bench_parser.add_argument('--adapter', help='Adapter name (default: recompute)')
    bench_parser.add_argument('--workers', type=int, help='Worker processes')
    bench_parser.add_argument('--timings', action='store_true', help='Include wall-time columns')
    bench_parser.add_argument('--format', choices=['csv', 'json'], default='csv',
                              help='Output format (default: csv)')
    bench_parser.add_argument('--output', help='Output file path')

    export_parser = subparsers.add_parser('export', help='Export a construction')
    add_construction_args(export_parser, n_nargs=1)
    export_parser.add_argument('--instance', help='Instance file to build from')
    export_parser.add_argument('--format', dest='export_format', choices=EXPORT_FORMATS, default='edges',
                               help='Export format (default: edges)')
    export_parser.add_argument('--first-pair', action='store_true',
                               help='Apply the first pair before exporting')
    export_parser.add_argument('--output', help='Output file path')

    args = parser.parse_args()

    if not args.command:
        parser.print_help()
        return 1

    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        variant = getattr(args, 'variant', None)
        if variant and getattr(args, 'family', None) and variant not in FAMILIES[args.family]:
            raise ValueError(f"Unknown {args.family} variant: {variant} "
                             f"(choose from {', '.join(FAMILIES[args.family])})")
        config = load_config(args.config, args.data_dir, overrides_from_args(args))
        if getattr(args, 'seed', None) is not None:
            print(f"🌱 Using seed: {config.seed}", file=sys.stderr)

        if args.command == 'build':
            ok = cmd_build(args, config)
        elif args.command == 'run':
            ok = cmd_run(args, config)
        elif args.command == 'verify':
            ok = cmd_verify(args, config)
        elif args.command == 'bench':
            ok = cmd_bench(args, config)
        elif args.command == 'export':
            ok = cmd_export(args, config)

        return 0 if ok else 1

    except Exception as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        if args.log_level == 'DEBUG':
            import traceback
            traceback.print_exc()
        return 1


if __name__ == '__main__':
    sys.exit(main())
