"""``penalty-lab`` command line: run sweeps, verification suites and worked examples."""
import csv
import json
import logging
import sys
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from . import datatypes
from .config import ConfigError, load_config
from .simulation import SimulationInvariantError, run_experiment
from .utils import fmt_number
from .verification import SUITES, check_examples, run_suite


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

ROW_COLUMNS = [
    'n', 'mechanism', 'penalty',
    'welfare_mean', 'welfare_se',
    'utilization_mean', 'utilization_se',
    'revenue_mean', 'revenue_se',
]
PER_AGENT_COLUMNS = ['agent_index', 'beta', 'betahat', 'mechanism', 'welfare_mean', 'usage_mean']


def _cell(value: Any) -> Any:
    if isinstance(value, float) or value is None:
        return fmt_number(value)
    return value


def _rounded(value: Any) -> Any:
    if isinstance(value, float):
        return float(fmt_number(value))
    if isinstance(value, list):
        return [_rounded(x) for x in value]
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    return value


def _write_csv(path: Path, columns: List[str], records: List[Dict[str, Any]]):
    with path.open('w', newline='', encoding='utf-8') as f:
        writer = csv.DictWriter(f, fieldnames=columns, lineterminator='\n')
        writer.writeheader()
        for record in records:
            writer.writerow({k: _cell(record[k]) for k in columns})


def write_rows(rows: Sequence[datatypes.ResultRow], out: Path, fmt: str = 'csv') -> List[Path]:
    """Write result rows; per-agent statistics go to ``<stem>_per_agent.csv`` in csv mode."""
    if fmt == 'json':
        document = {'rows': [_rounded(row.model_dump()) for row in rows]}
        with out.open('w', newline='\n', encoding='utf-8') as f:
            json.dump(document, f, indent=2)
            f.write('\n')
        return [out]

    _write_csv(out, ROW_COLUMNS, [row.model_dump() for row in rows])
    written = [out]
    per_agent = [
        dict(stat.model_dump(), mechanism=row.label)
        for row in rows if row.per_agent
        for stat in row.per_agent
    ]
    if per_agent:
        side = out.with_name(f"{out.stem}_per_agent.csv")
        _write_csv(side, PER_AGENT_COLUMNS, per_agent)
        written.append(side)
    return written


def _report(results: Sequence[datatypes.CheckResult], quiet: bool = False) -> int:
    failed = [r for r in results if not r.passed]
    for r in results:
        if quiet and r.passed:
            continue
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  {r.detail}")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_run(args: Namespace) -> int:
    cfg = load_config(args.config, {
        'seed': args.seed,
        'replicates': args.replicates,
        'workers': args.workers,
    })
    out = Path(args.out)
    if not out.parent.is_dir():
        raise ConfigError(f"output directory {out.parent} does not exist", field='out')
    rows = run_experiment(cfg, progress=not args.quiet)
    for path in write_rows(rows, out, args.format):
        logger.info(f"Wrote {path}")
    return EXIT_OK


def cmd_verify(args: Namespace) -> int:
    return _report(run_suite(args.suite, args.samples, args.seed), args.quiet)


def cmd_examples(args: Namespace) -> int:
    return _report(check_examples(), args.quiet)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog='penalty-lab',
        description='Penalty-bidding mechanisms for present-biased agents',
    )
    parser.add_argument('--log-level', type=str, default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('--quiet', action='store_true',
                        help='No progress bars; only failing checks are printed')
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='Run a config-driven sweep and write result tables')
    run.add_argument('--config', type=str, required=True)
    run.add_argument('--out', type=str, required=True)
    run.add_argument('--format', type=str, default='csv', choices=['csv', 'json'])
    run.add_argument('--seed', type=int, default=None)
    run.add_argument('--replicates', type=int, default=None)
    run.add_argument('--workers', type=int, default=None)
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser('verify', help='Check closed forms and equilibria against numeric oracles')
    verify.add_argument('--suite', type=str, default='all', choices=list(SUITES))
    verify.add_argument('--samples', type=int, default=None)
    verify.add_argument('--seed', type=int, default=0)
    verify.set_defaults(func=cmd_verify)

    examples = sub.add_parser('examples', help='Reproduce the worked single-resource examples')
    examples.set_defaults(func=cmd_examples)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
    try:
        return args.func(args)
    except SimulationInvariantError as err:
        print(f"penalty-lab: invariant violated: {err}", file=sys.stderr)
        return EXIT_FAILED
    except ConfigError as err:
        print(f"penalty-lab: config error: {err}", file=sys.stderr)
    except ValidationError as err:
        first = err.errors()[0]
        where = '.'.join(str(p) for p in first['loc']) or 'config'
        print(f"penalty-lab: invalid {where}: {first['msg']}", file=sys.stderr)
    except OSError as err:
        print(f"penalty-lab: {err.filename or 'io'}: {err.strerror}", file=sys.stderr)
    except ValueError as err:
        print(f"penalty-lab: {err}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
