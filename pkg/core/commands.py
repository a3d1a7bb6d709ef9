"""
Base class for the toolkit's management commands.

Subclasses declare their own arguments and build a Report; the base class
adds the common output flags, maps toolkit errors onto exit codes, writes the
report and optionally records the run in the ledger.
"""

import logging
import time
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from .exceptions import CapacityError, InvalidArgument
from .models import RunRecord
from .rng import resolve_seed

logger = logging.getLogger(__name__)

# Options Django adds to every command; they never reach the config echo.
DJANGO_OPTIONS = {
    'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color',
    'force_color', 'skip_checks', 'stdout', 'stderr',
}
OUTPUT_OPTIONS = {'output_format', 'out', 'record', 'threads'}


class ReportCommand(BaseCommand):
    """Command that produces a Report."""

    requires_system_checks = []
    subcommand = ''
    uses_seed = False
    default_format = 'human'

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.report = None

    def add_arguments(self, parser):
        self.add_command_arguments(parser)
        output = parser.add_mutually_exclusive_group()
        output.add_argument(
            '--json',
            dest='output_format',
            action='store_const',
            const='json',
            help='Emit the report as JSON',
        )
        output.add_argument(
            '--csv',
            dest='output_format',
            action='store_const',
            const='csv',
            help='Emit the report as CSV',
        )
        parser.add_argument(
            '--out',
            type=str,
            help='Write the report to this path instead of stdout',
        )
        parser.add_argument(
            '--seed',
            type=str,
            default=None,
            help="64-bit seed, or 'random' for fresh entropy (default: CLI_DEFAULT_SEED)",
        )
        parser.add_argument(
            '--threads',
            type=int,
            default=1,
            help='Worker threads for independent tasks (0 = one per CPU)',
        )
        parser.add_argument(
            '--record',
            action='store_true',
            help='Store the run in the ledger',
        )

    def add_command_arguments(self, parser):
        """Hook for subcommand-specific arguments."""

    def build_report(self, options):
        raise NotImplementedError('subclasses of ReportCommand must provide build_report()')

    def config_echo(self, options):
        return {
            key: value for key, value in sorted(options.items())
            if key not in DJANGO_OPTIONS and key not in OUTPUT_OPTIONS and key != 'seed'
        }

    def handle(self, *args, **options):
        name = self.subcommand or self.__module__.rsplit('.', 1)[-1]
        output_format = options.get('output_format') or self.default_format
        options['output_format'] = output_format
        config = self.config_echo(options)
        started = time.perf_counter()
        seed = None

        try:
            if self.uses_seed:
                seed = resolve_seed(options.get('seed'))
                options['seed'] = seed
                config['seed'] = seed
            report = self.build_report(options)
            report.config = config
            rendered = report.render(output_format)
        except (InvalidArgument, CapacityError) as e:
            logger.error(f'{name} refused: {e}')
            self._record(options, name, config, seed, exit_code=2, error=str(e), started=started)
            raise CommandError(str(e), returncode=2)

        self.report = report
        if options.get('out'):
            Path(options['out']).write_text(rendered, encoding='utf-8')
            logger.info(f"Wrote {output_format} report to {options['out']}")
        else:
            self.stdout.write(rendered, ending='')

        elapsed = time.perf_counter() - started
        logger.info(f'{name} finished in {elapsed:.3f}s')
        self._record(options, name, config, seed, payload=report.envelope(), started=started,
                     action=report.action)

    def _record(self, options, name, config, seed, payload=None, exit_code=0, error='', started=None, action=''):
        if not options.get('record'):
            return
        try:
            RunRecord.log_run(
                subcommand=name,
                action=action,
                config=config,
                payload=payload,
                exit_code=exit_code,
                seed=seed,
                output_format=options.get('output_format') or self.default_format,
                output_path=options.get('out') or '',
                error_message=error,
                wall_time=time.perf_counter() - started if started is not None else None,
            )
        except Exception as e:
            logger.error(f'Failed to record {name} run: {e}')
