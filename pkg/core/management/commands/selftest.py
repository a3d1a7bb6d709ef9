"""
Django management command running the fast acceptance checks.
"""

from django.core.management.base import CommandError

from core import selftest
from core.commands import ReportCommand
from core.reports import Report

COLUMNS = ['name', 'passed', 'detail']


class Command(ReportCommand):
    help = 'Run the fast acceptance checks and print a pass/fail table'
    subcommand = 'selftest'
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument('--only', nargs='+', choices=[name for name, _ in selftest.FAST_CHECKS],
                            help='Run only these checks')

    def build_report(self, options):
        results = selftest.run_checks(options['seed'], options.get('only'))
        rows = [{'name': r.name, 'passed': r.passed, 'detail': r.detail} for r in results]
        payload = {'passed': all(r.passed for r in results), 'failures': sum(not r.passed for r in results),
                   'checks': rows}
        report = Report('selftest', {}, payload, action='fast')
        report.columns = COLUMNS
        report.rows = rows
        return report

    def handle(self, *args, **options):
        super().handle(*args, **options)
        if not self.report.payload['passed']:
            raise CommandError(f"{self.report.payload['failures']} self-test check(s) failed", returncode=1)
