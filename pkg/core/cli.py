"""
Single entry point for the toolkit subcommands.

`manage.py <subcommand> ...` routes here; hyphenated names map onto the
management command modules that implement them.
"""

import logging
import sys
from importlib import import_module

from django.core.management import get_commands

logger = logging.getLogger(__name__)

SUBCOMMANDS = {
    'measure': 'measure',
    'eps-bound': 'eps_bound',
    'criteria': 'criteria',
    'percolate': 'percolate',
    'deformed': 'deformed',
    'locc': 'locc',
    'sweep': 'sweep',
    'selftest': 'selftest',
}


def usage():
    return 'usage: manage.py {' + ','.join(SUBCOMMANDS) + '} [options]\n'


def load_command(subcommand, stdout=None, stderr=None):
    """Instantiate the management command behind a toolkit subcommand."""
    name = SUBCOMMANDS[subcommand]
    app_name = get_commands()[name]
    module = import_module(f'{app_name}.management.commands.{name}')
    return module.Command(stdout=stdout, stderr=stderr)


def dispatch(argv, stdout=None, stderr=None):
    """
    Run one subcommand from an argument vector.

    Returns (exit_code, report): 0 on success, 2 for invalid arguments or
    usage errors, 1 for internal failures. The report is None unless the
    command completed.
    """
    err = stderr or sys.stderr
    if not argv or argv[0] not in SUBCOMMANDS:
        if argv:
            logger.error(f'Unknown subcommand {argv[0]!r}')
        err.write(usage())
        return 2, None

    command = load_command(argv[0], stdout=stdout, stderr=stderr)
    try:
        command.run_from_argv(['manage.py', SUBCOMMANDS[argv[0]], *argv[1:]])
    except SystemExit as e:
        if e.code is None:
            code = 0
        else:
            code = e.code if isinstance(e.code, int) else 1
        return code, command.report if code == 0 else None
    except Exception as e:
        logger.exception(f'{argv[0]} failed: {e}')
        return 1, None
    return 0, command.report
