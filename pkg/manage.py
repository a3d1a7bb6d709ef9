#!/usr/bin/env python
"""Django's command-line utility for administrative tasks and toolkit subcommands."""
import os
import sys


def main():
    """Run administrative tasks."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'mbqclab.settings')
    try:
        import django
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc

    from core.cli import SUBCOMMANDS
    if len(sys.argv) > 1 and sys.argv[1] in SUBCOMMANDS:
        django.setup()
        from core.cli import dispatch
        exit_code, _ = dispatch(sys.argv[1:])
        sys.exit(exit_code)
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
