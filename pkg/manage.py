#!/usr/bin/env python
"""
quatnls command-line entry point.

    python manage.py build --config fixtures/example_real_eigenvalue.json
    python manage.py sample --config ... --out q.csv
    python manage.py verify --config ... --level full
    python manage.py scan_singular --config ... --t 0
"""
import os
import sys


def main():
    """Dispatch to Django's management command runner."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "quatnls.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages from requirements.txt "
            "into the active virtual environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
