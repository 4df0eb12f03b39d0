"""`vsatlink <command>` / `python -m vsatlink <command>`."""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'vsatsim.settings')
    from django.core.management import execute_from_command_line

    execute_from_command_line(["vsatlink", *sys.argv[1:]])


if __name__ == '__main__':
    main()
