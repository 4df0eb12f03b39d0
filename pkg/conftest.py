"""Configure Django before pytest collects the vsatlink tests (mirrors manage.py)."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'vsatsim.settings')
django.setup()
