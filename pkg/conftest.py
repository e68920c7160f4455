import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "biqkit.settings")
django.setup()
