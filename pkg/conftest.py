import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'moddouble_project.settings')
django.setup()
