"""
URL configuration for moddouble_project.

The project is driven from the command line (``manage.py verify``);
no HTTP endpoints are exposed.
"""

urlpatterns = []
