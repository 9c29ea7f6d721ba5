from django.apps import AppConfig


class QdilogConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'qdilog'
    verbose_name = 'Noncompact quantum dilogarithm'
