from django.apps import AppConfig


class LoccConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'locc'
    verbose_name = 'LOCC Protocols'
