from django.apps import AppConfig


class EpsilonConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'epsilon'
    verbose_name = 'Epsilon Measures'
