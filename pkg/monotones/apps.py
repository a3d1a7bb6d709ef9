from django.apps import AppConfig


class MonotonesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'monotones'
    verbose_name = 'Entanglement Monotones'
