from django.apps import AppConfig


class PercolationConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'percolation'
    verbose_name = 'Lattice Percolation'
