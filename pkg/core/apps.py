from django.apps import AppConfig


class CoreConfig(AppConfig):
    """Núcleo numérico: álgebra lineal densa y muestreo de Haar."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'core'
    verbose_name = 'Núcleo numérico'
