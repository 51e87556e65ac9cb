from django.apps import AppConfig


class SteinlabConfig(AppConfig):
    name = "steinlab"
    verbose_name = "Stein-method diagnostics"
