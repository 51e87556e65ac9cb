from django.apps import AppConfig


class SamplersConfig(AppConfig):
    name = "samplers"
    verbose_name = "Seeded samplers"
