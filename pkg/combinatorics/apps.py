from django.apps import AppConfig


class CombinatoricsConfig(AppConfig):
    name = "combinatorics"
    verbose_name = "Exact closed forms"
