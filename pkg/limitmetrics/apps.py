from django.apps import AppConfig


class LimitmetricsConfig(AppConfig):
    name = "limitmetrics"
    verbose_name = "Limit-theorem metrics"
