from django.apps import AppConfig


class ProfilerAppConfig(AppConfig):
    name = "apps.profiler"
    verbose_name = "Reasoning category profiler"
