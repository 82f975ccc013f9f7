from django.apps import AppConfig


class PipelineAppConfig(AppConfig):
    name = "apps.pipeline"
    verbose_name = "Command-line pipeline"
