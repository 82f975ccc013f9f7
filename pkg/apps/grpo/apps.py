from django.apps import AppConfig


class GrpoAppConfig(AppConfig):
    name = "apps.grpo"
    verbose_name = "Group relative policy optimization"
