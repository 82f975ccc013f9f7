from django.apps import AppConfig


class RewardsAppConfig(AppConfig):
    name = "apps.rewards"
    verbose_name = "Step-aware rewards"
