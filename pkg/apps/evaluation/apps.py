from django.apps import AppConfig


class EvaluationAppConfig(AppConfig):
    name = "apps.evaluation"
    verbose_name = "Accuracy-efficiency evaluation"
