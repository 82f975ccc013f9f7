from django.apps import AppConfig


class TrainerAppConfig(AppConfig):
    name = "apps.trainer"
    verbose_name = "Toy policy trainer"
