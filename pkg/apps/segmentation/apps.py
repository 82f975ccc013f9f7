from django.apps import AppConfig


class SegmentationAppConfig(AppConfig):
    name = "apps.segmentation"
    verbose_name = "Reasoning step segmentation"
