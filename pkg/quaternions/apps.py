from django.apps import AppConfig


class QuaternionsConfig(AppConfig):
    name = "quaternions"
    verbose_name = "Σ-algebra and quaternionic block matrices"
