from django.apps import AppConfig


class TripletsConfig(AppConfig):
    name = "triplets"
    verbose_name = "Right quadruplets and their validation"
