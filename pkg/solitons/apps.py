from django.apps import AppConfig


class SolitonsConfig(AppConfig):
    name = "solitons"
    verbose_name = "Closed-form multisoliton construction"
