from django.apps import AppConfig


class VsatlinkConfig(AppConfig):
    name = 'vsatlink'
    verbose_name = "VSAT satellite link simulator"
