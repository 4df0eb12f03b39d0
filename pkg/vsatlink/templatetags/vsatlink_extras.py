from django import template

register = template.Library()

@register.filter(name="format_db")
def format_db(value, places=2):
    try:
        value = float(value)
        places = int(places)
    except (TypeError, ValueError):
        return "-"  # no value, e.g. an unset override

    return f"{value:+.{places}f}"
