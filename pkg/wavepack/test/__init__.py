from .filter_bank import TestFilterBank  # noqa F401
