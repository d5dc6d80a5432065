from . import daubechies, symlets  # noqa F401
