import math

from wavepack.base import registration

# Daubechies scaling sequences, normalized to sum sqrt(2).
# Tables are refined to full precision on load (vanishing_moments).

_S2 = math.sqrt(2.0)
_S3 = math.sqrt(3.0)

HAAR = [1 / _S2, 1 / _S2]

DB2 = [
    (1 + _S3) / (4 * _S2),
    (3 + _S3) / (4 * _S2),
    (3 - _S3) / (4 * _S2),
    (1 - _S3) / (4 * _S2),
]

DB3 = [
    0.3326705529509569,
    0.8068915093133388,
    0.4598775021193313,
    -0.13501102001039084,
    -0.08544127388224149,
    0.035226291882100656,
]

DB4 = [
    0.23037781330885523,
    0.7148465705525415,
    0.6308807679295904,
    -0.02798376941698385,
    -0.18703481171888114,
    0.030841381835986965,
    0.032883011666982945,
    -0.010597401784997278,
]

DB5 = [
    0.160102397974125,
    0.6038292697974729,
    0.7243085284385744,
    0.13842814590110342,
    -0.24229488706619015,
    -0.03224486958502952,
    0.07757149384006515,
    -0.006241490213011705,
    -0.012580751999015526,
    0.003335725285001549,
]

registration.register(id="haar", entry_point=__name__ + ":HAAR")
registration.register(id="db1", entry_point=__name__ + ":HAAR")
registration.register(id="db2", entry_point=__name__ + ":DB2")
registration.register(id="db3", entry_point=__name__ + ":DB3", vanishing_moments=3)
registration.register(id="db4", entry_point=__name__ + ":DB4", vanishing_moments=4)
registration.register(id="db5", entry_point=__name__ + ":DB5", vanishing_moments=5)
