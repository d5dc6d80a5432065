from wavepack.base import registration

# up to degree 3 the least-asymmetric solution is the Daubechies one
registration.register(id="sym2", entry_point="wavepack.filters.daubechies:DB2")
registration.register(id="sym3", entry_point="wavepack.filters.daubechies:DB3", vanishing_moments=3)

SYM4 = [
    0.0322231006040427,
    -0.012603967262037833,
    -0.09921954357684722,
    0.29785779560527736,
    0.8037387518059161,
    0.49761866763201545,
    -0.02963552764599851,
    -0.07576571478927333,
]

SYM5 = [
    0.019538882735286728,
    -0.021101834024758855,
    -0.17532808990845047,
    0.01660210576452232,
    0.6339789634582119,
    0.7234076904024206,
    0.1993975339773936,
    -0.039134249302383094,
    0.029519490925774643,
    0.027333068345077982,
]

registration.register(id="sym4", entry_point=__name__ + ":SYM4", vanishing_moments=4)
registration.register(id="sym5", entry_point=__name__ + ":SYM5", vanishing_moments=5)
