from .base.define import BoundaryMode, ChannelPolicy, FeatureType, PacketOrdering  # noqa F401
from .base.filter import WaveletFilter, qmf_complete, verify_alias, verify_pr  # noqa F401
from .base.operator import SparseOperator  # noqa F401
from .base.packet import PacketTensor  # noqa F401
from .base.registration import builtin_filter, builtin_names, make_filter, register  # noqa F401
from .version import VERSION as __version__  # noqa F401

__all__ = [
    "base",
    "classify",
    "datasets",
    "filters",
    "runner",
    "stats",
    "test",
    "transform",
    "utils",
]
