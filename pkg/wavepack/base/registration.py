import logging
from typing import Dict, List, Sequence, Union

from wavepack.base.filter import WaveletFilter, qmf_complete, refine_scaling_sequence
from wavepack.utils.common import load_module

logger = logging.getLogger(__name__)

_registry = {}
_cache: Dict[str, WaveletFilter] = {}


def register(id: str, entry_point: Union[str, Sequence[float]], vanishing_moments: int = 0) -> None:
    """entry_point: 'module:NAME' of a scaling sequence (dec_lo, sum sqrt(2)) or the sequence itself.

    vanishing_moments > 0 polishes a tabulated sequence with `refine_scaling_sequence` on first load.
    """
    global _registry

    if not isinstance(entry_point, str):
        entry_point = [float(v) for v in entry_point]

    if id in _registry:
        logger.warning(f"{id} was already registered. It will be overwritten.")
        _cache.pop(id, None)
    _registry[id] = {"entry_point": entry_point, "vanishing_moments": vanishing_moments}


def builtin_names() -> List[str]:
    import wavepack.filters  # noqa F401

    return sorted(_registry.keys())


def builtin_filter(name: str) -> WaveletFilter:
    import wavepack.filters  # noqa F401

    if name in _cache:
        return _cache[name]
    if name not in _registry:
        raise ValueError(f"'{name}' is not a supported filter. supported: [{','.join(builtin_names())}]")

    entry = _registry[name]
    dec_lo = entry["entry_point"]
    if isinstance(dec_lo, str):
        dec_lo = load_module(dec_lo)
    if entry["vanishing_moments"] > 0:
        dec_lo = refine_scaling_sequence(dec_lo, entry["vanishing_moments"])
    bank = qmf_complete(dec_lo, name=name)
    _cache[name] = bank
    logger.debug(f"load filter: {bank}")
    return bank


def make_filter(filter: Union[str, WaveletFilter]) -> WaveletFilter:
    if isinstance(filter, WaveletFilter):
        return filter
    return builtin_filter(filter)
