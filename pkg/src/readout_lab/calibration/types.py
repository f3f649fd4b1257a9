from typing import NamedTuple


class TemperatureFit(NamedTuple):
    """Fitted softmax temperature and the mean NLL it achieves."""
    temperature: float
    nll: float
    degenerate: bool
