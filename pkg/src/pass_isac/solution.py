"""Container for the outcome of one design run."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .geometry import PinchingLayout
from .metrics import MetricReport


@dataclass(frozen=True)
class DesignSolution:
    """Layouts, powers, and achieved metrics for a single scene design.

    ``power`` is the downlink transmit power or the uplink communication
    power; ``sensing_power`` is only set for uplink designs.  ``partition``
    holds a ``PartitionResult`` for downlink designs, ``bcd`` a ``BcdTrace``
    and ``q_solution`` a ``QSolution`` for uplink designs.  Method-specific
    diagnostics (endpoint checks, beamforming angles, ...) go in ``extras``.
    """

    method: str
    link: str
    tx_layout: PinchingLayout
    rx_layout: PinchingLayout
    power: float
    report: MetricReport
    sensing_power: float | None = None
    partition: Any = None
    bcd: Any = None
    q_solution: Any = None
    extras: dict[str, Any] = field(default_factory=dict)
