"""Figure rendering for pass-isac experiment summaries."""

from .render import SchemaError, plot_region, plot_sweep

__version__ = "0.1.0"
