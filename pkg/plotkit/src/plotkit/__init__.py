"""Batch renderer for complexity-probability scatter figures."""

from .render import (
    DatasetFormatError,
    PlotSpec,
    build_figure,
    load_dataset,
    load_fit,
    main,
    render_scatter,
)

__version__ = "0.1.0"
