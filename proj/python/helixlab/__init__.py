"""Python access to the helixlab checks."""

import json

from ._helixlab import (
    ConfigError,
    DimensionError,
    GeometryError,
    NotGeodesicSection,
    NullSection,
    __version__,
    catalog_listing,
    catalog_names,
    classify_curve,
    curve_names,
    describe,
    trace_section,
)
from ._helixlab import run_check as _run_check


def run_check(config, jobs=1, tol_scale=1.0):
    """Run a scenario (dict or JSON text). Returns (report dict, csv text)."""
    text = config if isinstance(config, str) else json.dumps(config)
    report, csv = _run_check(text, jobs, tol_scale)
    return json.loads(report), csv


__all__ = [
    "ConfigError",
    "DimensionError",
    "GeometryError",
    "NotGeodesicSection",
    "NullSection",
    "__version__",
    "catalog_listing",
    "catalog_names",
    "classify_curve",
    "curve_names",
    "describe",
    "run_check",
    "trace_section",
]
