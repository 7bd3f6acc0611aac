"""Tables derived from verification results."""

from .summary import build_bucket_table, build_check_table, build_escape_table, build_summary
from .traces import compute_running_trace

__all__ = [
    "build_bucket_table",
    "build_check_table",
    "build_escape_table",
    "build_summary",
    "compute_running_trace",
]
