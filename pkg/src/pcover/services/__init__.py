"""Service layer entry points."""

from .report import Report, emit_report, read_report, render_report
from .runs import RUNNERS, execute, run_gen
from .suite import SCALES, run_suite

__all__ = ["RUNNERS", "SCALES", "Report", "emit_report", "execute", "read_report", "render_report", "run_gen", "run_suite"]
