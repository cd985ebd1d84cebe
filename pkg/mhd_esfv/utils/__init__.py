# Config files, CSV artifacts and console reports
from .reporting import error_report, success_report

__all__ = [
    "success_report",
    "error_report",
]
