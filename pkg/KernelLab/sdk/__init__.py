from .api import KernelLab, run_command
from .config import SessionConfig
from .results import Report, Status

__all__ = ['KernelLab', 'SessionConfig', 'Report', 'Status', 'run_command']
