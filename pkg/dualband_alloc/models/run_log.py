# -*- coding: utf-8 -*-

import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import List, Optional

_logger = logging.getLogger(__name__)

OPERATIONS = ('trial', 'sweep_point', 'compare', 'export')
STATUSES = ('success', 'error', 'warning', 'info')


@dataclass
class RunLogEntry:
    """One simulation activity record"""

    operation: str
    status: str
    message: str
    algorithm: Optional[str] = None
    variable: Optional[str] = None
    value: Optional[float] = None
    seed: Optional[int] = None
    details: Optional[str] = None
    error_message: Optional[str] = None
    start_time: datetime = field(default_factory=datetime.now)
    end_time: datetime = field(default_factory=datetime.now)

    @property
    def duration(self) -> float:
        """Operation duration in seconds"""
        if self.start_time and self.end_time:
            return (self.end_time - self.start_time).total_seconds()
        return 0.0


class RunLog:
    """In-memory log of trials and sweep points"""

    def __init__(self):
        self.entries: List[RunLogEntry] = []

    def __len__(self):
        return len(self.entries)

    def create_log(self, operation, status, message, **kwargs):
        """Create a new log entry"""
        if operation not in OPERATIONS:
            raise ValueError(f"Unknown operation '{operation}'")
        if status not in STATUSES:
            raise ValueError(f"Unknown status '{status}'")
        entry = RunLogEntry(operation=operation, status=status, message=message, **kwargs)
        self.entries.append(entry)
        return entry

    def log_success(self, operation, message, **kwargs):
        """Log a successful operation"""
        return self.create_log(operation, 'success', message, **kwargs)

    def log_error(self, operation, message, error_message=None, **kwargs):
        """Log a failed operation"""
        kwargs['error_message'] = error_message
        return self.create_log(operation, 'error', message, **kwargs)

    def log_warning(self, operation, message, **kwargs):
        """Log a warning"""
        return self.create_log(operation, 'warning', message, **kwargs)

    def log_info(self, operation, message, **kwargs):
        """Log an informational message"""
        return self.create_log(operation, 'info', message, **kwargs)

    def get_error_logs(self):
        return [entry for entry in self.entries if entry.status == 'error']

    def get_logs_by_operation(self, operation):
        return [entry for entry in self.entries if entry.operation == operation]

