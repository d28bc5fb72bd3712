# mimo_dos/utils/__init__.py
from .file_handler import ResultWriter, WriteResult
from .experiments import ExperimentConfig, ExperimentRunner, VerifyReport, setup_logging

__all__ = [
    'ResultWriter',
    'WriteResult',
    'ExperimentConfig',
    'ExperimentRunner',
    'VerifyReport',
    'setup_logging'
]
