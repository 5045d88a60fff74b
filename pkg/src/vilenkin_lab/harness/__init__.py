"""Verification suites, experiment drivers, reports and the command line."""
from .config import SuiteConfig, build_config
from .experiments import boundedness_contrast, counterexample_report, growth_experiment, kernel_table
from .regression import RegressionStore
from .report import Check, Report, emit
from .suites import SUITES, run_suite

__all__ = [
    "Check", "RegressionStore", "Report", "SUITES", "SuiteConfig", "boundedness_contrast", "build_config",
    "counterexample_report", "emit", "growth_experiment", "kernel_table", "run_suite",
]
