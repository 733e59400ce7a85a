"""Suite runner and the ``verify`` command line interface."""

from .config import SuiteConfig, load_config, parse_flat_config
from .report import CheckResult, Report
from .suites import SUITES, list_suites, run_suite
