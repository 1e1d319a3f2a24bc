"""Exhaustive/randomized scans, orbit canonicalization and report I/O."""
from .canonical import apply_group_element, canonical_form, orbit_size
from .report import Row, ScanReport, Violation
from .scans import (
    DEFAULT_GRID,
    SUITES,
    constant_scan,
    conjecture_probe,
    f_table,
    random_handshake,
    random_perturbed_subcube,
    verify_suite,
)
