"""Sweep engine, gap verification, lemma validation and report emission."""

from .grid import Axis, GridSyntaxError, SweepGrid, default_grid, default_rho, load_grid, parse_grid
from .lemmas import LemmaReport, lemma_validation
from .report import GapRecord, GapReport, emit_report, load_report, report_from_dict, report_to_dict
from .sweeps import (
    StrongSpec,
    consistency_sweep,
    continuity_audit,
    gap_sweep_ccdpes,
    gap_sweep_strong,
    gap_sweep_unequal,
    gap_sweep_wrdp2,
    gap_sweep_wrdpM,
    gap_sweep_wsfd2,
)
from .strong import random_strong_specs
