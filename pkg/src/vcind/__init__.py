"""Trace counting, switch rank and density exponents over ordered binary traces."""

from .density import DensityEstimate, check_bound, coincidence_report, fit, fit_counts
from .rank import SwitchDecomposition, brute_min_switch_rank, decompose, family_rank, joint_cuts, min_switch_rank
from .scheme import SchemeParams, certify, decode, decode_set, encode, encode_set
from .trace import CutSet, Row, TraceMatrix, alternation_number, change_points, distinct_count, restrict_columns
from .witness import WitnessPattern, build_witness_family, verify_lower_bound
from .zoo import FamilySpec, expected_count, expected_rank, generate, parse_family

__version__ = "0.1.0"
