"""Geometric verification of lock programs.

Builds the state space of a PV program as a grid box minus open forbidden
boxes, then answers reachability, dihomotopy, serializability and homology
questions about it exactly.
"""

from .dihomotopy import (
    Caps,
    DihomotopyClass,
    Verdict,
    dihomotopy_classes,
    elementary_swap,
    enumerate_schedules,
    is_serial,
    is_serializable,
    pi10_quotient_trivial,
    schedule_valid,
)
from .errors import CapExceeded, IndeterminateVerdict
from .execution import deadlocks, reachable_set, safe_set, unsafe_region
from .geometry import (
    OpenBox,
    StateSpace,
    build_state_space,
    edge_allowed,
    forbidden_rects,
    holding_intervals,
    in_xk,
    load_boxes,
    square_free,
)
from .homology import (
    alexander_check,
    boundary_matrix,
    build_complex,
    forbidden_components,
    relative_homology,
    sub_complex_x1,
)
from .monoid import MonoidTable, fundamental_monoid_check, group_completion, nerve_presentation
from .moore import MoorePath, compose, evaluate, identity_path, is_dipath, schedule_to_moore
from .pv import Program, PVError, generate_random_2pl, is_two_phase, parse_program, render_program
from .rewriting import Presentation, RewritingSystem, knuth_bendix, normal_forms
from .snf import smith_normal_form

__version__ = "0.1.0"
