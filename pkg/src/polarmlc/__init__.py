"""Polar codes with fast SC-list decoding, a clock-cycle latency model of the
decoder, and multi-level polar coded M-ASK."""

from .construction import construct_code, ga_density_evolution, select_info_set
from .decoder import sc_decode, scl_decode
from .exceptions import NumericalRangeError
from .latency import (
    NodeKind, classify_node, tc_code, tc_node, tc_rate_sweep, tc_total, tc_upper_bound,
)
from .mlc import build_constellation, design_mlc, level_rates, mlc_tc, mlc_tc_sweep
from .polar import DecodeNode, PolarCode, encode, node_children, validate_code
from .simulate import ChannelConfig, run_mlc, run_single_code

__version__ = "0.1.0"

__all__ = [
    "ChannelConfig",
    "DecodeNode",
    "NodeKind",
    "NumericalRangeError",
    "PolarCode",
    "build_constellation",
    "classify_node",
    "construct_code",
    "design_mlc",
    "encode",
    "ga_density_evolution",
    "level_rates",
    "mlc_tc",
    "mlc_tc_sweep",
    "node_children",
    "run_mlc",
    "run_single_code",
    "sc_decode",
    "scl_decode",
    "select_info_set",
    "tc_code",
    "tc_total",
    "tc_upper_bound",
    "tc_node",
    "tc_rate_sweep",
    "validate_code",
]
