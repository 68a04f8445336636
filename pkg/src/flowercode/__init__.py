"""Flower codes: fractional repetition codes built from sequences, plus a DRESS storage simulator."""

__version__ = "0.1.0"

from flowercode.core import FRCode, Profiles, build_code, incidence_matrix, profiles, validate
from flowercode.dress import DressSystem, build_system
from flowercode.flower import Jump, JumpFunctions, SubsetJumpPlan, multi_ring, multi_ring_node_seq, single_ring
from flowercode.gf256 import FileBlob, MDSCode, mds_decode, mds_encode
from flowercode.kernels import BACKEND
from flowercode.repair import (analyze, minimal_helper_sets, repair_degree_set, sdr_repair_degree,
                               system_repair_degree, unrepairable_packets)
from flowercode.sequences import (ChiSequence, DroppingSequence, NodeSequence, canonicalize_dropping, chi_profiles,
                                  decode_chi, decode_dropping, decode_node, dropping_to_node,
                                  incidence_from_dropping, node_to_dropping)

__all__ = [
    "BACKEND", "ChiSequence", "DressSystem", "DroppingSequence", "FRCode", "FileBlob", "Jump", "JumpFunctions",
    "MDSCode", "NodeSequence", "Profiles", "SubsetJumpPlan", "analyze", "build_code", "build_system",
    "canonicalize_dropping", "chi_profiles", "decode_chi", "decode_dropping", "decode_node", "dropping_to_node",
    "incidence_from_dropping", "incidence_matrix", "mds_decode", "mds_encode", "minimal_helper_sets",
    "multi_ring", "multi_ring_node_seq", "node_to_dropping", "profiles", "repair_degree_set",
    "sdr_repair_degree", "single_ring", "system_repair_degree", "unrepairable_packets", "validate",
]
