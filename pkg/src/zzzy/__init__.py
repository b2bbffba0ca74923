"""ZZZY, surface and XZZX codes on planar lattices with matching decoders."""

__version__ = "0.1.0"

from .analysis import (
    FractionTable,
    WeightEnumerator,
    beta,
    enumerate_fractions,
    lemma1_count,
    lemma1_fraction,
    logical_census,
    pl_approx,
    weight_enumerator,
)
from .channel import ChannelModel, depolarizing, make_channel, phase_flip, sample_error
from .codes import FAMILIES, StabilizerCode, build_code, build_surface, build_xzzx, build_zzzy, build_zzzy_dual, validate
from .decoder import (
    DecodeResult,
    MatchingDecoder,
    Outcome,
    decode,
    decode_error,
    residual_class,
    surface_decode,
    update_weights,
    xzzx_decode,
    zzzy_decode,
)
from .matching import MatchingProblem, mwpm, shortest_paths
from .montecarlo import SimResult, TrialConfig, run, sweep
from .pauli import PauliOperator, commutes, compose, pauli_class, syndrome

__all__ = [
    "ChannelModel",
    "DecodeResult",
    "FAMILIES",
    "FractionTable",
    "MatchingDecoder",
    "MatchingProblem",
    "Outcome",
    "PauliOperator",
    "SimResult",
    "StabilizerCode",
    "TrialConfig",
    "WeightEnumerator",
    "beta",
    "build_code",
    "build_surface",
    "build_xzzx",
    "build_zzzy",
    "build_zzzy_dual",
    "commutes",
    "compose",
    "decode",
    "decode_error",
    "depolarizing",
    "enumerate_fractions",
    "lemma1_count",
    "lemma1_fraction",
    "logical_census",
    "make_channel",
    "mwpm",
    "pauli_class",
    "phase_flip",
    "pl_approx",
    "residual_class",
    "run",
    "sample_error",
    "shortest_paths",
    "surface_decode",
    "sweep",
    "syndrome",
    "update_weights",
    "validate",
    "weight_enumerator",
    "xzzx_decode",
    "zzzy_decode",
]
