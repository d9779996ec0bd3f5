"""Secure sketches and fuzzy extractors over Hamming, set-difference,
and edit metrics, with a shared wire format and a universal-hash key
extraction layer."""

from .codec import BchCode, DecodeFailure
from .edit import (
    EditSketch,
    RecoveryInfo,
    ShingleSet,
    approx_edit_entropy_loss,
    edit_entropy_loss,
    edit_gen,
    edit_rec,
    edit_rep,
    edit_ss,
    optimal_shingle_len,
    recovery_info,
    shingle,
    unshingle,
)
from .entropy import (
    ExtractedKey,
    FiniteDistribution,
    JointDistribution,
    MalformedPayload,
    UHashParams,
    avg_min_entropy,
    compose_gen,
    compose_rep,
    extractor_distance,
    max_extractable_bits,
    min_entropy,
    parse_helper,
    statistical_distance,
    uhash,
)
from .envelope import (
    Envelope,
    MalformedEnvelope,
    ReconcileReport,
    deserialize,
    reconcile_respond,
    serialize_edit,
    serialize_hamming_offset,
    serialize_hamming_perm,
    serialize_hamming_syn,
    serialize_ijs,
    serialize_origjs,
    serialize_pinsketch,
)
from .gf2m import GF2m, irreducible_modulus
from .hamming import (
    CodeOffsetSketch,
    HammingParams,
    PermutedSketch,
    SyndromeSketch,
    bch_params,
    hamming_entropy_loss,
    rec_code_offset,
    rec_permuted,
    rec_syndrome,
    ss_code_offset,
    ss_permuted,
    ss_syndrome,
)
from .setdiff import (
    ElementSet,
    IjsSketchData,
    OrigJsSketchData,
    PinSketchData,
    ijs_rec,
    ijs_ss,
    origjs_rec,
    origjs_ss,
    pinsketch_rec,
    pinsketch_ss,
    setdiff_entropy_loss,
)

__version__ = "0.1.0"

__all__ = [
    "BchCode",
    "CodeOffsetSketch",
    "DecodeFailure",
    "EditSketch",
    "ElementSet",
    "Envelope",
    "ExtractedKey",
    "FiniteDistribution",
    "GF2m",
    "HammingParams",
    "IjsSketchData",
    "JointDistribution",
    "MalformedEnvelope",
    "MalformedPayload",
    "OrigJsSketchData",
    "PermutedSketch",
    "PinSketchData",
    "ReconcileReport",
    "RecoveryInfo",
    "ShingleSet",
    "SyndromeSketch",
    "UHashParams",
    "approx_edit_entropy_loss",
    "avg_min_entropy",
    "bch_params",
    "compose_gen",
    "compose_rep",
    "deserialize",
    "edit_entropy_loss",
    "edit_gen",
    "edit_rec",
    "edit_rep",
    "edit_ss",
    "extractor_distance",
    "hamming_entropy_loss",
    "ijs_rec",
    "ijs_ss",
    "irreducible_modulus",
    "max_extractable_bits",
    "min_entropy",
    "optimal_shingle_len",
    "origjs_rec",
    "origjs_ss",
    "parse_helper",
    "pinsketch_rec",
    "pinsketch_ss",
    "rec_code_offset",
    "rec_permuted",
    "rec_syndrome",
    "reconcile_respond",
    "recovery_info",
    "serialize_edit",
    "serialize_hamming_offset",
    "serialize_hamming_perm",
    "serialize_hamming_syn",
    "serialize_ijs",
    "serialize_origjs",
    "serialize_pinsketch",
    "setdiff_entropy_loss",
    "shingle",
    "ss_code_offset",
    "ss_permuted",
    "ss_syndrome",
    "statistical_distance",
    "uhash",
    "unshingle",
]
