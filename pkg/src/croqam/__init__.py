"""Offset-QAM / conjugate-root multicarrier waveform simulation toolkit."""

from croqam.filters import (
    FilterGrid,
    IciResponse,
    PrototypeFilter,
    conjugate_root,
    ici_response,
    make_nyquist,
    make_rect_time,
    nyquist_residual,
    sqrt_nyquist,
)
from croqam.gfdm import (
    GfdmBlock,
    GfdmConfig,
    GfdmModem,
    add_cp,
    apply_guard_symbols,
    build_modem,
    detect,
    modulate,
    modulation_matrix,
    remove_cp,
)
from croqam.oqam import (
    OqamBurstConfig,
    oqam_demodulate,
    oqam_modulate,
    orthogonality_report,
)
from croqam.psd import (
    PsdEstimate,
    estimate_psd,
    gfdm_block_stream,
    oob_ratio,
)
from croqam.qam import Qam16Mapper
from croqam.ser import (
    SerCurve,
    config_ids,
    mc_standard_error,
    run_ser,
    semi_analytic_ser,
)

__version__ = "0.1.0"

__all__ = [
    "FilterGrid",
    "GfdmBlock",
    "GfdmConfig",
    "GfdmModem",
    "IciResponse",
    "OqamBurstConfig",
    "PrototypeFilter",
    "PsdEstimate",
    "Qam16Mapper",
    "SerCurve",
    "add_cp",
    "apply_guard_symbols",
    "build_modem",
    "config_ids",
    "conjugate_root",
    "detect",
    "estimate_psd",
    "gfdm_block_stream",
    "ici_response",
    "make_nyquist",
    "make_rect_time",
    "mc_standard_error",
    "modulate",
    "modulation_matrix",
    "nyquist_residual",
    "oob_ratio",
    "oqam_demodulate",
    "oqam_modulate",
    "orthogonality_report",
    "remove_cp",
    "run_ser",
    "semi_analytic_ser",
    "sqrt_nyquist",
]
