# mimo_dos/channel/__init__.py
from .model import (
    ChannelRealization,
    LinkSnrConfig,
    RateKind,
    RateSample,
    eigenvalues_2x2,
    gain_mrc,
    mrc_gains,
    oc_sinrs,
    rate_sl_csir,
    rate_sl_csit,
    rate_tl_csir,
    rate_tl_csit,
    sample_channel,
    sample_channels,
    sample_vectors,
    sinr_oc,
    sl_csit_rates,
    tl_csit_rates,
)
from .paper_forms import sl_csir_rates_paper, tl_csir_rates_paper, tl_csir_sinrs_paper

__all__ = [
    'ChannelRealization',
    'LinkSnrConfig',
    'RateKind',
    'RateSample',
    'eigenvalues_2x2',
    'gain_mrc',
    'mrc_gains',
    'oc_sinrs',
    'rate_sl_csir',
    'rate_sl_csit',
    'rate_tl_csir',
    'rate_tl_csit',
    'sample_channel',
    'sample_channels',
    'sample_vectors',
    'sinr_oc',
    'sl_csit_rates',
    'tl_csit_rates',
    'sl_csir_rates_paper',
    'tl_csir_rates_paper',
    'tl_csir_sinrs_paper',
]
