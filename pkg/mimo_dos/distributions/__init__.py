# mimo_dos/distributions/__init__.py
from .base import (
    InvariantReport,
    QuadratureSpec,
    RateDistribution,
    convolve_sum,
    refined_sum,
    tail_prob,
    truncated_mean,
)
from .csit import cdf_sl_csit, cdf_tl_csit_link, cdf_tl_csit_sum, joint_eig_pdf
from .csir import cdf_sl_csir, cdf_tl_csir_link, cdf_tl_csir_sum

__all__ = [
    'InvariantReport',
    'QuadratureSpec',
    'RateDistribution',
    'convolve_sum',
    'refined_sum',
    'tail_prob',
    'truncated_mean',
    'joint_eig_pdf',
    'cdf_sl_csit',
    'cdf_tl_csit_link',
    'cdf_tl_csit_sum',
    'cdf_sl_csir',
    'cdf_tl_csir_link',
    'cdf_tl_csir_sum',
]
