"""Last passage percolation with exponential weights, beta-Laguerre edge
statistics, and importance-sampled lower-tail estimates tying the two together.
"""

from .errors import NumericFailure, UsageError
from .experiments import (
    DyadicScan,
    ExponentFit,
    KsReport,
    LilTrace,
    dyadic_scan,
    fit_laguerre_lower_tail,
    fit_point_to_line_tail,
    run_lil,
    verify_loe_identity,
    verify_lue_identity,
)
from .laguerre import (
    BidiagonalModel,
    EntryChain,
    LaguerreParams,
    gershgorin_bound,
    interleave,
    lambda_max_batch,
    ld_lower_bound_product,
    linearize,
    sample_bidiagonal,
    sample_lambda_max,
)
from .lpp import (
    LatticePoint,
    PassageRecord,
    line_to_point,
    passage_point,
    passage_sequence,
    point_to_line,
    point_to_line_excluded,
)
from .quadform import QbSpec, build_Q_matrix, build_Qb_matrix, check_domination
from .randkit import ChiLaw, RngStream, WeightField, ks_two_sample, regularized_lower_gamma
from .tilt import TailEstimate, TiltConfig, choose_K, tail_probability, theoretical_lower_bound
from .tridiag import TridiagonalSym, dense_spectrum, gershgorin_radius, largest_eigenvalue, sturm_count

__version__ = "0.1.0"
