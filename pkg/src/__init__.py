from ._signalcore import TimeSeries, IntermittencyScenario
from ._signalcore import make_intermittent_signal, make_amplitude_step_signal
from ._signalcore import np, torch, torch_device, float_dtype, grab

from ._generic import EntropicEMDError, ParameterError, StructuralError
from ._generic import InsufficientExtremaError, ResidueCondition
from ._generic import SeriesFormatError, SeriesIOError
from ._generic import StatisticalValidityWarning
from ._generic import Resampler, fmt_value_err, correlation

from .lib.spline import NaturalCubicSpline, BoundaryPolicy
from .lib.seriesio import load_series, write_series, write_decomposition
from .lib.seriesio import write_profile, write_segments, write_report

from .util.emd import SiftConfig, Decomposition, decompose, extract_imf
from .util.emd import find_extrema, spline_envelope, local_mean, sift_once
from .util.emd import is_imf, reconstruct, orthogonality_index
from .util.pentropy import PeConfig, OrdinalPattern, EntropyProfile
from .util.pentropy import ordinal_pattern, pattern_distribution
from .util.pentropy import permutation_entropy, entropy_profile
from .util.pentropy import gradient_transform, shannon_entropy
from .util.mixfix import DetectorConfig, Segment, RepairReport
from .util.mixfix import pe_maxima_envelope, envelope_mode, detect_segments
from .util.mixfix import local_decompose, select_removal, repair

from .models.cli import main as cli_main
from .models.canonical import main as canonical_demo
