"""Central configuration for the classification pipeline.

All numeric defaults used by the sieve, the classifiers, the evaluation
protocol and the file formats live here, so that:
- library defaults
- CLI flag defaults
- the decision record written into every report

never drift apart.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple


# =============================================================================
# Master Configuration
# =============================================================================

# Repetitions of every sieve-bearing configuration
DEFAULT_REPETITIONS: int = 50

# Feature dimension used for full-scale subject data
STARPLUS_SIEVE_N: int = 14000

# NB variance floor: eps = scale * max(largest training feature variance, 1)
VARIANCE_FLOOR_SCALE: float = 1e-9

# Box bound standing in for the unbounded hard-margin dual
SVM_C_CAP: float = 1e8
SVM_KKT_TOL: float = 1e-3
# Pair updates allowed = max_passes * n_train
SVM_MAX_PASSES: int = 200

# Spectral coordinates below rel * ||g|| are counted as numerically meaningless
NEAR_ZERO_REL: float = 1e-12

# Significant digits for CSV floats (lossless for float64)
CSV_SIGNIFICANT_DIGITS: int = 17

# Synthetic generator
SYNTH_N_FEATURES: int = 1024
SYNTH_SAMPLES_PER_CLASS: int = 40
SYNTH_HARMONICS: Tuple[int, ...] = (3, 7, 12)
SYNTH_GAIN_RANGE: Tuple[float, float] = (0.5, 2.0)
SYNTH_NOISE_SIGMA: float = 0.1
# Half of each class is sign-flipped; every sample is scaled by 10**U(-d/2, d/2).
# Both leave the harmonic phases intact up to pi and break intensity models.
SYNTH_SIGN_FLIP: bool = True
SYNTH_SCALE_DECADES: float = 5.0
SYNTH_SEED: int = 0


@dataclass(frozen=True)
class CogPhaseConfig:
    """Pipeline defaults with derived values.

    Values that depend on the data (sieve m, CSV format) are derived
    from the base constants below.
    """

    repetitions: int = DEFAULT_REPETITIONS
    starplus_sieve_n: int = STARPLUS_SIEVE_N
    variance_floor_scale: float = VARIANCE_FLOOR_SCALE
    svm_c_cap: float = SVM_C_CAP
    svm_kkt_tol: float = SVM_KKT_TOL
    svm_max_passes: int = SVM_MAX_PASSES
    near_zero_rel: float = NEAR_ZERO_REL
    csv_significant_digits: int = CSV_SIGNIFICANT_DIGITS
    synth_harmonics: Tuple[int, ...] = field(default=SYNTH_HARMONICS)

    def default_sieve_m(self, n_total: int) -> int:
        """Number of sieved positions when m is not given: floor(N / 2)."""
        return n_total // 2

    @property
    def csv_float_format(self) -> str:
        """printf-style format for one CSV feature value."""
        return f"%.{self.csv_significant_digits}g"

    def __repr__(self) -> str:
        return (
            f"CogPhaseConfig(\n"
            f"  repetitions={self.repetitions}\n"
            f"  starplus_sieve_n={self.starplus_sieve_n}\n"
            f"  variance_floor_scale={self.variance_floor_scale}\n"
            f"  svm_c_cap={self.svm_c_cap:g}, svm_kkt_tol={self.svm_kkt_tol:g}, "
            f"svm_max_passes={self.svm_max_passes}\n"
            f"  near_zero_rel={self.near_zero_rel:g}\n"
            f"  csv_float_format={self.csv_float_format}\n"
            f")"
        )


# Global default configuration instance
DEFAULT_CONFIG = CogPhaseConfig()


def get_config(
    repetitions: Optional[int] = None,
    svm_c_cap: Optional[float] = None,
) -> CogPhaseConfig:
    """Get configuration, optionally overriding the most commonly tuned values.

    Args:
        repetitions: Override the number of repetitions
        svm_c_cap: Override the SVM box bound

    Returns:
        CogPhaseConfig with all derived parameters
    """
    if repetitions is None and svm_c_cap is None:
        return DEFAULT_CONFIG
    return CogPhaseConfig(
        repetitions=DEFAULT_CONFIG.repetitions if repetitions is None else repetitions,
        svm_c_cap=DEFAULT_CONFIG.svm_c_cap if svm_c_cap is None else svm_c_cap,
    )
