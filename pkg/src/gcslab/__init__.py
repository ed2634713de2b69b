"""gcslab: nonlinear-evolution coherent states, their Wigner functions,
negativity, and displacement metrology, with sweep and export tooling."""

__version__ = "0.1.0"

from .errors import (ConfigError, ConvergenceError, DomainError,
                     NumericalConsistencyError, SeriesOverflowError,
                     TruncationWarning, UndefinedStatisticError)
from .fock import (FockState, GCSParams, auto_cutoff, coherent_state,
                   fidelity, fock_basis_state, g_k, ladder_expectations,
                   make_gcs, mandel_q, number_power, photon_moment,
                   quadrature_variance, truncation_deficit, yurke_stoler_cat)
from .laguerre import laguerre_assoc
from .ensembles import (Ensemble, WernerSpec, atomic_purity,
                        ensemble_photon_moment, evolve_werner, werner_weights)
from .wigner import (PhaseGrid, WignerField, default_grid, fock_negativity,
                     integrate_field, negativity, negativity_batch,
                     normalized_negativity, wigner_field, wigner_point_closed,
                     wigner_point_pure)
from .metrology import (QfiReport, cramer_rao, moment_form_discrepancy,
                        normalized_qfi, qfi_direction, qfi_max,
                        squeezing_equivalent_db, variance_moment_form, z_moment)
from .scan import (ScanResult, ScanSpec, WernerScanSpec, auto_tau_range,
                   export_wigner_frames, parse_config, read_rows,
                   scan_evolution, scan_max_over_tau, scan_werner,
                   spec_from_dict, spec_to_dict, write_result)
