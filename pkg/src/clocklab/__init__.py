"""Simulation and verification lab for order-disorder interfaces of the 3D Z_q clock model."""

from .lattice import (LatticeSpec, SpinConfig, BondField, SpecError, boundary_values,
                      build_boundary, circular_distance, classify_bonds, load_snapshot,
                      local_energy_delta, make_config, save_snapshot, total_energy)
from .sampler import (ChainParams, ChainReport, EnumerationError, ParamError,
                      exact_distribution, metropolis_sweep, ordered_fraction, run_chain)
from .interface import (ExtractionError, FrustrationComponent, HeightField, InterfaceData,
                        ceilings_walls_heights, cube_order_counts, cube_set,
                        decompose_components, extract_interface, frustrated_cubes,
                        is_winding, weight)
from .defects import (Blob, DefectRecord, GluingError, GrammarError, Pairing,
                      all_column_defects, assign_to_columns, blobs_and_signs,
                      classify_defect, dominant_value, extract_and_extend_defects,
                      glue_inverse, glue_pair, pair_defects)
from .reflect import (ColumnPattern, DefectStats, PatternError, ReflectedPattern,
                      check_glued_pair, check_identity, check_inequalities,
                      classify_pattern, defect_stats, enumerate_patterns,
                      pattern_feasible, reflect_pattern)
from .bounds import (BoundError, BoundParams, a_of_q, chessboard_aggregate,
                     evaluate_bounds, glued_a_of_q, glued_threshold_q,
                     orbit_mixture, peierls_bound, toy_identity_check)

__version__ = "0.1.0"
