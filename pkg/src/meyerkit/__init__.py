"""Point-set geometry toolkit.

Lattices, cut-and-project sets, difference frequencies, counting
inequalities for symmetric convex bodies, simultaneous-approximation
witnesses, and rounded linear maps on the integer grid.
"""

from .convex import (
    Ball,
    ConvexBody,
    SlabIntersection,
    SymmetricPolygon,
    integer_points_in,
    monte_carlo_volume,
    parse_body,
    unit_ball_volume,
)
from .pointset import (
    DeloneParams,
    DensityEstimate,
    PointSample,
    delone_parameters,
    density_at,
    difference_set,
    meyer_check,
    patch_defect,
    read_point_file,
    upper_density,
    write_point_file,
)
from .modelset import (
    Box,
    CutAndProjectScheme,
    e_alpha_epsilon,
    e_alpha_scheme,
    expected_density,
    generate,
    jittered_lattice_sample,
    lattice_sample,
)
from .frequency import (
    FrequencyTable,
    MeanFrequencyResult,
    difference_frequency,
    frequency_table,
    lattice_frequency_table,
    mean_frequency,
    read_table_file,
    write_table_file,
)
from .minkowski import (
    ClassicalReport,
    MinkowskiReport,
    classical_bound_check,
    equality_instance,
    equality_report,
    lattice_points_in,
    verify_inequality,
    verify_integer_inequality,
)
from .dirichlet import (
    ApproximationQuery,
    SlopeWitness,
    WitnessNotFound,
    find_witness,
    guaranteed_mass,
    slab_body,
)
from .discretize import (
    DiscretizedSequence,
    InjectivityTrace,
    LinearMapSpec,
    degrade_image,
    discretized_image,
    grid_ball,
    project,
    random_rotation_sequence,
    rate_of_injectivity,
    rotation,
    seed_difference,
)
from .pgm import read_pgm, write_pgm

__version__ = "0.1.0"

__all__ = [
    "Ball", "ConvexBody", "SlabIntersection", "SymmetricPolygon",
    "integer_points_in", "monte_carlo_volume", "parse_body",
    "unit_ball_volume",
    "DeloneParams", "DensityEstimate", "PointSample", "delone_parameters",
    "density_at", "difference_set", "meyer_check", "patch_defect",
    "read_point_file", "upper_density", "write_point_file",
    "Box", "CutAndProjectScheme", "e_alpha_epsilon", "e_alpha_scheme",
    "expected_density", "generate", "jittered_lattice_sample",
    "lattice_sample",
    "FrequencyTable", "MeanFrequencyResult", "difference_frequency", "frequency_table",
    "lattice_frequency_table", "mean_frequency", "read_table_file",
    "write_table_file",
    "ClassicalReport", "MinkowskiReport", "classical_bound_check",
    "equality_instance", "equality_report", "lattice_points_in",
    "verify_inequality", "verify_integer_inequality",
    "ApproximationQuery", "SlopeWitness", "WitnessNotFound", "find_witness",
    "guaranteed_mass", "slab_body",
    "DiscretizedSequence", "InjectivityTrace", "LinearMapSpec",
    "degrade_image", "discretized_image", "grid_ball", "project",
    "random_rotation_sequence", "rate_of_injectivity", "rotation",
    "seed_difference",
    "read_pgm", "write_pgm",
]
