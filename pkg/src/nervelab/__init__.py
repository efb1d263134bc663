"""Mapper, multiscale mapper and Reeb graph constructions on finite simplicial
complexes, with executable checks of their homological and metric guarantees."""

from .complex import (Chain, HomologyBasis, SimplicialComplex, VertexMap, are_contiguous, betti,
                      boundary_matrix, build_complex, homologous, homology_basis, induced_chain_map,
                      is_simplicial_map)
from .covers import (Cover, CoverMap, FiniteMetric, RealInterval, TowerOfCovers, all_balls_cover,
                     cover_map, delta_net_cover, good_tower, lebesgue_number, s_max, validate_cs_good)
from .generators import class_size, classify_survival, minimal_generator_basis
from .metrics import (PseudoMetric, build_correspondence, correspondence_distortion,
                      cycle_support_metric_size, d_delta_metric, df_metric)
from .persistence import (PersistenceDiagram, approx_diagram_from_basis, bottleneck_distance,
                          cech_filtration, log_scale, persistence_diagram, tower_diagram, tower_module)
from .pullback import (DomainFunction, mapper, multiscale_mapper, nerve, pull_cycle, pullback_cover,
                       push_cycle, vertex_projection)
from .reeb import reeb_graph, reeb_h1_check, reeb_metric

__version__ = "0.1.0"
