"""Pointed coalgebras inside path coalgebras.

Quivers and paths, monomial subcoalgebras (finite or automaton-presented),
exact wedge products, Gabriel quivers, localization and a three-valued
classifier for semiprime, prime, hereditary, serial and string coalgebras.
"""

from .quiver import (Arrow, Path, Quiver, QuiverError, ShapeClass, compose, count_paths,
                     factorizations, find_all_forbidden, find_embedding, find_forbidden,
                     is_strongly_connected, paths_up_to, scc, serial_shape, shape_class,
                     to_dot, validate, weak_components)
from .monomial import (MonomialCoalgebra, MonomialError, PathAutomaton, StringViolation,
                       admissible_core, avoid_factor, enumerate_paths, extension_report,
                       is_admissible, is_full, restrict_to_vertices, string_check,
                       validate_monomial, wedge_monomial)
from .linear import (LinearError, Subspace, TruncatedCoalgebra, coassoc_check,
                     is_cosemisimple, is_subcoalgebra, socle, truncate)
from .wedge import (Coidempotence, XCheck, comodule_wedge, coradical_filtration,
                    is_coidempotent, wedge_linear, wedge_power, wedge_xcheck)
from .gabriel import (ConsistencyError, LocalizationSpec, ValuedQuiver, cells,
                      cell_factorization, cells_unbounded, gabriel_by_arrows, gabriel_by_wedges, gabriel_quiver, to_localized,
                      localize_monomial, localize_quiver, predecessor_degree, wedge_gabriel)
from .classify import (ClassificationReport, Obstruction, Verdict, analyze, hereditary,
                       hereditary_closure, prime, semiprime, serial, string, wild_obstructions)

__version__ = "0.1.0"
