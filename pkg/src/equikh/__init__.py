"""U(1)xU(1)-equivariant Khovanov complexes and the s_t concordance profiles."""

from .algebra import F2, QQ, Field, Poly
from .complex import GradedChainComplex, build_cube, mirror_dual, reduced_subcomplex, scan_reduce
from .diagram import LinkDiagram, braid_closure, disjoint_union, load_diagram, mirror, parse_pd, unknot, unlink
from .invariant import gr_t_of_diagram, rasmussen_s_crosscheck, s_t, s_tilde_t, sweep
from .lee import localized_rank

__version__ = "0.1.0"

__all__ = [
    "F2", "QQ", "Field", "Poly", "GradedChainComplex", "build_cube", "mirror_dual",
    "reduced_subcomplex", "scan_reduce", "LinkDiagram", "braid_closure", "disjoint_union",
    "load_diagram", "mirror", "parse_pd", "unknot", "unlink", "gr_t_of_diagram",
    "rasmussen_s_crosscheck", "s_t", "s_tilde_t", "sweep", "localized_rank",
]
