"""Exact X-torsion orders and Bar-Natan page counts of knots over Q and F_p."""

from .complex import BN, LEE, FrobeniusSystem, GradedComplex, build_complex, check_frobenius, resolve
from .diagram import UNKNOT, Diagram, KnotTableEntry, load_table, parse_pd, torus_knot
from .oracle import (
    UnsupportedFieldError,
    bn_profile,
    lee_profile,
    verify_phi,
    verify_theorem,
    xo_via_lee,
)
from .reduce import gauss_eliminate
from .ring import QQ, Field, parse_field
from .scan import scan_build
from .torsion import (
    TorsionProfile,
    graded_euler,
    khovanov_betti,
    page_betti,
    page_count,
    smith_decompose,
    torsion_order,
)

__version__ = "0.1.0"
