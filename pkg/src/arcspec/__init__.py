"""
Exact arc algebras, platform subquotients, tangle bimodules, and annular
comparison maps over the integers.
"""

from .planarcurves import (
    CircleDecomposition,
    CrossinglessMatching,
    FlatTangle,
    PlatformSpec,
    classify_circles,
    enumerate_matchings,
    enumerate_platform_matchings,
    glue,
    iota,
)
from .frobenius import ONE, X, Labeling, SurgeryScript, SurgeryStep, apply_script, merge, split
from .arcalg import ArcAlgebra, build_arc_algebra
from .platformalg import PlatformAlgebra, build_platform_algebra, ideal_basis, iota_functor
from .homalg import (
    FreeChainComplex,
    Generator,
    HomologyTable,
    hochschild_complex,
    smith_normal_form,
    tensor_over_category,
)
from .tanglecx import (
    BimoduleComplex,
    TangleDiagram,
    add_horizontal_strands,
    build_bimodule_complex,
    gluing_map_psi,
    orient_and_sign,
    parse_diagram,
    resolve,
)
from .burnside import (
    Correspondence,
    GradedSet,
    check_absorbing,
    check_insular,
    compose,
    elementary_correspondence,
    forget,
    quotient_functor,
)
from .annular import (
    AnnularDiagram,
    akh_complex,
    annular_closure,
    bpw_comparison,
    filtration_check,
    map_A,
    map_B_and_C,
    xi,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
