"""Hankel transforms and the Kirillov model of the SL(2,R) discrete series.

The main entry points are re-exported here; see the submodules for the rest.
"""
__version__ = "0.1.0"

from .errors import (DomainError, FitError, HankelError, PoleError, QuadratureError,
                     SingularPointError, SpecSemanticError, SpecSyntaxError,
                     UnsupportedAtomError)
from .special_functions import ComplexOrder, bessel_j, bessel_k, gamma, laguerre
from .function_model import Atom, Profile, SampledFunction, Side, evaluate, euler_derivative, \
    format_spec, make_grid, parse_spec, sample
from .hankel import hankel_closed_form, hankel_profile, hankel_transform, inner_product
from .intertwiners import (InducedFunction, asymptotic_check, induced_from_phi, induced_norm,
                           l_functional, m_transform, t_image, t_transform, weyl_op)
from .representation import (GL2Element, GroupElement, IwasawaForm, LieElement, act_induced,
                             act_kirillov, act_lie, bruhat, gl2_act, iwasawa, j_kernel)
from .kfinite_basis import BasisVector, basis_vector, expand, gram_matrix
