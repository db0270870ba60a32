"""Kakeya lab is an exact computational laboratory for Kakeya and Nikodym
phenomena over finite fields and finite local rings. In particular:

1. maximal operators over lines, curves, varieties and k-planes of F_q^n,
   with the norms and ratios of the corresponding maximal inequalities

2. the polynomial method with multiplicities, producing re-verified
   vanishing-polynomial certificates and lower bounds for Kakeya sets

3. seeded, reproducible versions of the random translation and random
   projection reductions

Every randomized operation takes a seed, worker pools come from joblib
and all enumerations are bounded by configurable caps (see
:class:`lab_config`).
"""

# PEP0440 compatible formatted version, see:
# https://www.python.org/dev/peps/pep-0440/
#
# Generic release markers:
# X.Y
# X.Y.Z # For bugfix releases
#
# Admissible pre-release markers:
# X.YaN # Alpha release
# X.YbN # Beta release
# X.YrcN # Release Candidate
# X.Y # Final release
#
# Dev branch marker is: 'X.Y.dev' or 'X.Y.devN' where N is an integer.
# 'X.Y.dev0' is the canonical version of 'X.Y.dev'
#
__version__ = '0.1.0'


from ._config import get_config, lab_config
from .exceptions import KakeyaLabError, LabWarning
from .gf import FieldElement, FieldSpec, field_from_order, field_make
from .hashing import hash
from .logger import Logger, PrintTime
from .polynomials import MultivariatePolynomial
from .geometry import (Direction, KPlane, Line, ParametricCurve, Variety,
                       enum_directions, enum_kplanes)
from .maximal import (PointFunction, kakeya_maximal, curve_maximal,
                      variety_maximal, nikodym_maximal, kplane_maximal,
                      lp_norm, mixed_norm, ratio_report)
from .polymethod import (MultiplicityFunction, dvir_check,
                         find_vanishing_poly, kakeya_line_check,
                         kplane_bound)
from .amplify import amplify, random_flat_projection
from .rings import RingSpec, ring_kakeya_check


__all__ = ['get_config', 'lab_config', 'KakeyaLabError', 'LabWarning',
           'FieldElement', 'FieldSpec', 'field_from_order', 'field_make',
           'hash', 'Logger', 'PrintTime', 'MultivariatePolynomial',
           'Direction', 'KPlane', 'Line', 'ParametricCurve', 'Variety',
           'enum_directions', 'enum_kplanes', 'PointFunction',
           'kakeya_maximal', 'curve_maximal', 'variety_maximal',
           'nikodym_maximal', 'kplane_maximal', 'lp_norm', 'mixed_norm',
           'ratio_report', 'MultiplicityFunction', 'dvir_check',
           'find_vanishing_poly', 'kakeya_line_check', 'kplane_bound',
           'amplify', 'random_flat_projection', 'RingSpec',
           'ring_kakeya_check']
