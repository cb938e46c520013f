"""Exact polyhedral bounds for nef cones of toric varieties of fans."""

from .cone import PolyCone, compare, h_to_v, intersect, positive_hull, v_to_h
from .divclass import ClassSpace, class_space
from .fan import Fan, FanError, build_fan
from .nefbounds import containment_report, f_cone, g_cone, gcirc_cone, l_cone

__version__ = "0.1.0"
