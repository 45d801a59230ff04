"""Green's functions of balls and boxes, the iterated Green's function for
G(x0, .)^p sources, their Robin-type diagonals and the boundary identities
linking them.
"""
from py_lane_emden.green.ball import *
from py_lane_emden.green.box import *
from py_lane_emden.green.bundle import *
from py_lane_emden.green.domains import *
from py_lane_emden.green.identities import *
from py_lane_emden.green.iterated import *
from py_lane_emden.green.kernels import *
