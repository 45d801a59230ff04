"""Positive solutions of the Dirichlet system on balls and boxes and their
continuation in eps.
"""
from py_lane_emden.bvp.box import *
from py_lane_emden.bvp.continuation import *
from py_lane_emden.bvp.newton import *
from py_lane_emden.bvp.radial import *
from py_lane_emden.bvp.rescale import *
from py_lane_emden.bvp.solution import *
