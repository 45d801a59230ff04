"""Numerical checks of the asymptotic statements: Pohozaev residuals, blow-up
rates, limit profiles and branch-wide bounds.
"""
from py_lane_emden.lab.branch import *
from py_lane_emden.lab.pohozaev import *
from py_lane_emden.lab.profiles import *
from py_lane_emden.lab.rates import *
from py_lane_emden.lab.reports import *
