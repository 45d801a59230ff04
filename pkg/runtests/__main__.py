import importlib
import logging
import sys
import time

CHECKS = [
    "check_hyperbola",
    "check_quadrature",
    "check_ground_state",
    "check_green",
    "check_bvp",
    "check_lab",
    "check_cli",
]

logging.basicConfig(level=logging.WARNING)

selected = sys.argv[1:] or CHECKS
for name in selected:
    started = time.time()
    importlib.import_module("runtests." + name)
    print("{:<20} ok ({:.1f}s)".format(name, time.time() - started))
