import sys

from py_lane_emden.cli import main

sys.exit(main())
