"""Run the command line interface with ``python -m drillsim``."""

import sys

from drillsim.cli import main

sys.exit(main())
