"""Allow `python -m inspecsim`."""

import sys

from .cli import main

sys.exit(main())
