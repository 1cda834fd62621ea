"""Module entry point so `python -m spinshift` works."""

import sys

from .cli import main

sys.exit(main())
