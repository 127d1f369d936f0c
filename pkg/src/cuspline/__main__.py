"""Allow ``python -m cuspline``."""
import sys

from .cli import main

sys.exit(main())
