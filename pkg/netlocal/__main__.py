# pylint: disable = missing-module-docstring
import sys

from netlocal.cli import main

sys.exit(main())
