import sys

from pyEntangle.cli import main

sys.exit(main())
