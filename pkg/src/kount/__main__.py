import sys

from kount.cli import main

sys.exit(main())
