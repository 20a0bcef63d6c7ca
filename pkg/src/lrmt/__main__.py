import sys

from lrmt.cli import main

sys.exit(main())
