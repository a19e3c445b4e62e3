import sys

from estermann.cli import main

sys.exit(main())
