import sys

from cliffbell.cli import main

sys.exit(main())
