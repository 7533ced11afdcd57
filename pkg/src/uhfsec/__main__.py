import sys

from uhfsec.cli import main

sys.exit(main())
