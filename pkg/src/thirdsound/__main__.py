import sys

from thirdsound.cli import main

sys.exit(main())
