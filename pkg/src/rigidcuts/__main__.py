import sys

from rigidcuts.cli import main

sys.exit(main())
