import sys

from wavepack.runner.cli import main

sys.exit(main())
