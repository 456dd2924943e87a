import sys
from torsionnodes.api.cli import main

sys.exit(main())
