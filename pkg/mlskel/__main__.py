import sys

from mlskel.cli import main

sys.exit(main())
