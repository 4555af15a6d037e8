import sys

from graphrl.cli.main import main

sys.exit(main())
