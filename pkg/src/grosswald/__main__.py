import sys

from grosswald.cli import main

sys.exit(main())
