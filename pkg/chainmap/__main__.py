import sys

from chainmap.main import main

sys.exit(main())
