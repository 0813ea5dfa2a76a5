"""The entry point of the process."""

import sys

from nilkahler import framework

sys.exit(framework.main())
