"""Allow running as python -m minkowski_lab."""
import sys

from minkowski_lab.main import main

if __name__ == "__main__":
    sys.exit(main())
