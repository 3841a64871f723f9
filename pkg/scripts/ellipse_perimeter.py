#!/usr/bin/env python3
"""Print the perimeter of an ellipse by adaptive quadrature.

Usage:
    python scripts/ellipse_perimeter.py [A B]

Defaults to semi-axes 2 and 1, the reference value used by the gamma sweep.
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from minkowski_lab.experiments.gamma import ELLIPSE_2_1_PERIMETER, ellipse_perimeter


def main() -> int:
    """Compute and print the perimeter."""
    if len(sys.argv) not in (1, 3):
        print(__doc__)
        return 2
    a, b = (float(v) for v in sys.argv[1:]) if len(sys.argv) == 3 else (2.0, 1.0)
    value = ellipse_perimeter(a, b)
    print(f"perimeter({a:g}, {b:g}) = {value:.15f}")
    if (a, b) == (2.0, 1.0):
        print(f"stored constant        = {ELLIPSE_2_1_PERIMETER:.15f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
