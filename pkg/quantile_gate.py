"""
QuantileGate: Minimal Control Energy for Probability Targets
------------------------------------------------------------

Main entry point. Run ``python quantile_gate.py --help`` for subcommands.
"""

import sys

from src.cli import main


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n[!] Aborted by user.")
        sys.exit(1)
