#!/usr/bin/env python3
"""
Runner for dskp-lab

    python dskp_lab.py run scenarios/pnet_m3_sing.json
    python dskp_lab.py selftest
"""

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent / 'src'))

from cli import main

if __name__ == "__main__":
    sys.exit(main())
