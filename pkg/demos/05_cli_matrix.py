"""Driving the command line from Python
====================================

Equivalent shell command:

    dare-sim --scenario 1 2 3 4 5 --protocol dare baseline-direct --rounds 1000 --out demo_results
"""
import tempfile
from pathlib import Path

from dare.cli import main

out = Path(tempfile.mkdtemp()) / "demo_results"
status = main(["--scenario", "1", "2", "3", "4", "5", "--protocol", "dare", "baseline-direct",
               "--rounds", "1000", "--out", str(out)])
print("exit status", status)
for f in sorted(out.iterdir())[:4]:
    print(f.name)
print((out / "s5_dare_seed42_summary.csv").read_text())
