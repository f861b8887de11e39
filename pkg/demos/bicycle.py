"""Monomial coalgebras on the two-loop quiver.

Runs the full analysis on the bicycle workspaces and on the mixed instance
containing a*a and b*a, printing the verdict table and any obstructions.

    python3 demos/bicycle.py
"""

from pathlib import Path

from pathcoalg import analyze
from pathcoalg.cli import format_report, parse

HERE = Path(__file__).parent / "workspaces"

for name in ("bicycle_a", "bicycle_b", "square_and_mixed"):
    ws = parse((HERE / f"{name}.json").read_text())
    print(f"== {name}")
    print(format_report(analyze(ws.main, 6), ws.quiver))
    print()
