"""Optional plotting: figures are written next to the scripts when matplotlib is present."""
from pathlib import Path

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None


def save(fig, name):
    path = Path(__file__).with_name(name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"wrote {path}")
