"""Optional plotting helper shared by the demos."""

import os

OUT = os.environ.get("STRIPWAVES_DEMO_OUT", "demo_output")


def figure():
    """Return (plt, path_fn) or (None, path_fn) when matplotlib is missing."""
    os.makedirs(OUT, exist_ok=True)
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        plt = None
    return plt, lambda name: os.path.join(OUT, name)
