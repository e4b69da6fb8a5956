import os

from qgr.quiver import quiver

SEED = int(os.environ.get("QGR_SEED", "20240601"))


def example8():
    """Loop at a, arrow a -> b, loop at b."""
    return quiver(["a", "b"], [("p", "a", "a"), ("f", "a", "b"), ("q", "b", "b")], "example8")


def cycle(n, prefix="c"):
    vs = [f"{prefix}{i}" for i in range(n)]
    return quiver(vs, [(f"{prefix}a{i}", vs[i], vs[(i + 1) % n]) for i in range(n)], f"cycle{n}")


def two_loops():
    return quiver(["a"], [("x", "a", "a"), ("y", "a", "a")], "two_loops")

# PASS/FAIL lines of the acceptance suite, echoed in the terminal summary.
ACCEPTANCE = []
