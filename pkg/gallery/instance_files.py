"""
Writing and reading instances
=============================

Instances are stored as a JSON manifest next to two Matrix Market files.
A round trip reproduces every float bit for bit, and solver traces are
written as CSV.
"""

import tempfile
from pathlib import Path

import numpy as np

from inexact_ipm import GenSpec, SolverConfig, generate, run
from inexact_ipm.io import load_instance, save_instance, save_trace

problem, start = generate(GenSpec(n=40, m=10, density=0.25, q_rank=5, seed=9))

with tempfile.TemporaryDirectory() as tmp:
    manifest = save_instance(problem, tmp, start=start, name="demo")
    print(sorted(p.name for p in Path(tmp).iterdir()))

    loaded, loaded_start = load_instance(manifest)
    same = np.array_equal(loaded.b, problem.b) and np.array_equal(loaded_start.x, start.x)
    print("bitwise identical vectors:", same)

    result = run(loaded, loaded_start, SolverConfig(epsilon=1e-4))
    trace = Path(tmp) / "trace.csv"
    save_trace(result, trace)
    print("".join(trace.read_text().splitlines(keepends=True)[:3]))
