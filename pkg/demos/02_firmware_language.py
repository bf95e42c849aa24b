"""Firmware: parse, evaluate and evolve candidate-generation expressions.

    python demos/02_firmware_language.py
"""
import numpy as np

from dso.engine import SEED_TEMPLATES
from dso.firmware import (
    EvalContext,
    Firmware,
    depth,
    mutate_firmware,
    random_firmware,
    recombine_firmware,
)

rng = np.random.default_rng(3)

# The four starting firmwares, in canonical (fully parenthesized) form
for src in SEED_TEMPLATES:
    fw = Firmware.from_source(src)
    print(f"{src:40s} -> {fw.source}  depth={depth(fw.tree)}")

# Evaluate a DE-style move in a 2-D context
ctx = EvalContext(
    x=np.array([0.0, 0.0]),
    tb=np.array([1.0, 1.0]),
    gb=np.array([2.0, 2.0]),
    r1=np.array([0.5, 0.0]),
    r2=np.array([0.0, 0.5]),
    rng=rng,
)
print("tb + C1*(r1 - r2) ->", Firmware.from_source(SEED_TEMPLATES[0])(ctx))

# Protected division keeps evaluation total
print("x / (x - x) ->", Firmware.from_source("x / (x - x)")(ctx))

# What the command center does to a firmware
parent_a = Firmware.from_source(SEED_TEMPLATES[1]).tree
parent_b = Firmware.from_source(SEED_TEMPLATES[2]).tree
print("mutation:  ", Firmware(mutate_firmware(parent_a, rng)).source)
print("crossover: ", Firmware(recombine_firmware(parent_a, parent_b, rng)).source)
print("random:    ", Firmware(random_firmware(rng, 4)).source)
