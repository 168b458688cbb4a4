#!/usr/bin/env python
"""
Scan the four partition congruences far past the registry window.

Tabulates p(n) and a(n) once at the largest index needed, checks
p(5n+4) = 0 (mod 5), p(7n+5) = 0 (mod 7), a(3n+2) = 0 (mod 3) and a(9n+8) = 0 (mod 27)
for n <= max_n, and writes every checked value with its residue.
"""

# %%
import argparse
import os
import sys

import pandas as pd
from loguru import logger
from tqdm import tqdm

from cubic_scan.partitions import PartitionKind, congruence_violations, partition_table

# %%
# configure the script

max_n = 2000
out_dir = "congruence output"

# (kind, m, r, modulus) of each family
families = [
    (PartitionKind.ORDINARY, 5, 4, 5),
    (PartitionKind.ORDINARY, 7, 5, 7),
    (PartitionKind.CUBIC, 3, 2, 3),
    (PartitionKind.CUBIC, 9, 8, 27),
]

# %%
# parse script arguments from command line

parser = argparse.ArgumentParser(description="Scan partition congruences and save the residues.")
parser.add_argument("--f", help="ignore; used by ipykernel_launcher")
parser.add_argument("--max_n", type=int, default=max_n, help="Largest n to check in every family.")
parser.add_argument("--output", type=str, default=out_dir, help="Path to the output directory.")
args = parser.parse_args()
max_n, out_dir = args.max_n, args.output

os.makedirs(out_dir, exist_ok=True)

# %%
# tabulate p(n) and a(n) once, at the largest index any family needs

tables = {}
for kind in PartitionKind:
    limit = max(m * max_n + r for k, m, r, _ in families if k is kind)
    tables[kind] = partition_table(kind, limit)
    logger.info(f"Tabulated {kind.value}(n) for n <= {limit}")

# %%
# check each family

rows = []
for kind, m, r, modulus in tqdm(families, desc="Scanning congruences"):
    table = tables[kind]
    violations = congruence_violations(table, m, r, modulus)
    label = f"{kind.value}({m}n+{r}) mod {modulus}"
    if violations:
        logger.warning(f"{label}: {len(violations)} violations, first at n={violations[0]}")
    else:
        logger.info(f"{label}: holds for n <= {max_n}")
    rows += [
        {"family": label, "n": n, "value": str(table[m * n + r]), "residue": table[m * n + r] % modulus}
        for n in range(max_n + 1)
    ]

df = pd.DataFrame(rows)
logger.info(f"Residue counts:\n{df.groupby('family')['residue'].value_counts()}")

# %%
# save the residues

residues_path = os.path.join(out_dir, "residues.csv")
try:
    df.to_csv(residues_path, index=False)
    logger.info(f"Saved {len(df)} residues to {residues_path}")
except OSError as e:
    logger.error(f"Error writing residues: {e}")
    sys.exit(1)
