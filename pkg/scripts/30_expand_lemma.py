#!/usr/bin/env python
"""
Expand L^4 M^4, keep the terms whose q-exponent is 2 mod 3 and compare them with the printed table.

Prints the expansion grouped by q-degree, the differences from the printed transcription,
and checks each group against its closed eta-quotient form numerically.
"""

# %%
import argparse

from loguru import logger

from cubic_scan.identities import (
    LEMMA_CLOSED_FORMS,
    lemma_polynomial,
    printed_lemma_table,
    structural_problems,
    transcription_diff,
)
from cubic_scan.polyring import render_series
from cubic_scan.products import eval_product_spec
from cubic_scan.series import equal_up_to

# %%
# configure the script

order = 300  # q-order of the numerical group checks

# %%
# parse script arguments from command line

parser = argparse.ArgumentParser(description="Expand the residue-2 part of L^4 M^4.")
parser.add_argument("--f", help="ignore; used by ipykernel_launcher")
parser.add_argument("--order", type=int, default=order, help="q-order of the numerical group checks.")
args = parser.parse_args()
order = args.order

# %%
# expand and group

machine = lemma_polynomial()
logger.info(f"{len(machine)} terms with q-exponent 2 mod 3")
for qdeg, group in machine.groups().items():
    logger.info(f"q-degree {qdeg} ({len(group)} terms): {group.render()}")

for problem in structural_problems(machine):
    logger.warning(problem)

# %%
# compare with the printed table

diff = transcription_diff(machine, printed_lemma_table())
for typo in diff.typos:
    logger.warning(
        f"typo: printed {typo.coefficient} * {typo.printed.render()}, expansion gives {typo.corrected.render()}"
    )
for mismatch in diff.mismatches:
    logger.error(f"{mismatch.monomial.render()}: expansion {mismatch.machine}, printed {mismatch.printed}")

# %%
# check each group against its closed form

for qdeg, group in machine.groups().items():
    spec = LEMMA_CLOSED_FORMS[qdeg]
    comparison = equal_up_to(render_series(group, order), eval_product_spec(spec, order), order)
    if comparison:
        logger.info(f"q-degree {qdeg} = {spec.render()} to order {order}")
    else:
        logger.error(f"q-degree {qdeg} differs from {spec.render()} at q^{comparison.index}")
