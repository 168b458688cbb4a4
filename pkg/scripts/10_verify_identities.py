#!/usr/bin/env python
"""
Verify every identity in the registry and save the reports.

Each case is checked coefficient by coefficient to the requested number of terms;
the reports are written to a CSV file in registry order.
"""

# %%
import argparse
import os
import sys

import joblib
from loguru import logger
from tqdm import tqdm

from cubic_scan.identities import DEFAULT_JOBS, DEFAULT_TERMS, registry, verify
from cubic_scan.reports import Status, format_report, write_reports_csv

# %%
# configure the script

n_terms = DEFAULT_TERMS
n_jobs = DEFAULT_JOBS  # number of jobs to run in parallel
out_dir = "verification output"

# %%
# parse script arguments from command line

parser = argparse.ArgumentParser(description="Verify the identity registry and write a CSV of reports.")
parser.add_argument("--f", help="ignore; used by ipykernel_launcher")
parser.add_argument("--terms", type=int, default=n_terms, help="Number of coefficients to compare.")
parser.add_argument("--jobs", type=int, default=n_jobs, help="Number of jobs to run in parallel.")
parser.add_argument("--output", type=str, default=out_dir, help="Path to the output directory.")
args = parser.parse_args()
n_terms, n_jobs, out_dir = args.terms, args.jobs, args.output

os.makedirs(out_dir, exist_ok=True)

# %%
# verify the cases in parallel

cases = registry()
logger.info(f"Verifying {len(cases)} identities to {n_terms} terms")

with joblib.parallel_backend("loky", n_jobs=n_jobs):
    reports = joblib.Parallel(verbose=1)(
        joblib.delayed(verify)(case, n_terms) for case in tqdm(cases, desc="Verifying identities")
    )

for report in reports:
    logger.info(format_report(report))

# %%
# save the reports

reports_path = os.path.join(out_dir, "reports.csv")
try:
    write_reports_csv(reports_path, reports)
    logger.info(f"Saved {len(reports)} reports to {reports_path}")
except OSError as e:
    logger.error(f"Error writing reports: {e}")
    sys.exit(1)

n_failed = sum(report.status is not Status.VERIFIED for report in reports)
if n_failed:
    logger.warning(f"{n_failed} identities did not verify")
else:
    logger.info("All identities verified")
