#!/usr/bin/env python3
"""
Self-Loop Energy Verification Pipeline
Automated execution of every acceptance step, from the H-base spectra to the
exhaustive loop-set witness run.
"""

import argparse
import subprocess
import sys


def run_command(description, command):
    """Execute a command and handle errors."""
    print(f"\n{'='*80}")
    print(f"STEP: {description}")
    print(f"{'='*80}")
    print(f"Command: {command}\n")

    try:
        subprocess.run(command, shell=True, check=True, capture_output=False, text=True)
        print(f"✓ {description} completed successfully\n")
        return True
    except subprocess.CalledProcessError as e:
        print(f"✗ {description} failed with exit code {e.returncode}\n")
        return False


def build_steps(n_max, family_max, jobs):
    steps = [
        ("1. H-base loop spectra",
         "python3 src/cli.py verify-all --suite remark"),
    ]
    for n in range(1, family_max + 1):
        steps.append((f"2.{n} Equienergetic pair nH ∨ nK̄12, n={n}",
                      f"python3 src/cli.py family --partner empty --n {n}"))
    for n in range(1, min(family_max, 3) + 1):
        steps.append((f"3.{n} Equienergetic pair nH ∨ nK12, n={n}",
                      f"python3 src/cli.py family --partner complete --n {n}"))
    for n in range(2, n_max + 1):
        steps.append((f"4.{n} Loop-set witness on all graphs with {n} vertices",
                      f"python3 src/cli.py verify-all --suite conjecture --n-max {n} --jobs {jobs}"))
    for n in range(2, min(n_max, 5) + 1):
        steps.append((f"5.{n} Complement inequality, {n} vertices",
                      f"python3 src/cli.py verify-all --suite subadditivity --n-max {n} --jobs {jobs}"))
    for n in range(2, n_max + 1):
        steps.append((f"6.{n} Bipartite laws, {n} vertices",
                      f"python3 src/cli.py verify-all --suite bipartite --n-max {n} --jobs {jobs}"))
    return steps


def main():
    parser = argparse.ArgumentParser(description="Run every verification step in sequence")
    parser.add_argument("--n-max", type=int, default=6, help="Largest vertex count for the exhaustive suites")
    parser.add_argument("--family-max", type=int, default=5, help="Largest family index n")
    parser.add_argument("--jobs", type=int, default=1, help="Parallel workers for the exhaustive suites")
    parser.add_argument("--keep-going", action="store_true", help="Continue after a failed step")
    args = parser.parse_args()

    print("""
╔════════════════════════════════════════════════════════════════════════════╗
║            SELF-LOOP ENERGY VERIFICATION - AUTOMATED EXECUTION             ║
║        H-Base Spectra → Equienergetic Families → Exhaustive Suites         ║
╚════════════════════════════════════════════════════════════════════════════╝
""")

    failed_steps = []

    for description, command in build_steps(args.n_max, args.family_max, args.jobs):
        if not run_command(description, command):
            failed_steps.append(description)
            if not args.keep_going:
                print("\n❌ Pipeline execution aborted.")
                sys.exit(1)

    print("\n" + "="*80)
    if failed_steps:
        print(f"⚠ Pipeline completed with {len(failed_steps)} error(s):")
        for step in failed_steps:
            print(f"  - {step}")
    else:
        print("✓ ALL STEPS COMPLETED SUCCESSFULLY!")
    print("="*80)
    sys.exit(1 if failed_steps else 0)


if __name__ == "__main__":
    main()
