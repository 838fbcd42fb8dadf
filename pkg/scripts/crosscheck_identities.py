#!/usr/bin/env python3
"""Sweep the registered homeomorphism identities and report the outcome.

Usage: crosscheck_identities.py [bound]

Every identity instance whose two sides are both computable must verify
as dimension- and |H1|-equal; the default parameter bound is 50.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from isharp import datasets  # noqa: E402
from isharp.surgery import verify_identity  # noqa: E402
from isharp.verify import identity_instances  # noqa: E402


def main():
    bound = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    ds = datasets.load()
    total = equal = skipped = 0
    bad = []
    for lhs, rhs in identity_instances(ds, bound):
        try:
            r = verify_identity(lhs, rhs, ds)
        except Exception:
            skipped += 1
            continue
        total += 1
        if r.status == "equal":
            equal += 1
        else:
            bad.append(r)
            print(f"MISMATCH {r.lhs} vs {r.rhs}: {r.lhs_dim} vs {r.rhs_dim}")
    print(f"bound {bound}: {equal}/{total} identity instances equal "
          f"({skipped} skipped as not computable)")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
