#!/usr/bin/env python3
"""End-to-end certification demo on a genus-7 CM point.

The point sits over k(sqrt(T^15+T^2+2)) with conductor T(T+1); both
degree-1 primes are inert there, so the order's class number is
h_K * 4 * 4 = 29808, which clears the improper-intersection threshold
4*(|p|+1)^2 = 26896 at the first admissible prime (degree 4, norm 81).
Prints the search trace and the audited certificate.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cmtk import (
    CMPoint,
    QuadOrder,
    analyze_quadratic,
    canonical_dumps,
    certify_point,
    fq_from_q,
    parse_poly,
    principal_form,
    reaudit,
)


def main():
    F = fq_from_q(3)
    K = analyze_quadratic(F, parse_poly(F, "T^15+T^2+2"))
    order = QuadOrder.make(K, parse_poly(F, "T^2+T"))
    point = CMPoint(order, principal_form(order))
    print(f"field: k(sqrt {K.m.text()}), genus {K.genus}, {K.infinity_type} infinity")
    print(f"order: conductor {order.conductor.text()}, height {point.height}")

    t0 = time.time()
    cert = certify_point(point)
    elapsed = time.time() - t0
    print(f"verdict: {cert.verdict}  ({elapsed:.2f}s)")
    for ineq in cert.inequalities:
        print(f"  {ineq.name}: {ineq.lhs} > {ineq.rhs}  [{ineq.holds}]")
    obj = cert.json_obj()
    assert reaudit(obj), "certificate failed its own re-audit"
    print("re-audit: ok")
    sys.stdout.write(canonical_dumps(obj))


if __name__ == "__main__":
    main()
