"""Seeded random-cone suites shared by the catalog and acceptance tests."""

from __future__ import annotations

import numpy as np

from hardysharp.catalog import get_case, random_step, verify
from hardysharp.domain import Domain
from hardysharp.funcspace import Exponents

# case -> (alpha as a function of p, domain)
SETUPS = {
    "R1": (lambda p: p / 2, Domain.lower(1.0)),
    "R2": (lambda p: 1.5 * p, Domain.lower(1.0)),
    "R3": (lambda p: 1.0, Domain.upper(1.0)),
    "E1": (lambda p: p / 2, Domain.lower(1.0)),
    "E2": (lambda p: 1.0, Domain.upper(1.0)),
    "TS": (lambda p: p / 2, Domain.lower(1.0)),
    "B1": (lambda p: 1.0, Domain.lower(1.0)),
}


def random_suite(case_id: str, p: float, seeds: int = 200):
    """Reports for ``seeds`` random step functions drawn from the case's cone."""
    alpha, dom = SETUPS[case_id]
    case = get_case(case_id)
    params = Exponents(p, alpha=alpha(p))
    reports = []
    for seed in range(seeds):
        f = random_step(np.random.default_rng(seed), case.cone, dom)
        reports.append(verify(case, f, params, dom))
    return reports
