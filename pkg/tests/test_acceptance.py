"""Acceptance suite: every criterion exact, one printed line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines; the
same criteria back ``spinelab verify all``.
"""

import pytest

from spinelab.verification import (
    RunConfig,
    criterion_algebra_structure,
    criterion_cells,
    criterion_census,
    criterion_classification,
    criterion_components,
    criterion_corollary,
    criterion_expansions,
    criterion_metacyclic,
    criterion_nielsen,
    criterion_properties,
    criterion_recursion,
    criterion_series,
    criterion_wreath,
)

BOUND = 40


def _report(number, result):
    line = f"ACCEPTANCE {number:2d} {result.name}: {'PASS' if result.passed else 'FAIL'}"
    print(line, "--", result.detail)
    assert result.passed, f"{result.name}: {result.detail}"


def test_01_census(rank4_complex):
    _report(1, criterion_census(rank4_complex))


def test_02_cells(rank4_complex):
    _report(2, criterion_cells(rank4_complex))


def test_03_components(rank4_complex):
    _report(3, criterion_components(rank4_complex))


def test_04_series_identities():
    _report(4, criterion_series(BOUND))


def test_05_algebra_structure():
    _report(5, criterion_algebra_structure(BOUND))


def test_06_corollary_sum(rank4_complex):
    _report(6, criterion_corollary(rank4_complex, BOUND))


def test_07_wreath_invariants():
    _report(7, criterion_wreath(BOUND))


def test_08_reduced_classification():
    _report(8, criterion_classification())


def test_09_nielsen():
    _report(9, criterion_nielsen())


def test_10_expansions():
    _report(10, criterion_expansions())


def test_11_metacyclic():
    _report(11, criterion_metacyclic(BOUND))


def test_12_recursion_pipeline():
    _report(12, criterion_recursion(BOUND))


def test_13_property_suites(rank4_complex):
    _report(13, criterion_properties(rank4_complex, BOUND, RunConfig().seed))
