import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import canonical_orbit_count
from sepkit.errors import CheckpointError
from sepkit.poly import IntPolynomial as P
from sepkit.search import (
    SearchBox,
    canonicalize,
    certify,
    enumerate_box,
    read_checkpoint,
    records_csv,
    search_records,
    uniqueness_check,
    write_records,
)

coeff_lists = st.lists(st.integers(-20, 20), min_size=2, max_size=8).filter(lambda c: c[-1] != 0)


def _neg_x(p):
    return P([c * (-1) ** k for k, c in enumerate(p.coeffs)])


def test_canonical_examples():
    assert canonicalize(P([2, -13, 17, 14])).coeffs == (2, -13, 17, 14)
    assert canonicalize(P([-2, -13, -17, 14])).coeffs == (2, -13, 17, 14)
    assert canonicalize(P([-8, 7, 9, -17])).coeffs == (8, -7, -9, 17)
    assert canonicalize(P([-1, -1, 1])).coeffs == (-1, 1, 1)


@given(coeff_lists)
def test_canonical_is_orbit_invariant_and_idempotent(cs):
    p = P(cs)
    c = canonicalize(p)
    assert c.lead > 0
    assert canonicalize(c) == c
    for q in (-p, _neg_x(p), -_neg_x(p)):
        assert canonicalize(q) == c


@pytest.mark.parametrize("D,B", [(2, 1), (3, 1), (2, 2)])
def test_enumeration_matches_brute_force_orbits(D, B):
    got = list(enumerate_box(SearchBox(D, B)))
    assert len(got) == len(set(got)) == canonical_orbit_count(D, B)
    assert all(canonicalize(p) == p for p in got)


def test_enumeration_separable_filter():
    counters = {}
    got = list(enumerate_box(SearchBox(2, 1), metric="sep", counters=counters))
    assert len(got) == canonical_orbit_count(2, 1, separable_only=True)
    assert counters["skipped_non_separable"] > 0


@pytest.mark.parametrize("metric", ["sep", "abssep"])
def test_screened_search_matches_full_certification(metric):
    box = SearchBox(3, 3)
    every = [e for e, _ in (certify(p, metric) for p in enumerate_box(box)) if e is not None]
    every.sort(key=lambda e: e.sort_key())
    res = search_records(box, metric, top_k=5, chunk_size=97)
    assert res.margin_ok
    assert [r.poly for r in res.records] == [e.poly for e in every[:5]]
    threshold = every[2].value_upper * (1 + Fraction(1, 10**6))
    assert uniqueness_check(box, metric, threshold, chunk_size=97) == sum(
        1 for e in every if e.value_upper < threshold)


def test_workers_and_resume_are_deterministic(tmp_path):
    box = SearchBox(2, 5)
    base = search_records(box, "sep", top_k=3, chunk_size=50)
    par = search_records(box, "sep", top_k=3, chunk_size=50, workers=4)
    assert records_csv(base.records) == records_csv(par.records)
    ck = tmp_path / "ck.jsonl"
    assert search_records(box, "sep", top_k=3, chunk_size=50, checkpoint_path=ck, stop_after=2) is None
    # simulate a kill mid-write
    with open(ck, "a") as fh:
        fh.write('{"version": 1, "box": [2')
    resumed = search_records(box, "sep", top_k=3, chunk_size=50, checkpoint_path=ck)
    assert records_csv(resumed.records) == records_csv(base.records)
    assert resumed.counters == base.counters


def test_checkpoint_mismatch_and_corruption(tmp_path):
    box = SearchBox(2, 5)
    ck = tmp_path / "ck.jsonl"
    search_records(box, "sep", chunk_size=50, checkpoint_path=ck, stop_after=1)
    with pytest.raises(CheckpointError):
        search_records(box, "abssep", chunk_size=50, checkpoint_path=ck)
    with pytest.raises(CheckpointError):
        search_records(SearchBox(2, 4), "sep", chunk_size=50, checkpoint_path=ck)
    bad = tmp_path / "bad.jsonl"
    bad.write_text("not json\n")
    with pytest.raises(CheckpointError):
        read_checkpoint(bad)
    bad.write_text(json.dumps({"version": 1, "box": "x"}) + "\n")
    with pytest.raises(CheckpointError):
        search_records(box, "sep", chunk_size=50, checkpoint_path=bad)


def test_write_records(tmp_path):
    res = search_records(SearchBox(2, 2), "sep", top_k=2)
    js, cs = write_records(res.records, tmp_path / "records.json")
    assert cs.name == "records.csv"
    data = json.loads(js.read_text())
    assert len(data) == 2 and data[0]["metric"] == "sep"
    assert cs.read_text().splitlines()[0] == "coeffs,metric,lower,upper,witness_real"


def test_box_validation():
    with pytest.raises(ValueError):
        SearchBox(1, 3)
    with pytest.raises(ValueError):
        search_records(SearchBox(2, 1), "other")
